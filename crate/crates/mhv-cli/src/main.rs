//! Batch front end for the workbench: ad-hoc bracket and degree queries,
//! graded solver invocations, the full lemma registry, and 2-local recovery
//! on oracle files.
//!
//! Exit codes: 0 success (and stable/clean verdicts), 2 bad input or
//! configuration, 3 violation or instability findings, 4 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mhv_core::algebra::{Degree, Window};
use mhv_core::maps::Codomain;
use mhv_core::parse::{format_element, parse_element};
use mhv_core::registry::{run_lemma_registry, RegistryError, RunConfig};
use mhv_core::solver::{h1_component, hom_d0, solve_graded_derivations, SolveError};
use mhv_core::twolocal::{recover_derivation, RecoveryVerdict, TwoLocalError, TwoLocalOracle};
use mhv_core::{bracket, GradedMap};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CodomainArg {
    #[value(name = "H", alias = "h")]
    H,
    #[value(name = "D", alias = "d")]
    D,
}

impl From<CodomainArg> for Codomain {
    fn from(value: CodomainArg) -> Codomain {
        match value {
            CodomainArg::H => Codomain::H,
            CodomainArg::D => Codomain::D,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mhv",
    version,
    about = "Exact workbench for the mirror Heisenberg-Virasoro algebra"
)]
struct Cli {
    /// Outer truncation bound N.
    #[arg(long, global = true, default_value_t = 10)]
    window: i64,
    /// Interior bound M on which dimensions are reported.
    #[arg(long, global = true, default_value_t = 5)]
    interior: i64,
    /// Seed for the randomized suites.
    #[arg(long, global = true, env = "MHV_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket of two elements given in the text grammar.
    Bracket { expr_a: String, expr_b: String },
    /// Degree of an element (or `zero` / `non-homogeneous`).
    Degree { expr: String },
    /// Solve one graded derivation space.
    Solve {
        #[arg(long, value_enum)]
        codomain: CodomainArg,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
    },
    /// One first-cohomology component with coset representatives.
    H1 {
        #[arg(long, value_enum)]
        codomain: CodomainArg,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
    },
    /// Equivariant maps between graded components under the degree-0
    /// subalgebra.
    Hom {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Run the lemma registry and report per-lemma verdicts.
    Verify {
        /// Restrict to specific lemma ids (repeatable).
        #[arg(long = "lemma")]
        lemmas: Vec<String>,
        /// Also write the JSON report to this path.
        #[arg(long = "json")]
        json_path: Option<PathBuf>,
    },
    /// Recover a global derivation from a 2-local oracle file.
    Recover {
        #[arg(long)]
        oracle: PathBuf,
        /// Extraction index (must avoid 0 and 1).
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        t: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let window = match Window::new(cli.window, cli.interior) {
        Ok(w) => w,
        Err(e) => return usage_error(&e.to_string()),
    };
    // The defaults must support every |degree| <= 3 solve out of the box;
    // anything tighter is rejected up front rather than mid-run.
    if window.outer < window.interior + 5 {
        return usage_error(&format!(
            "window outer = {} too small for interior = {} (need outer >= interior + 5)",
            window.outer, window.interior
        ));
    }
    let format = cli.format;
    match cli.command {
        Command::Bracket { expr_a, expr_b } => cmd_bracket(&expr_a, &expr_b, format),
        Command::Degree { expr } => cmd_degree(&expr, format),
        Command::Solve { codomain, degree } => cmd_solve(codomain.into(), degree, window, format),
        Command::H1 { codomain, degree } => cmd_h1(codomain.into(), degree, window, format),
        Command::Hom { m, n } => cmd_hom(m, n, format),
        Command::Verify { lemmas, json_path } => {
            cmd_verify(window, cli.seed, &lemmas, json_path.as_deref(), format)
        }
        Command::Recover { oracle, t } => cmd_recover(&oracle, t, format),
    }
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn emit_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn cmd_bracket(expr_a: &str, expr_b: &str, format: Format) -> ExitCode {
    let parse = |name: &str, text: &str| {
        parse_element(text).map_err(|e| format!("in {name} expression: {e}"))
    };
    let (a, b) = match (parse("first", expr_a), parse("second", expr_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return usage_error(&e),
    };
    let result = bracket(&a, &b);
    match format {
        Format::Text => println!("{}", format_element(&result)),
        Format::Json => emit_json(&serde_json::json!({
            "text": format_element(&result),
            "element": result,
        })),
    }
    ExitCode::from(EXIT_OK)
}

fn cmd_degree(expr: &str, format: Format) -> ExitCode {
    let element = match parse_element(expr) {
        Ok(e) => e,
        Err(e) => return usage_error(&e.to_string()),
    };
    let degree = element.degree();
    match format {
        Format::Text => match degree {
            Degree::Zero => println!("zero"),
            Degree::Homogeneous(n) => println!("{n}"),
            Degree::NonHomogeneous => println!("non-homogeneous"),
        },
        Format::Json => emit_json(&serde_json::json!({
            "degree": degree.value(),
            "zero": degree == Degree::Zero,
            "homogeneous": matches!(degree, Degree::Homogeneous(_)),
        })),
    }
    ExitCode::from(EXIT_OK)
}

fn render_map_text(map: &GradedMap, indent: &str) {
    for (bv, image) in map.images() {
        println!("{indent}{} -> {}", bv.key(), format_element(image));
    }
}

fn solve_error(e: SolveError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        SolveError::BufferViolation { .. } => ExitCode::from(EXIT_USAGE),
        SolveError::Inconsistent(_) => ExitCode::from(EXIT_VIOLATION),
    }
}

fn cmd_solve(codomain: Codomain, degree: i64, window: Window, format: Format) -> ExitCode {
    let report = match solve_graded_derivations(codomain, degree, window) {
        Ok(r) => r,
        Err(e) => return solve_error(e),
    };
    match format {
        Format::Text => {
            println!(
                "derivations into {} at degree {degree}, window ({}, {})",
                report.codomain.label(),
                window.outer,
                window.interior
            );
            println!(
                "space_dim = {}, inner_dim = {}, outer_dim = {}, stable = {}",
                report.space_dim, report.inner_dim, report.outer_dim, report.stable
            );
            for (i, rep) in report.representatives.iter().enumerate() {
                println!("representative {i}:");
                render_map_text(rep, "  ");
            }
        }
        Format::Json => emit_json(&report),
    }
    if report.stable {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn cmd_h1(codomain: Codomain, degree: i64, window: Window, format: Format) -> ExitCode {
    let report = match h1_component(codomain, degree, window) {
        Ok(r) => r,
        Err(e) => return solve_error(e),
    };
    match format {
        Format::Text => {
            println!(
                "H1 component into {} at degree {degree}, window ({}, {})",
                report.report.codomain.label(),
                window.outer,
                window.interior
            );
            println!(
                "space_dim = {}, inner_dim = {}, outer_dim = {}, stable = {}",
                report.report.space_dim,
                report.report.inner_dim,
                report.report.outer_dim,
                report.report.stable
            );
            if let (Some(d1), Some(d2)) = (&report.d1_inner, &report.d2_inner) {
                println!("D1 inner: {}", d1.member);
                println!("D2 inner: {}", d2.member);
            }
            for (i, rep) in report.report.representatives.iter().enumerate() {
                println!("coset representative {i}:");
                render_map_text(rep, "  ");
            }
        }
        Format::Json => emit_json(&report),
    }
    if report.report.stable {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn cmd_hom(m: i64, n: i64, format: Format) -> ExitCode {
    let report = hom_d0(m, n);
    match format {
        Format::Text => {
            println!(
                "equivariant maps from degree {m} to degree {n}: dim = {}",
                report.dim
            );
            for (i, map) in report.basis.iter().enumerate() {
                println!("basis map {i}:");
                render_map_text(map, "  ");
            }
        }
        Format::Json => emit_json(&report),
    }
    ExitCode::from(EXIT_OK)
}

fn cmd_verify(
    window: Window,
    seed: u64,
    lemmas: &[String],
    json_path: Option<&std::path::Path>,
    format: Format,
) -> ExitCode {
    let config = RunConfig { window, seed };
    let report = match run_lemma_registry(config, lemmas) {
        Ok(r) => r,
        Err(RegistryError::UnknownLemma(id)) => {
            return usage_error(&format!("unknown lemma id `{id}`"))
        }
        Err(RegistryError::Solve(e)) => return solve_error(e),
    };
    if let Some(path) = json_path {
        let body = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, body + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_IO);
        }
    }
    match format {
        Format::Text => {
            println!(
                "lemma registry at window ({}, {}), seed {seed}",
                window.outer, window.interior
            );
            for result in &report.results {
                let verdict = serde_json::to_value(result.verdict).expect("verdict serializes");
                println!("  {:<14} {}", result.lemma, verdict.as_str().unwrap());
            }
            let discrepancies = report.discrepancies();
            if !discrepancies.is_empty() {
                println!("flagged discrepancies: {}", discrepancies.join(", "));
            }
        }
        Format::Json => emit_json(&report),
    }
    if report.has_violation() {
        ExitCode::from(EXIT_VIOLATION)
    } else {
        ExitCode::from(EXIT_OK)
    }
}

fn cmd_recover(path: &std::path::Path, t: i64, format: Format) -> ExitCode {
    let body = match std::fs::read_to_string(path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let oracle: TwoLocalOracle = match serde_json::from_str(&body) {
        Ok(o) => o,
        Err(e) => return usage_error(&format!("malformed oracle file: {e}")),
    };
    let report = match recover_derivation(&oracle, t) {
        Ok(r) => r,
        Err(e @ (TwoLocalError::NotTwoLocal | TwoLocalError::ShapeViolation { .. })) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VIOLATION);
        }
        Err(e) => return usage_error(&e.to_string()),
    };
    match format {
        Format::Text => {
            println!("base descriptor:");
            println!("  u     = {}", format_element(&report.base.u));
            println!("  alpha = {}", report.base.alpha);
            println!("  beta  = {}", report.base.beta);
            println!("lambda = {}", report.lambda);
            match &report.verdict {
                RecoveryVerdict::Derivation => println!("verdict: derivation"),
                RecoveryVerdict::Violation { witness, defect } => {
                    println!(
                        "verdict: violation at {witness} (defect {}, {} failing points)",
                        format_element(defect),
                        report.residual_max_support
                    );
                }
            }
        }
        Format::Json => emit_json(&report),
    }
    if report.is_derivation() {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}
