//! The lemma registry: one deterministic report re-verifying every
//! structural statement the workbench covers, entry by entry.
//!
//! Verdicts are honest outcomes, not assertions. `verified` means the claim
//! was checked exhaustively at a finite size with no truncation caveat;
//! `verified-at-window` means the computation certifies the claim for the
//! configured window (with the cross-window stability flag as the
//! safeguard); `discrepancy` means the computation contradicts the recorded
//! claim and the report carries both sides plus witnesses, adopting
//! neither; `out-of-scope` marks statements the workbench deliberately does
//! not model; `violation` flags an internal check that failed outright.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    basis_with_bound, bracket, jacobi_defect, BasisVector, Degree, Element, Window,
};
use crate::maps::{d1_image, d2_image, Codomain, GradedMap};
use crate::parse::format_element;
use crate::rational::Rational;
use crate::solver::{
    equivariant_hom_h_to_v, h1_component, h1_d0_hn, hom_d0, required_outer,
    solve_graded_derivations, SolveError,
};

/// Parameters of one registry run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunConfig {
    pub window: Window,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "verified-at-window")]
    VerifiedAtWindow,
    #[serde(rename = "discrepancy")]
    Discrepancy,
    #[serde(rename = "out-of-scope")]
    OutOfScope,
    #[serde(rename = "violation")]
    Violation,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaResult {
    pub lemma: String,
    pub verdict: Verdict,
    pub computed: Value,
    pub paper_claim: Value,
    pub witnesses: Vec<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegistryReport {
    pub window: Window,
    pub seed: u64,
    pub results: Vec<LemmaResult>,
}

impl RegistryReport {
    pub fn has_violation(&self) -> bool {
        self.results.iter().any(|r| r.verdict == Verdict::Violation)
    }

    pub fn discrepancies(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| r.verdict == Verdict::Discrepancy)
            .map(|r| r.lemma.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
}

pub const LEMMA_IDS: &[&str] = &[
    "antisymmetry",
    "jacobi",
    "2.1",
    "YY",
    "UU",
    "RR",
    "PP",
    "D1D2",
    "2.9",
    "2.10",
    "QQ",
    "PO",
    "ZA",
    "VB",
];

/// Run the registry. An empty filter runs every entry; otherwise only the
/// listed lemma ids are computed (in registry order).
pub fn run_lemma_registry(
    config: RunConfig,
    filter: &[String],
) -> Result<RegistryReport, RegistryError> {
    for id in filter {
        if !LEMMA_IDS.contains(&id.as_str()) {
            return Err(RegistryError::UnknownLemma(id.clone()));
        }
    }
    let wanted = |id: &str| filter.is_empty() || filter.iter().any(|f| f == id);
    let mut results = Vec::new();
    for &id in LEMMA_IDS {
        if !wanted(id) {
            continue;
        }
        let result = match id {
            "antisymmetry" => check_antisymmetry(config),
            "jacobi" => check_jacobi(config),
            "2.1" => check_grading(),
            "YY" => check_degree_decomposition(),
            "UU" => check_h1_d0(),
            "RR" => check_hom_offdiagonal(),
            "PP" => check_hom_degree_zero(),
            "D1D2" => check_d1_d2_are_derivations(config),
            "2.9" => check_degree_zero_family(config)?,
            "2.10" => check_degree_minus_one_family(config)?,
            "QQ" => check_nonzero_degrees_inner(config)?,
            "PO" => check_h1_into_h(config)?,
            "ZA" => check_equivariant_hom(),
            "VB" => check_h1_into_d(config)?,
            _ => unreachable!("lemma id list is fixed"),
        };
        results.push(result);
    }
    Ok(RegistryReport {
        window: config.window,
        seed: config.seed,
        results,
    })
}

fn random_basis_vector<R: Rng>(rng: &mut R, bound: i64) -> BasisVector {
    match rng.random_range(0..10u32) {
        0 => BasisVector::C,
        1 => BasisVector::L,
        2..=5 => BasisVector::D(rng.random_range(-bound..=bound)),
        _ => BasisVector::H(rng.random_range(-bound..=bound)),
    }
}

const EXHAUSTIVE_BOUND: i64 = 6;
const RANDOM_BOUND: i64 = 12;
const RANDOM_TRIALS: usize = 1000;

fn check_antisymmetry(config: RunConfig) -> LemmaResult {
    let basis = basis_with_bound(EXHAUSTIVE_BOUND);
    let mut witnesses = Vec::new();
    let mut pairs = 0usize;
    for &x in &basis {
        for &y in &basis {
            pairs += 1;
            let xe = Element::basis(x);
            let ye = Element::basis(y);
            let sum = bracket(&xe, &ye).add(&bracket(&ye, &xe));
            if !sum.is_zero() {
                witnesses.push(json!({ "x": x.key(), "y": y.key(), "defect": sum }));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..RANDOM_TRIALS {
        let x = Element::basis(random_basis_vector(&mut rng, RANDOM_BOUND));
        let y = Element::basis(random_basis_vector(&mut rng, RANDOM_BOUND));
        if !bracket(&x, &y).add(&bracket(&y, &x)).is_zero() {
            witnesses.push(json!({
                "x": format_element(&x),
                "y": format_element(&y),
            }));
        }
    }
    LemmaResult {
        lemma: "antisymmetry".into(),
        verdict: if witnesses.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Violation
        },
        computed: json!({
            "exhaustive_bound": EXHAUSTIVE_BOUND,
            "exhaustive_pairs": pairs,
            "random_trials": RANDOM_TRIALS,
            "random_bound": RANDOM_BOUND,
            "failures": witnesses.len(),
        }),
        paper_claim: json!("[x, y] = -[y, x] for all basis pairs"),
        witnesses,
    }
}

fn check_jacobi(config: RunConfig) -> LemmaResult {
    let basis = basis_with_bound(EXHAUSTIVE_BOUND);
    let mut witnesses = Vec::new();
    let mut triples = 0usize;
    for (i, &x) in basis.iter().enumerate() {
        for (j, &y) in basis.iter().enumerate().skip(i) {
            for &z in basis.iter().skip(j) {
                triples += 1;
                let defect =
                    jacobi_defect(&Element::basis(x), &Element::basis(y), &Element::basis(z));
                if !defect.is_zero() {
                    witnesses.push(json!({
                        "x": x.key(),
                        "y": y.key(),
                        "z": z.key(),
                        "defect": defect,
                    }));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x9e3779b97f4a7c15);
    for _ in 0..RANDOM_TRIALS {
        let x = Element::basis(random_basis_vector(&mut rng, RANDOM_BOUND));
        let y = Element::basis(random_basis_vector(&mut rng, RANDOM_BOUND));
        let z = Element::basis(random_basis_vector(&mut rng, RANDOM_BOUND));
        if !jacobi_defect(&x, &y, &z).is_zero() {
            witnesses.push(json!({
                "x": format_element(&x),
                "y": format_element(&y),
                "z": format_element(&z),
            }));
        }
    }
    LemmaResult {
        lemma: "jacobi".into(),
        verdict: if witnesses.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Violation
        },
        computed: json!({
            "exhaustive_bound": EXHAUSTIVE_BOUND,
            "exhaustive_triples": triples,
            "random_trials": RANDOM_TRIALS,
            "random_bound": RANDOM_BOUND,
            "failures": witnesses.len(),
        }),
        paper_claim: json!("the structure constants satisfy the Jacobi identity"),
        witnesses,
    }
}

const GRADING_BOUND: i64 = 8;

fn check_grading() -> LemmaResult {
    let basis = basis_with_bound(GRADING_BOUND);
    let mut witnesses = Vec::new();
    let mut pairs = 0usize;
    for &x in &basis {
        for &y in &basis {
            pairs += 1;
            let b = bracket(&Element::basis(x), &Element::basis(y));
            if b.is_zero() {
                continue;
            }
            let additive = b.degree() == Degree::Homogeneous(x.degree() + y.degree());
            let ideal_ok = !y.in_heisenberg() || b.in_heisenberg();
            if !additive || !ideal_ok {
                witnesses.push(json!({
                    "x": x.key(),
                    "y": y.key(),
                    "bracket": b,
                }));
            }
        }
    }
    LemmaResult {
        lemma: "2.1".into(),
        verdict: if witnesses.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Violation
        },
        computed: json!({
            "bound": GRADING_BOUND,
            "pairs": pairs,
            "failures": witnesses.len(),
        }),
        paper_claim: json!(
            "the Heisenberg ideal is a graded module: brackets add degrees and land in the ideal"
        ),
        witnesses,
    }
}

fn check_degree_decomposition() -> LemmaResult {
    LemmaResult {
        lemma: "YY".into(),
        verdict: Verdict::OutOfScope,
        computed: json!(
            "the decomposition is the computational frame: every solver works one degree at a time"
        ),
        paper_claim: json!("the derivation space decomposes as the direct sum of its graded parts"),
        witnesses: Vec::new(),
    }
}

const FINITE_RANGE: i64 = 6;

fn check_h1_d0() -> LemmaResult {
    let mut dims = Vec::new();
    let mut witnesses = Vec::new();
    let mut ok = true;
    for n in -FINITE_RANGE..=FINITE_RANGE {
        let report = h1_d0_hn(n);
        dims.push(json!({ "n": n, "h1_dim": report.h1_dim }));
        if n == 0 || n == -1 {
            continue;
        }
        if report.h1_dim != 0 {
            ok = false;
            witnesses.push(json!({ "n": n, "h1_dim": report.h1_dim }));
            continue;
        }
        // Witness shape: realizing element -(a / (n + 1/2)) h_{n+1/2} for
        // the derivation sending d_0 to a h_{n+1/2}.
        for w in &report.witnesses {
            let a = w
                .derivation
                .image_of(BasisVector::D(0))
                .expect("d0 in domain")
                .coeff(BasisVector::H(n));
            let expected = Element::term(BasisVector::H(n), -(&a / &Rational::half_odd(n)));
            let found = w.inner_element.clone();
            let matches = found.as_ref() == Some(&expected);
            if !matches {
                ok = false;
            }
            witnesses.push(json!({
                "n": n,
                "realizing_element": found.map(|e| format_element(&e)),
                "matches_formula": matches,
            }));
        }
    }
    LemmaResult {
        lemma: "UU".into(),
        verdict: if ok { Verdict::Verified } else { Verdict::Violation },
        computed: json!({ "h1_dims": dims }),
        paper_claim: json!(
            "H1 of the degree-0 subalgebra with values in each graded module piece vanishes except in degrees 0 and -1"
        ),
        witnesses,
    }
}

fn check_hom_offdiagonal() -> LemmaResult {
    let mut witnesses = Vec::new();
    let mut checked = 0usize;
    for m in -FINITE_RANGE..=FINITE_RANGE {
        if m == 0 {
            continue;
        }
        for n in -FINITE_RANGE..=FINITE_RANGE {
            if n == m {
                continue;
            }
            checked += 1;
            let report = hom_d0(m, n);
            if report.dim != 0 {
                witnesses.push(json!({ "m": m, "n": n, "dim": report.dim }));
            }
        }
    }
    LemmaResult {
        lemma: "RR".into(),
        verdict: if witnesses.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Violation
        },
        computed: json!({ "range": FINITE_RANGE, "pairs_checked": checked, "nonzero": witnesses.len() }),
        paper_claim: json!(
            "equivariant maps between components of different nonzero source degree vanish"
        ),
        witnesses,
    }
}

fn check_hom_degree_zero() -> LemmaResult {
    let mut witnesses = Vec::new();
    for n in -FINITE_RANGE..=FINITE_RANGE {
        if n == 0 || n == -1 {
            continue;
        }
        let report = hom_d0(0, n);
        if report.dim != 0 {
            witnesses.push(json!({ "n": n, "dim": report.dim }));
        }
    }
    // The two excluded degrees carry no claim; report them as data.
    let extras = json!({
        "dim_at_n_0": hom_d0(0, 0).dim,
        "dim_at_n_minus_1": hom_d0(0, -1).dim,
    });
    LemmaResult {
        lemma: "PP".into(),
        verdict: if witnesses.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Violation
        },
        computed: json!({ "range": FINITE_RANGE, "excluded_degrees": extras }),
        paper_claim: json!(
            "equivariant maps out of the degree-0 component vanish except into degrees 0 and -1"
        ),
        witnesses,
    }
}

fn check_d1_d2_are_derivations(config: RunConfig) -> LemmaResult {
    let bound = config.window.outer;
    // Tabulate on twice the bound so every bracket of window vectors has
    // its image available.
    let wide = Window::new(2 * bound, bound).expect("valid window");
    let maps = [
        ("D1", crate::maps::make_d1(wide, Codomain::H)),
        ("D2", crate::maps::make_d2(wide, Codomain::H)),
    ];
    let mut witnesses = Vec::new();
    let basis = basis_with_bound(bound);
    for (name, map) in &maps {
        for &x in &basis {
            for &y in &basis {
                let defect = map.derivation_defect(x, y).expect("window wide enough");
                if !defect.is_zero() {
                    witnesses.push(json!({
                        "map": name,
                        "x": x.key(),
                        "y": y.key(),
                        "defect": defect,
                    }));
                }
            }
        }
    }
    // Linear independence seen at h_{-1/2}: D1 contributes h_{-1/2}, D2
    // contributes l.
    let probe = Element::basis(BasisVector::H(-1));
    let independent =
        d1_image(&probe) == probe.clone() && d2_image(&probe) == Element::basis(BasisVector::L);
    if !independent {
        witnesses.push(json!("independence probe at h[-1] failed"));
    }
    LemmaResult {
        lemma: "D1D2".into(),
        verdict: if witnesses.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Violation
        },
        computed: json!({
            "bound": bound,
            "leibniz_failures": witnesses.len(),
            "independent_at_h_minus_half": independent,
        }),
        paper_claim: json!(
            "the scaling map D1 and the shift map D2 are linearly independent derivations"
        ),
        witnesses,
    }
}

/// The degree-0 two-parameter family: d_n ↦ a h_{n+1/2},
/// h_{n+1/2} ↦ b h_{n+1/2} + [n = -1] a l, c ↦ 0, l ↦ 2b l.
fn matches_degree_zero_family(rep: &GradedMap, interior: i64) -> Option<(Rational, Rational)> {
    let a = rep
        .image_of(BasisVector::D(0))
        .ok()?
        .coeff(BasisVector::H(0));
    let b = rep
        .image_of(BasisVector::H(1))
        .ok()?
        .coeff(BasisVector::H(1));
    for bv in basis_with_bound(interior) {
        let image = rep.image_of(bv).ok()?;
        let expected = match bv {
            BasisVector::D(n) => Element::term(BasisVector::H(n), a.clone()),
            BasisVector::H(k) => {
                let mut e = Element::term(BasisVector::H(k), b.clone());
                if k == -1 {
                    e.add_term(BasisVector::L, a.clone());
                }
                e
            }
            BasisVector::C => Element::zero(),
            BasisVector::L => Element::term(BasisVector::L, &b + &b),
        };
        if *image != expected {
            return None;
        }
    }
    Some((a, b))
}

/// The degree -1 one-parameter family: d_n ↦ c h_{n-1/2},
/// h_{n+1/2} ↦ [n = 0] c l, c ↦ 0, l ↦ 0.
fn matches_degree_minus_one_family(rep: &GradedMap, interior: i64) -> Option<Rational> {
    let c = rep
        .image_of(BasisVector::D(0))
        .ok()?
        .coeff(BasisVector::H(-1));
    for bv in basis_with_bound(interior) {
        let image = rep.image_of(bv).ok()?;
        let expected = match bv {
            BasisVector::D(n) => Element::term(BasisVector::H(n - 1), c.clone()),
            BasisVector::H(0) => Element::term(BasisVector::L, c.clone()),
            _ => Element::zero(),
        };
        if *image != expected {
            return None;
        }
    }
    Some(c)
}

fn check_degree_zero_family(config: RunConfig) -> Result<LemmaResult, RegistryError> {
    let report = solve_graded_derivations(Codomain::H, 0, config.window)?;
    let mut witnesses = Vec::new();
    let mut ok = report.space_dim == 2 && report.stable;
    for rep in &report.representatives {
        match matches_degree_zero_family(rep, config.window.interior) {
            Some((a, b)) => witnesses.push(json!({
                "a": a.to_string(),
                "b": b.to_string(),
            })),
            None => {
                ok = false;
                witnesses.push(json!({ "representative_outside_family": rep }));
            }
        }
    }
    Ok(LemmaResult {
        lemma: "2.9".into(),
        verdict: if ok {
            Verdict::VerifiedAtWindow
        } else {
            Verdict::Violation
        },
        computed: json!({
            "space_dim": report.space_dim,
            "stable": report.stable,
        }),
        paper_claim: json!(
            "degree-0 derivations into the ideal form the two-parameter family (a, b) with l ↦ 2b l and c ↦ 0"
        ),
        witnesses,
    })
}

fn check_degree_minus_one_family(config: RunConfig) -> Result<LemmaResult, RegistryError> {
    let report = solve_graded_derivations(Codomain::H, -1, config.window)?;
    let h1 = h1_component(Codomain::H, -1, config.window)?;
    let mut witnesses = Vec::new();
    let mut ok = report.space_dim == 1 && report.stable && h1.report.outer_dim == 0;
    for rep in &report.representatives {
        match matches_degree_minus_one_family(rep, config.window.interior) {
            Some(c) => {
                // Inner realization by 2c h_{-1/2}.
                let realizer = Element::term(BasisVector::H(-1), &c + &c);
                let mut realized = true;
                for bv in basis_with_bound(config.window.interior) {
                    let expected = bracket(&Element::basis(bv), &realizer);
                    if *rep.image_of(bv).expect("interior image") != expected {
                        realized = false;
                    }
                }
                ok &= realized;
                witnesses.push(json!({
                    "c": c.to_string(),
                    "inner_realizer": format_element(&realizer),
                    "realizes_family": realized,
                }));
            }
            None => {
                ok = false;
                witnesses.push(json!({ "representative_outside_family": rep }));
            }
        }
    }
    Ok(LemmaResult {
        lemma: "2.10".into(),
        verdict: if ok {
            Verdict::VerifiedAtWindow
        } else {
            Verdict::Violation
        },
        computed: json!({
            "space_dim": report.space_dim,
            "outer_dim": h1.report.outer_dim,
            "stable": report.stable && h1.report.stable,
        }),
        paper_claim: json!(
            "degree -1 derivations into the ideal form a one-parameter inner family realized by 2c h_{-1/2}"
        ),
        witnesses,
    })
}

fn check_nonzero_degrees_inner(config: RunConfig) -> Result<LemmaResult, RegistryError> {
    let mut outer_dims = Vec::new();
    let mut skipped = Vec::new();
    let mut ok = true;
    for delta in -5i64..=5 {
        if delta == 0 || delta == -1 {
            continue;
        }
        if config.window.outer < required_outer(config.window.interior, delta) {
            skipped.push(json!(delta));
            continue;
        }
        let h1 = h1_component(Codomain::H, delta, config.window)?;
        if h1.report.outer_dim != 0 || !h1.report.stable {
            ok = false;
        }
        outer_dims.push(json!({
            "delta": delta,
            "outer_dim": h1.report.outer_dim,
            "stable": h1.report.stable,
        }));
    }
    Ok(LemmaResult {
        lemma: "QQ".into(),
        verdict: if ok {
            Verdict::VerifiedAtWindow
        } else {
            Verdict::Violation
        },
        computed: json!({ "outer_dims": outer_dims, "skipped_degrees": skipped }),
        paper_claim: json!(
            "every derivation into the ideal is a degree-0 derivation plus an inner one: nonzero degrees contribute nothing outer"
        ),
        witnesses: Vec::new(),
    })
}

/// Pointwise comparison of the shift derivation D2 against the inner map
/// x ↦ [x, -2 h_{1/2}] on every window basis vector.
pub fn d2_vs_ad_table(bound: i64) -> (Vec<Value>, bool) {
    let witness = Element::term(BasisVector::H(0), Rational::from_int(-2));
    let mut rows = Vec::new();
    let mut all_equal = true;
    for bv in basis_with_bound(bound) {
        let x = Element::basis(bv);
        let d2 = d2_image(&x);
        let ad = bracket(&x, &witness);
        let equal = d2 == ad;
        all_equal &= equal;
        rows.push(json!({
            "x": bv.key(),
            "d2": format_element(&d2),
            "ad": format_element(&ad),
            "equal": equal,
        }));
    }
    (rows, all_equal)
}

fn check_h1_into_h(config: RunConfig) -> Result<LemmaResult, RegistryError> {
    let h1 = h1_component(Codomain::H, 0, config.window)?;
    let d1 = h1.d1_inner.clone().expect("delta 0 reports membership");
    let d2 = h1.d2_inner.clone().expect("delta 0 reports membership");
    let (table, table_equal) = d2_vs_ad_table(config.window.outer);

    // Internal consistency: the span-membership verdict for D2 and the
    // pointwise table must tell the same story.
    let consistent = d2.member == table_equal && h1.report.stable;
    let claimed_outer = 2usize;
    let agrees_with_claim = h1.report.outer_dim == claimed_outer && !d1.member && !d2.member;

    let verdict = if !consistent || d1.member {
        Verdict::Violation
    } else if agrees_with_claim {
        Verdict::VerifiedAtWindow
    } else {
        Verdict::Discrepancy
    };

    let mut witnesses = vec![json!({
        "d2_membership_coordinates": d2.coordinates.as_ref().map(|cs| {
            cs.iter().map(Rational::to_string).collect::<Vec<_>>()
        }),
        "d2_equals_ad_of_minus_2_h_half": table_equal,
    })];
    witnesses.extend(table);

    Ok(LemmaResult {
        lemma: "PO".into(),
        verdict,
        computed: json!({
            "outer_dim": h1.report.outer_dim,
            "space_dim": h1.report.space_dim,
            "inner_dim": h1.report.inner_dim,
            "d1_inner": d1.member,
            "d2_inner": d2.member,
            "stable": h1.report.stable,
        }),
        paper_claim: json!({
            "outer_dim": claimed_outer,
            "outer_basis": ["D1", "D2"],
        }),
        witnesses,
    })
}

fn check_equivariant_hom() -> LemmaResult {
    let mut dims = Vec::new();
    let mut ok = true;
    for outer in [3i64, 5, 8] {
        let dim = equivariant_hom_h_to_v(outer);
        ok &= dim == 0;
        dims.push(json!({ "outer": outer, "dim": dim }));
    }
    LemmaResult {
        lemma: "ZA".into(),
        verdict: if ok { Verdict::Verified } else { Verdict::Violation },
        computed: json!({ "dims": dims }),
        paper_claim: json!(
            "no nonzero map from the h-span to the Virasoro subalgebra commutes with the d-action: integer eigenvalues never meet half-integers"
        ),
        witnesses: Vec::new(),
    }
}

fn check_h1_into_d(config: RunConfig) -> Result<LemmaResult, RegistryError> {
    let h1 = h1_component(Codomain::D, 0, config.window)?;
    let d1 = h1.d1_inner.clone().expect("delta 0 reports membership");
    let d2 = h1.d2_inner.clone().expect("delta 0 reports membership");

    let mut nonzero_degree_dims = Vec::new();
    let mut nonzero_ok = true;
    for delta in -3i64..=3 {
        if delta == 0 {
            continue;
        }
        if config.window.outer < required_outer(config.window.interior, delta) {
            continue;
        }
        let part = h1_component(Codomain::D, delta, config.window)?;
        nonzero_ok &= part.report.outer_dim == 0 && part.report.stable;
        nonzero_degree_dims.push(json!({
            "delta": delta,
            "outer_dim": part.report.outer_dim,
        }));
    }

    let claimed_outer = 2usize;
    let agrees_with_claim = h1.report.outer_dim == claimed_outer && !d1.member && !d2.member;
    let verdict = if d1.member || !nonzero_ok || !h1.report.stable {
        Verdict::Violation
    } else if agrees_with_claim {
        Verdict::VerifiedAtWindow
    } else {
        Verdict::Discrepancy
    };

    Ok(LemmaResult {
        lemma: "VB".into(),
        verdict,
        computed: json!({
            "degree_0": {
                "space_dim": h1.report.space_dim,
                "inner_dim": h1.report.inner_dim,
                "outer_dim": h1.report.outer_dim,
                "d1_inner": d1.member,
                "d2_inner": d2.member,
                "stable": h1.report.stable,
            },
            "nonzero_degrees": nonzero_degree_dims,
        }),
        paper_claim: json!({
            "outer_dim": claimed_outer,
            "outer_basis": ["D1", "D2"],
        }),
        witnesses: vec![json!({
            "d2_membership_coordinates": d2.coordinates.as_ref().map(|cs| {
                cs.iter().map(Rational::to_string).collect::<Vec<_>>()
            }),
        })],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> RunConfig {
        RunConfig {
            window: Window::new(10, 5).unwrap(),
            seed: 7,
        }
    }

    #[test]
    fn full_registry_runs_clean() {
        let report = run_lemma_registry(config(), &[]).unwrap();
        assert_eq!(report.results.len(), LEMMA_IDS.len());
        assert!(!report.has_violation());
        // The shift-derivation question surfaces as discrepancies, never as
        // silent adoption of either side.
        assert_eq!(report.discrepancies(), vec!["PO", "VB"]);
    }

    #[test]
    fn filter_selects_entries() {
        let report = run_lemma_registry(config(), &["ZA".to_string()]).unwrap();
        assert_eq!(report.results.len(), 1);
        assert_eq!(report.results[0].lemma, "ZA");
        assert_eq!(report.results[0].verdict, Verdict::Verified);
        let err = run_lemma_registry(config(), &["nope".to_string()]).unwrap_err();
        assert!(matches!(err, RegistryError::UnknownLemma(_)));
    }

    #[test]
    fn registry_is_deterministic() {
        let a = serde_json::to_string(&run_lemma_registry(config(), &[]).unwrap()).unwrap();
        let b = serde_json::to_string(&run_lemma_registry(config(), &[]).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn d2_table_is_identically_equal() {
        let (rows, all_equal) = d2_vs_ad_table(10);
        assert!(all_equal);
        assert_eq!(rows.len(), basis_with_bound(10).len());
    }

    #[test]
    fn po_entry_documents_both_sides() {
        let report = run_lemma_registry(config(), &["PO".to_string()]).unwrap();
        let po = &report.results[0];
        assert_eq!(po.verdict, Verdict::Discrepancy);
        assert_eq!(po.computed["outer_dim"], json!(1));
        assert_eq!(po.computed["d1_inner"], json!(false));
        assert_eq!(po.computed["d2_inner"], json!(true));
        assert_eq!(po.paper_claim["outer_dim"], json!(2));
    }
}
