//! Graded derivation, Hom, and first-cohomology solvers.
//!
//! Everything here reduces to exact kernels of Leibniz or equivariance
//! constraint systems. The windowed `Der(𝔇, ·)` solvers truncate the
//! algebra: unknowns are the images of window basis vectors, constraints
//! are Leibniz equations for every basis pair whose inputs, bracket, and
//! image degrees stay inside the window, and dimensions are reported for
//! restrictions to the interior basis so boundary underdetermination never
//! leaks into the numbers. A re-solve at outer bound N+2 backs the `stable`
//! flag. The finite-dimensional solvers (`hom_d0`, `h1_d0_hn`) involve no
//! truncation at all.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{basis_bracket, basis_with_bound, bracket, BasisVector, Element, Window};
use crate::linsolve::{
    canonical_basis, kernel_basis, membership, quotient_dim, rank, reduce_against, rref, Matrix,
};
use crate::maps::{d1_image, d2_image, Codomain, GradedMap};
use crate::rational::Rational;

/// Outer margin the window solvers need beyond `interior + |delta|` so the
/// neighbor constraints pinning each interior unknown are all assembled.
pub const WINDOW_BUFFER: i64 = 2;

pub fn required_outer(interior: i64, delta: i64) -> i64 {
    interior + delta.abs() + WINDOW_BUFFER
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(
        "window too small for degree {delta}: outer = {outer}, interior = {interior} needs outer >= {required}"
    )]
    BufferViolation {
        outer: i64,
        interior: i64,
        delta: i64,
        required: i64,
    },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// Column layout for one windowed solve: one unknown per (domain basis
/// vector, codomain component basis vector) pair.
struct Layout {
    cols: Vec<(BasisVector, BasisVector)>,
    index: BTreeMap<(BasisVector, BasisVector), usize>,
}

impl Layout {
    fn new(codomain: Codomain, delta: i64, bound: i64) -> Layout {
        let mut cols = Vec::new();
        for x in basis_with_bound(bound) {
            let g = x.degree() + delta;
            if g.abs() > bound {
                continue;
            }
            for w in codomain.component(g) {
                cols.push((x, w));
            }
        }
        let index = cols
            .iter()
            .enumerate()
            .map(|(i, &pair)| (pair, i))
            .collect();
        Layout { cols, index }
    }

    fn col(&self, x: BasisVector, w: BasisVector) -> usize {
        self.index[&(x, w)]
    }

    fn len(&self) -> usize {
        self.cols.len()
    }
}

type SparseRow = Vec<(usize, Rational)>;

/// Incremental sparse echelonization: rows are inserted one at a time and
/// reduced against the pivot rows collected so far. The Leibniz systems
/// produce thousands of near-duplicate rows; the surviving pivot rows have
/// the same kernel as the full system.
#[derive(Default)]
struct EchelonReducer {
    pivots: BTreeMap<usize, SparseRow>,
}

impl EchelonReducer {
    fn insert(&mut self, row: BTreeMap<usize, Rational>) {
        let mut row: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        loop {
            let Some((lead, head)) = row.first().cloned() else {
                return;
            };
            match self.pivots.get(&lead) {
                Some(pivot) => row = axpy(&row, &head, pivot),
                None => {
                    let inv = head.recip();
                    for (_, v) in row.iter_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return;
                }
            }
        }
    }

    fn into_matrix(self, cols: usize) -> Matrix {
        let rows: Vec<Vec<Rational>> = self
            .pivots
            .into_values()
            .map(|row| {
                let mut dense = vec![Rational::zero(); cols];
                for (c, v) in row {
                    dense[c] = v;
                }
                dense
            })
            .collect();
        if rows.is_empty() {
            Matrix::zero(0, cols)
        } else {
            Matrix::from_rows(rows)
        }
    }
}

/// row - factor * pivot over sorted sparse rows; the pivot row has leading
/// coefficient 1, so the leading entry of `row` cancels exactly.
fn axpy(row: &SparseRow, factor: &Rational, pivot: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() && j < pivot.len() {
        match row[i].0.cmp(&pivot[j].0) {
            Ordering::Less => {
                out.push(row[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let v = -(factor * &pivot[j].1);
                if !v.is_zero() {
                    out.push((pivot[j].0, v));
                }
                j += 1;
            }
            Ordering::Equal => {
                let v = &row[i].1 - &(factor * &pivot[j].1);
                if !v.is_zero() {
                    out.push((row[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(row[i..].iter().cloned());
    for (c, p) in &pivot[j..] {
        let v = -(factor * p);
        if !v.is_zero() {
            out.push((*c, v));
        }
    }
    out
}

fn add_cell(
    eq: &mut BTreeMap<BasisVector, BTreeMap<usize, Rational>>,
    out: BasisVector,
    col: usize,
    val: Rational,
) {
    if val.is_zero() {
        return;
    }
    let cell = eq
        .entry(out)
        .or_default()
        .entry(col)
        .or_insert_with(Rational::zero);
    *cell += &val;
}

/// Kernel of the Leibniz system for degree-`delta` maps into `codomain`,
/// assembled over the window basis with index bound `bound`.
fn leibniz_kernel(codomain: Codomain, delta: i64, bound: i64) -> (Layout, Vec<Vec<Rational>>) {
    let layout = Layout::new(codomain, delta, bound);
    let basis = basis_with_bound(bound);
    let has_unknowns = |x: BasisVector| (x.degree() + delta).abs() <= bound;
    let mut reducer = EchelonReducer::default();

    for (i, &x) in basis.iter().enumerate() {
        if !has_unknowns(x) {
            continue;
        }
        for &y in &basis[i + 1..] {
            if !has_unknowns(y) {
                continue;
            }
            let b = basis_bracket(x, y);
            if !b.is_zero() {
                let image_deg = x.degree() + y.degree() + delta;
                let in_window = b.support().all(|z| z.in_index_bound(bound));
                if image_deg.abs() > bound || !in_window {
                    continue;
                }
            }

            // phi([x,y]) - [phi(x), y] - [x, phi(y)] = 0, one row per output
            // basis vector.
            let mut eq: BTreeMap<BasisVector, BTreeMap<usize, Rational>> = BTreeMap::new();
            for (z, cz) in b.iter() {
                for w in codomain.component(z.degree() + delta) {
                    add_cell(&mut eq, w, layout.col(z, w), cz.clone());
                }
            }
            for w in codomain.component(x.degree() + delta) {
                let col = layout.col(x, w);
                for (v, cv) in basis_bracket(w, y).iter() {
                    add_cell(&mut eq, v, col, -cv);
                }
            }
            for w in codomain.component(y.degree() + delta) {
                let col = layout.col(y, w);
                for (v, cv) in basis_bracket(x, w).iter() {
                    add_cell(&mut eq, v, col, -cv);
                }
            }
            for (_, row) in eq {
                reducer.insert(row);
            }
        }
    }

    let matrix = reducer.into_matrix(layout.len());
    let kernel = kernel_basis(&matrix);
    (layout, kernel.vectors)
}

/// Interior coordinate system: the entries of an interior restriction of a
/// degree-`delta` map, in canonical order.
fn interior_layout(
    codomain: Codomain,
    delta: i64,
    interior: i64,
) -> Vec<(BasisVector, BasisVector)> {
    let mut cols = Vec::new();
    for x in basis_with_bound(interior) {
        for w in codomain.component(x.degree() + delta) {
            cols.push((x, w));
        }
    }
    cols
}

fn project(
    vec: &[Rational],
    layout: &Layout,
    interior: &[(BasisVector, BasisVector)],
) -> Vec<Rational> {
    interior
        .iter()
        .map(|&(x, w)| vec[layout.col(x, w)].clone())
        .collect()
}

/// Interior coordinates of the inner map x ↦ [x, generator].
fn ad_interior_vector(
    generator: BasisVector,
    interior: &[(BasisVector, BasisVector)],
) -> Vec<Rational> {
    let v = Element::basis(generator);
    interior
        .iter()
        .map(|&(x, w)| bracket(&Element::basis(x), &v).coeff(w))
        .collect()
}

/// Interior coordinates of a map given by a closed-form image function.
fn map_interior_vector(
    f: impl Fn(&Element) -> Element,
    interior: &[(BasisVector, BasisVector)],
) -> Vec<Rational> {
    interior
        .iter()
        .map(|&(x, w)| f(&Element::basis(x)).coeff(w))
        .collect()
}

fn vector_to_map(
    vec: &[Rational],
    codomain: Codomain,
    delta: i64,
    coords: &[(BasisVector, BasisVector)],
) -> GradedMap {
    let mut images: BTreeMap<BasisVector, Element> = BTreeMap::new();
    for (x, _) in coords {
        images.entry(*x).or_insert_with(Element::zero);
    }
    for (&(x, w), coef) in coords.iter().zip(vec) {
        images
            .get_mut(&x)
            .expect("domain entry")
            .add_term(w, coef.clone());
    }
    GradedMap::new(delta, codomain, images).expect("solver output is graded")
}

struct SolveOnce {
    solution_basis: Vec<Vec<Rational>>,
    inner_vectors: Vec<Vec<Rational>>,
    inner_dim: usize,
}

fn solve_once(
    codomain: Codomain,
    delta: i64,
    outer: i64,
    interior: &[(BasisVector, BasisVector)],
) -> Result<SolveOnce, SolveError> {
    let (layout, kernel) = leibniz_kernel(codomain, delta, outer);
    let restricted: Vec<Vec<Rational>> = kernel
        .iter()
        .map(|v| project(v, &layout, interior))
        .collect();
    let solution_basis = canonical_basis(&restricted);

    let mut inner_vectors = Vec::new();
    for generator in codomain.component(delta) {
        let v = ad_interior_vector(generator, interior);
        if v.iter().all(Rational::is_zero) {
            continue;
        }
        inner_vectors.push(v);
    }
    for (i, v) in inner_vectors.iter().enumerate() {
        let contained = membership(v, &solution_basis)
            .map_err(|e| SolveError::Inconsistent(e.to_string()))?
            .is_some();
        if !contained {
            return Err(SolveError::Inconsistent(format!(
                "inner map {i} of degree {delta} is not in the solved space"
            )));
        }
    }
    let inner_dim = rank(&inner_vectors);
    Ok(SolveOnce {
        solution_basis,
        inner_vectors,
        inner_dim,
    })
}

/// Post-hoc re-check, independent of the assembly path: a returned map must
/// satisfy the Leibniz rule on every interior pair whose bracket stays
/// inside the interior.
fn recheck_leibniz(map: &GradedMap, interior_bound: i64) -> Result<(), SolveError> {
    let basis = basis_with_bound(interior_bound);
    for (i, &x) in basis.iter().enumerate() {
        for &y in &basis[i + 1..] {
            let b = basis_bracket(x, y);
            if !b.support().all(|z| z.in_index_bound(interior_bound)) {
                continue;
            }
            let defect = map
                .derivation_defect(x, y)
                .map_err(|e| SolveError::Inconsistent(e.to_string()))?;
            if !defect.is_zero() {
                return Err(SolveError::Inconsistent(format!(
                    "solved map violates the Leibniz rule at ({x}, {y})"
                )));
            }
        }
    }
    Ok(())
}

/// One graded solve: dimensions, interior representatives, and a
/// cross-window stability verdict.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub codomain: Codomain,
    pub delta: i64,
    pub window: Window,
    pub space_dim: usize,
    pub inner_dim: usize,
    pub outer_dim: usize,
    pub stable: bool,
    pub representatives: Vec<GradedMap>,
}

fn check_buffer(delta: i64, w: Window) -> Result<(), SolveError> {
    let required = required_outer(w.interior, delta);
    if w.outer < required {
        return Err(SolveError::BufferViolation {
            outer: w.outer,
            interior: w.interior,
            delta,
            required,
        });
    }
    Ok(())
}

/// Solve for the space of degree-`delta` derivations into `codomain`,
/// restricted to the window interior.
pub fn solve_graded_derivations(
    codomain: Codomain,
    delta: i64,
    w: Window,
) -> Result<SolveReport, SolveError> {
    check_buffer(delta, w)?;
    let interior = interior_layout(codomain, delta, w.interior);
    let first = solve_once(codomain, delta, w.outer, &interior)?;
    let second = solve_once(codomain, delta, w.outer + 2, &interior)?;
    let stable =
        first.solution_basis == second.solution_basis && first.inner_dim == second.inner_dim;
    let representatives: Vec<GradedMap> = first
        .solution_basis
        .iter()
        .map(|v| vector_to_map(v, codomain, delta, &interior))
        .collect();
    for rep in &representatives {
        recheck_leibniz(rep, w.interior)?;
    }
    Ok(SolveReport {
        codomain,
        delta,
        window: w,
        space_dim: first.solution_basis.len(),
        inner_dim: first.inner_dim,
        outer_dim: first.solution_basis.len() - first.inner_dim,
        stable,
        representatives,
    })
}

/// Inner maps ad(v), v running over a basis of the codomain's degree-`delta`
/// component, restricted to the interior; zero maps dropped.
pub fn inner_space(
    codomain: Codomain,
    delta: i64,
    w: Window,
) -> Result<Vec<GradedMap>, SolveError> {
    check_buffer(delta, w)?;
    let interior = interior_layout(codomain, delta, w.interior);
    let mut out = Vec::new();
    for generator in codomain.component(delta) {
        let v = ad_interior_vector(generator, &interior);
        if v.iter().all(Rational::is_zero) {
            continue;
        }
        out.push(vector_to_map(&v, codomain, delta, &interior));
    }
    Ok(out)
}

/// Span-membership verdict for one map against the inner space.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    /// Coordinates over the nonzero ad generators when member.
    pub coordinates: Option<Vec<Rational>>,
}

/// A first-cohomology component: the solve report, whose representatives
/// are coset representatives modulo the inner space, plus membership
/// verdicts for the two distinguished degree-0 derivations.
#[derive(Debug, Clone, Serialize)]
pub struct H1Report {
    #[serde(flatten)]
    pub report: SolveReport,
    pub d1_inner: Option<MembershipReport>,
    pub d2_inner: Option<MembershipReport>,
}

fn membership_report(v: &[Rational], inner: &[Vec<Rational>]) -> MembershipReport {
    let coords = membership(v, inner).expect("consistent lengths");
    MembershipReport {
        member: coords.is_some(),
        coordinates: coords,
    }
}

/// H1 in degree `delta`: the solved space modulo the inner maps, with
/// deterministic coset representatives (solution vectors reduced against
/// the inner RREF, then re-reduced with leading coordinates normalized).
pub fn h1_component(codomain: Codomain, delta: i64, w: Window) -> Result<H1Report, SolveError> {
    check_buffer(delta, w)?;
    let interior = interior_layout(codomain, delta, w.interior);
    let first = solve_once(codomain, delta, w.outer, &interior)?;
    let second = solve_once(codomain, delta, w.outer + 2, &interior)?;
    let stable =
        first.solution_basis == second.solution_basis && first.inner_dim == second.inner_dim;

    let space_dim = first.solution_basis.len();
    let outer_dim = quotient_dim(&first.solution_basis, &first.inner_vectors)
        .map_err(|e| SolveError::Inconsistent(e.to_string()))?;
    if outer_dim != space_dim - first.inner_dim {
        return Err(SolveError::Inconsistent(format!(
            "quotient dimension {outer_dim} disagrees with {} - {}",
            space_dim, first.inner_dim
        )));
    }

    let coset_reps: Vec<Vec<Rational>> = if first.inner_vectors.is_empty() {
        first.solution_basis.clone()
    } else {
        let inner_rref = rref(&Matrix::from_rows(canonical_basis(&first.inner_vectors)));
        let reduced: Vec<Vec<Rational>> = first
            .solution_basis
            .iter()
            .map(|s| reduce_against(s, &inner_rref))
            .filter(|v| !v.iter().all(Rational::is_zero))
            .collect();
        canonical_basis(&reduced)
    };
    if coset_reps.len() != outer_dim {
        return Err(SolveError::Inconsistent(format!(
            "coset representative count {} does not match outer dimension {}",
            coset_reps.len(),
            outer_dim
        )));
    }

    let (d1_inner, d2_inner) = if delta == 0 {
        let d1_vec = map_interior_vector(d1_image, &interior);
        let d2_vec = map_interior_vector(d2_image, &interior);
        (
            Some(membership_report(&d1_vec, &first.inner_vectors)),
            Some(membership_report(&d2_vec, &first.inner_vectors)),
        )
    } else {
        (None, None)
    };

    let representatives: Vec<GradedMap> = coset_reps
        .iter()
        .map(|v| vector_to_map(v, codomain, delta, &interior))
        .collect();
    for rep in &representatives {
        recheck_leibniz(rep, w.interior)?;
    }

    Ok(H1Report {
        report: SolveReport {
            codomain,
            delta,
            window: w,
            space_dim,
            inner_dim: first.inner_dim,
            outer_dim,
            stable,
            representatives,
        },
        d1_inner,
        d2_inner,
    })
}

/// Basis of the degree-0 subalgebra spanned by d_0, h_{1/2}, c.
fn degree_zero_subalgebra() -> [BasisVector; 3] {
    [BasisVector::D(0), BasisVector::H(0), BasisVector::C]
}

/// Maps from the degree-`m` component of the algebra to the degree-`n`
/// component of the Heisenberg module commuting with the degree-0
/// subalgebra action: f([x,y]) = [x, f(y)]. Fully finite; no truncation.
#[derive(Debug, Clone, Serialize)]
pub struct HomD0Report {
    pub m: i64,
    pub n: i64,
    pub dim: usize,
    pub basis: Vec<GradedMap>,
}

pub fn hom_d0(m: i64, n: i64) -> HomD0Report {
    let domain = Codomain::D.component(m);
    let target = Codomain::H.component(n);
    let cols: Vec<(BasisVector, BasisVector)> = domain
        .iter()
        .flat_map(|&y| target.iter().map(move |&w| (y, w)))
        .collect();
    let col = |y: BasisVector, w: BasisVector| cols.iter().position(|&p| p == (y, w)).unwrap();

    let mut reducer = EchelonReducer::default();
    for x in degree_zero_subalgebra() {
        for &y in &domain {
            let mut eq: BTreeMap<BasisVector, BTreeMap<usize, Rational>> = BTreeMap::new();
            // f([x,y]); the bracket lands back in the degree-m component.
            for (z, cz) in basis_bracket(x, y).iter() {
                debug_assert!(domain.contains(&z));
                for &w in &target {
                    add_cell(&mut eq, w, col(z, w), cz.clone());
                }
            }
            // minus [x, f(y)]
            for &w in &target {
                let c = col(y, w);
                for (v, cv) in basis_bracket(x, w).iter() {
                    add_cell(&mut eq, v, c, -cv);
                }
            }
            for (_, row) in eq {
                reducer.insert(row);
            }
        }
    }
    let kernel = kernel_basis(&reducer.into_matrix(cols.len()));
    let basis_maps: Vec<GradedMap> = canonical_basis(&kernel.vectors)
        .iter()
        .map(|v| vector_to_map(v, Codomain::H, n - m, &cols))
        .collect();
    HomD0Report {
        m,
        n,
        dim: basis_maps.len(),
        basis: basis_maps,
    }
}

/// One derivation of the degree-0 subalgebra with, when solvable, the module
/// element realizing it as an inner derivation.
#[derive(Debug, Clone, Serialize)]
pub struct H1D0Witness {
    pub derivation: GradedMap,
    pub inner_element: Option<Element>,
}

/// First cohomology of the 3-dimensional degree-0 subalgebra with values in
/// the degree-`n` component of the Heisenberg module.
#[derive(Debug, Clone, Serialize)]
pub struct H1D0Report {
    pub n: i64,
    pub der_dim: usize,
    pub inner_dim: usize,
    pub h1_dim: usize,
    pub witnesses: Vec<H1D0Witness>,
}

pub fn h1_d0_hn(n: i64) -> H1D0Report {
    let sub = degree_zero_subalgebra();
    let target = Codomain::H.component(n);
    let cols: Vec<(BasisVector, BasisVector)> = sub
        .iter()
        .flat_map(|&x| target.iter().map(move |&w| (x, w)))
        .collect();
    let col = |x: BasisVector, w: BasisVector| cols.iter().position(|&p| p == (x, w)).unwrap();

    let mut reducer = EchelonReducer::default();
    for i in 0..sub.len() {
        for j in i + 1..sub.len() {
            let (x, y) = (sub[i], sub[j]);
            let mut eq: BTreeMap<BasisVector, BTreeMap<usize, Rational>> = BTreeMap::new();
            // phi([x,y]); [x,y] lies back in the degree-0 subalgebra.
            for (z, cz) in basis_bracket(x, y).iter() {
                debug_assert!(sub.contains(&z));
                for &w in &target {
                    add_cell(&mut eq, w, col(z, w), cz.clone());
                }
            }
            // -[phi(x), y] - [x, phi(y)]
            for &w in &target {
                let cx = col(x, w);
                for (v, cv) in basis_bracket(w, y).iter() {
                    add_cell(&mut eq, v, cx, -cv);
                }
                let cy = col(y, w);
                for (v, cv) in basis_bracket(x, w).iter() {
                    add_cell(&mut eq, v, cy, -cv);
                }
            }
            for (_, row) in eq {
                reducer.insert(row);
            }
        }
    }
    let kernel = kernel_basis(&reducer.into_matrix(cols.len()));
    let der_basis = canonical_basis(&kernel.vectors);

    // Inner derivations x ↦ [x, E], E over the target component basis.
    let mut inner_gens: Vec<(BasisVector, Vec<Rational>)> = Vec::new();
    for &e in &target {
        let v: Vec<Rational> = cols
            .iter()
            .map(|&(x, w)| basis_bracket(x, e).coeff(w))
            .collect();
        if v.iter().all(Rational::is_zero) {
            continue;
        }
        inner_gens.push((e, v));
    }
    let inner_vecs: Vec<Vec<Rational>> = inner_gens.iter().map(|(_, v)| v.clone()).collect();
    let inner_dim = rank(&inner_vecs);
    for v in &inner_vecs {
        assert!(
            membership(v, &der_basis).expect("lengths agree").is_some(),
            "inner derivation outside solved derivation space"
        );
    }

    let witnesses = der_basis
        .iter()
        .map(|v| {
            let inner_element = membership(v, &inner_vecs)
                .expect("lengths agree")
                .map(|coords| {
                    let mut e = Element::zero();
                    for ((gen, _), c) in inner_gens.iter().zip(coords) {
                        e.add_term(*gen, c);
                    }
                    e
                });
            H1D0Witness {
                derivation: vector_to_map(v, Codomain::H, n, &cols),
                inner_element,
            }
        })
        .collect();

    H1D0Report {
        n,
        der_dim: der_basis.len(),
        inner_dim,
        h1_dim: der_basis.len() - inner_dim,
        witnesses,
    }
}

/// Dimension of the space of maps from the window span of the h's to the
/// window span of the Virasoro subalgebra commuting with the actions of d_0
/// and d_1. The l-line is quotiented away by construction: the domain omits
/// l and the d-action on h's never produces it.
pub fn equivariant_hom_h_to_v(outer: i64) -> usize {
    let domain: Vec<BasisVector> = (-outer..=outer).map(BasisVector::H).collect();
    let mut target: Vec<BasisVector> = (-outer..=outer).map(BasisVector::D).collect();
    target.push(BasisVector::C);
    let cols: Vec<(BasisVector, BasisVector)> = domain
        .iter()
        .flat_map(|&y| target.iter().map(move |&w| (y, w)))
        .collect();
    let col = |y: BasisVector, w: BasisVector| cols.iter().position(|&p| p == (y, w)).unwrap();

    let mut reducer = EchelonReducer::default();
    for x in [BasisVector::D(0), BasisVector::D(1)] {
        for &y in &domain {
            let b = basis_bracket(x, y);
            if !b.support().all(|z| domain.contains(&z)) {
                continue;
            }
            let mut eq: BTreeMap<BasisVector, BTreeMap<usize, Rational>> = BTreeMap::new();
            for (z, cz) in b.iter() {
                for &w in &target {
                    add_cell(&mut eq, w, col(z, w), cz.clone());
                }
            }
            for &w in &target {
                let c = col(y, w);
                for (v, cv) in basis_bracket(x, w).iter() {
                    add_cell(&mut eq, v, c, -cv);
                }
            }
            for (_, row) in eq {
                reducer.insert(row);
            }
        }
    }
    let kernel = kernel_basis(&reducer.into_matrix(cols.len()));
    kernel.vectors.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(outer: i64, interior: i64) -> Window {
        Window::new(outer, interior).unwrap()
    }

    #[test]
    fn buffer_rule_enforced() {
        let err = solve_graded_derivations(Codomain::H, 5, window(11, 5)).unwrap_err();
        assert!(matches!(
            err,
            SolveError::BufferViolation { required: 12, .. }
        ));
        assert!(solve_graded_derivations(Codomain::H, 5, window(12, 5)).is_ok());
    }

    #[test]
    fn degree_zero_into_h_is_two_dimensional() {
        let report = solve_graded_derivations(Codomain::H, 0, window(10, 5)).unwrap();
        assert_eq!(report.space_dim, 2);
        assert_eq!(report.inner_dim, 1);
        assert_eq!(report.outer_dim, 1);
        assert!(report.stable);
    }

    #[test]
    fn degree_minus_one_into_h_is_inner() {
        let report = solve_graded_derivations(Codomain::H, -1, window(10, 5)).unwrap();
        assert_eq!(report.space_dim, 1);
        assert_eq!(report.inner_dim, 1);
        assert_eq!(report.outer_dim, 0);
        assert!(report.stable);
    }

    #[test]
    fn inner_space_examples() {
        // Degree -1 into H: ad(h_{-1/2}) survives, ad(l) is dropped.
        let inner = inner_space(Codomain::H, -1, window(10, 5)).unwrap();
        assert_eq!(inner.len(), 1);
        assert_eq!(
            *inner[0].image_of(BasisVector::D(0)).unwrap(),
            Element::term(BasisVector::H(-1), Rational::new(1, 2))
        );
        // Degree 0 into D: ad(d_0) and ad(h_{1/2}); ad(c) dropped.
        let inner = inner_space(Codomain::D, 0, window(10, 5)).unwrap();
        assert_eq!(inner.len(), 2);
        // Degree 0 into H: ad(h_{1/2}) only.
        let inner = inner_space(Codomain::H, 0, window(10, 5)).unwrap();
        assert_eq!(inner.len(), 1);
    }

    #[test]
    fn representatives_satisfy_leibniz_on_interior_pairs() {
        // Post-hoc re-check independent of the assembly path.
        let report = solve_graded_derivations(Codomain::H, 0, window(10, 4)).unwrap();
        assert_eq!(report.space_dim, 2);
        for rep in &report.representatives {
            for &x in &basis_with_bound(2) {
                for &y in &basis_with_bound(2) {
                    let defect = rep.derivation_defect(x, y).unwrap();
                    assert!(defect.is_zero(), "defect at ({x}, {y})");
                }
            }
        }
    }

    #[test]
    fn hom_d0_vanishing_cases() {
        assert_eq!(hom_d0(3, 5).dim, 0);
        assert_eq!(hom_d0(0, 2).dim, 0);
        assert_eq!(hom_d0(2, 2).dim, 0);
        assert_eq!(hom_d0(-1, 4).dim, 0);
    }

    #[test]
    fn h1_d0_vanishes_off_the_excluded_degrees() {
        for n in [-6, -3, 1, 2, 4, 6] {
            let report = h1_d0_hn(n);
            assert_eq!(report.h1_dim, 0, "n = {n}");
        }
    }

    #[test]
    fn equivariant_hom_vanishes() {
        assert_eq!(equivariant_hom_h_to_v(1), 0);
        assert_eq!(equivariant_hom_h_to_v(5), 0);
    }
}
