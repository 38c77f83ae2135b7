//! 2-local derivations as finite oracles, stabilizer descriptor spaces, and
//! the recovery algorithm expressing a 2-local derivation as a genuine
//! derivation.
//!
//! A 2-local derivation assigns every element a value such that every pair
//! of elements admits one derivation matching both values; nothing about
//! the assignment itself is assumed linear. An infinite-dimensional algebra
//! admits no direct storage of such a map, so [`TwoLocalOracle`] records a
//! finite window of evaluation points plus explicit per-pair selector
//! descriptors, and every verdict is window-relative.
//!
//! Recovery mirrors the classification argument: fit a descriptor to the
//! values at d_0 and d_1, read the remaining scaling freedom off the
//! residual at one h-point, and check that the residual then vanishes on
//! the whole window basis.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::de::Error as DeError;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{basis_with_bound, bracket, BasisVector, Element, Window};
use crate::linsolve::{kernel_basis, membership, Matrix};
use crate::maps::{d1_image, d2_image, DerivationDescriptor};
use crate::parse::{format_element, parse_element};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwoLocalError {
    #[error("evaluation point `{0}` is not recorded in the oracle")]
    MissingValue(String),
    #[error("element `{0}` is not supported in the window")]
    OutOfWindow(String),
    #[error("extraction index t = {0} is not allowed (t must avoid 0 and 1)")]
    BadExtractionIndex(i64),
    #[error("no descriptor matches the recorded values at d[0] and d[1]")]
    NotTwoLocal,
    #[error("residual at {point} is not a multiple of {point}: got {residual}")]
    ShapeViolation { point: String, residual: String },
    #[error("oracle precondition failed: {0}")]
    Precondition(String),
}

/// One recorded pair (x, y) together with the descriptor claimed to match
/// the oracle's values at both points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selector {
    pub x: Element,
    pub y: Element,
    pub descriptor: DerivationDescriptor,
}

/// A finite model of a 2-local derivation: recorded values on the window
/// basis (plus any composite evaluation points) and per-pair selectors.
///
/// Invariant: every selector endpoint has a recorded value, so the 2-local
/// property is verifiable pair by pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLocalOracle {
    window: Window,
    values: BTreeMap<Element, Element>,
    selectors: Vec<Selector>,
}

impl TwoLocalOracle {
    pub fn new(window: Window) -> TwoLocalOracle {
        TwoLocalOracle {
            window,
            values: BTreeMap::new(),
            selectors: Vec::new(),
        }
    }

    /// The pointwise oracle of a genuine derivation: record the descriptor's
    /// action on every window basis vector.
    pub fn from_descriptor(descriptor: &DerivationDescriptor, window: Window) -> TwoLocalOracle {
        let mut oracle = TwoLocalOracle::new(window);
        for bv in window.outer_basis() {
            let x = Element::basis(bv);
            let v = descriptor.apply(&x);
            oracle.values.insert(x, v);
        }
        oracle
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn set_value(&mut self, point: Element, value: Element) {
        self.values.insert(point, value);
    }

    pub fn value(&self, point: &Element) -> Result<&Element, TwoLocalError> {
        self.values
            .get(point)
            .ok_or_else(|| TwoLocalError::MissingValue(format_element(point)))
    }

    pub fn values(&self) -> impl Iterator<Item = (&Element, &Element)> {
        self.values.iter()
    }

    pub fn selectors(&self) -> &[Selector] {
        &self.selectors
    }

    /// Record a selector for the ordered pair (x, y). Both endpoints must
    /// already have recorded values.
    pub fn add_selector(
        &mut self,
        x: Element,
        y: Element,
        descriptor: DerivationDescriptor,
    ) -> Result<(), TwoLocalError> {
        for point in [&x, &y] {
            if !self.values.contains_key(point) {
                return Err(TwoLocalError::MissingValue(format_element(point)));
            }
        }
        self.selectors.push(Selector { x, y, descriptor });
        Ok(())
    }
}

/// A selector failing one of its two pointwise equalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoLocalViolation {
    pub x: String,
    pub y: String,
    pub point: String,
    pub defect: Element,
}

/// Check the defining property on every recorded pair: the selector applied
/// at each endpoint must reproduce the recorded value exactly.
pub fn verify_two_local(oracle: &TwoLocalOracle) -> Vec<TwoLocalViolation> {
    let mut out = Vec::new();
    for s in oracle.selectors() {
        for point in [&s.x, &s.y] {
            let recorded = oracle
                .value(point)
                .expect("selector endpoints are recorded");
            let defect = s.descriptor.apply(point).sub(recorded);
            if !defect.is_zero() {
                out.push(TwoLocalViolation {
                    x: format_element(&s.x),
                    y: format_element(&s.y),
                    point: format_element(point),
                    defect,
                });
            }
        }
    }
    out
}

/// One unknown of a descriptor over a window: a coefficient of u, or one of
/// the two scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescriptorCoord {
    U(BasisVector),
    Alpha,
    Beta,
}

impl DescriptorCoord {
    /// Action of this unit coordinate on the point x.
    fn action(self, x: &Element) -> Element {
        match self {
            DescriptorCoord::U(b) => bracket(&Element::basis(b), x),
            DescriptorCoord::Alpha => d1_image(x),
            DescriptorCoord::Beta => d2_image(x),
        }
    }
}

/// Unknown order for descriptor solves: u-coordinates over the window basis
/// in canonical order, then alpha, then beta.
pub fn descriptor_layout(window: Window) -> Vec<DescriptorCoord> {
    let mut cols: Vec<DescriptorCoord> = window
        .outer_basis()
        .into_iter()
        .map(DescriptorCoord::U)
        .collect();
    cols.push(DescriptorCoord::Alpha);
    cols.push(DescriptorCoord::Beta);
    cols
}

pub fn descriptor_from_coords(
    layout: &[DescriptorCoord],
    coords: &[Rational],
) -> DerivationDescriptor {
    assert_eq!(layout.len(), coords.len());
    let mut d = DerivationDescriptor::zero();
    for (coord, value) in layout.iter().zip(coords) {
        match coord {
            DescriptorCoord::U(b) => d.u.add_term(*b, value.clone()),
            DescriptorCoord::Alpha => d.alpha = value.clone(),
            DescriptorCoord::Beta => d.beta = value.clone(),
        }
    }
    d
}

pub fn descriptor_to_coords(
    layout: &[DescriptorCoord],
    descriptor: &DerivationDescriptor,
) -> Vec<Rational> {
    layout
        .iter()
        .map(|coord| match coord {
            DescriptorCoord::U(b) => descriptor.u.coeff(*b),
            DescriptorCoord::Alpha => descriptor.alpha.clone(),
            DescriptorCoord::Beta => descriptor.beta.clone(),
        })
        .collect()
}

/// All descriptors over the window annihilating `z`: the kernel of the
/// linear system apply((u, α, β), z) = 0.
#[derive(Debug, Clone)]
pub struct StabilizerSpace {
    pub window: Window,
    pub basis: Vec<DerivationDescriptor>,
}

impl StabilizerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn stabilizer_space(z: &Element, window: Window) -> Result<StabilizerSpace, TwoLocalError> {
    if !window.contains(z) {
        return Err(TwoLocalError::OutOfWindow(format_element(z)));
    }
    let layout = descriptor_layout(window);
    let actions: Vec<Element> = layout.iter().map(|c| c.action(z)).collect();
    let mut support: BTreeSet<BasisVector> = BTreeSet::new();
    for a in &actions {
        support.extend(a.support());
    }
    let rows: Vec<BasisVector> = support.into_iter().collect();
    let matrix = Matrix::from_fn(rows.len(), layout.len(), |r, c| actions[c].coeff(rows[r]));
    let kernel = kernel_basis(&matrix);
    for v in &kernel.vectors {
        debug_assert!(descriptor_from_coords(&layout, v).apply(z).is_zero());
    }
    let basis = kernel
        .vectors
        .iter()
        .map(|v| descriptor_from_coords(&layout, v))
        .collect();
    Ok(StabilizerSpace { window, basis })
}

/// Solve for a descriptor matching the given (point, value) pairs exactly;
/// `None` when the affine system is inconsistent. Free coordinates are set
/// to zero, so the fit is deterministic.
pub fn fit_descriptor(
    points: &[(Element, Element)],
    window: Window,
) -> Option<DerivationDescriptor> {
    let layout = descriptor_layout(window);
    let actions: Vec<Vec<Element>> = layout
        .iter()
        .map(|coord| points.iter().map(|(x, _)| coord.action(x)).collect())
        .collect();
    let mut support: BTreeSet<(usize, BasisVector)> = BTreeSet::new();
    for (pi, (_, v)) in points.iter().enumerate() {
        support.extend(v.support().map(|bv| (pi, bv)));
    }
    for per_point in &actions {
        for (pi, a) in per_point.iter().enumerate() {
            support.extend(a.support().map(|bv| (pi, bv)));
        }
    }
    let rows: Vec<(usize, BasisVector)> = support.into_iter().collect();
    let columns: Vec<Vec<Rational>> = actions
        .iter()
        .map(|per_point| {
            rows.iter()
                .map(|&(pi, bv)| per_point[pi].coeff(bv))
                .collect()
        })
        .collect();
    let target: Vec<Rational> = rows
        .iter()
        .map(|&(pi, bv)| points[pi].1.coeff(bv))
        .collect();
    let coords = membership(&target, &columns).expect("consistent lengths")?;
    Some(descriptor_from_coords(&layout, &coords))
}

/// Outcome of the recovery algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RecoveryVerdict {
    Derivation,
    Violation { witness: String, defect: Element },
}

/// The fitted global derivation and the verdict of the window-wide residual
/// check. On success the recorded values equal
/// `base.apply(x) + lambda * D1(x)` for every window basis vector x.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryReport {
    pub base: DerivationDescriptor,
    pub lambda: Rational,
    /// Number of window basis vectors with a nonzero final residual;
    /// 0 exactly on success.
    pub residual_max_support: usize,
    #[serde(flatten)]
    pub verdict: RecoveryVerdict,
}

impl RecoveryReport {
    pub fn is_derivation(&self) -> bool {
        matches!(self.verdict, RecoveryVerdict::Derivation)
    }

    /// The recovered total action on an element.
    pub fn recovered_action(&self, x: &Element) -> Element {
        self.base.apply(x).add(&d1_image(x).scale(&self.lambda))
    }
}

/// Recover a global derivation from the oracle: fit the values at d_0 and
/// d_1, extract the scaling coefficient from the residual at h_{t-1/2}, and
/// require the final residual to vanish on every window basis vector.
///
/// `t` must avoid 0 and 1 so the extraction point is not consumed by the
/// fit; callers default to 2.
pub fn recover_derivation(
    oracle: &TwoLocalOracle,
    t: i64,
) -> Result<RecoveryReport, TwoLocalError> {
    if t == 0 || t == 1 {
        return Err(TwoLocalError::BadExtractionIndex(t));
    }
    let window = oracle.window();
    let ht = BasisVector::H(t - 1);
    if !ht.in_index_bound(window.outer) {
        return Err(TwoLocalError::OutOfWindow(ht.key()));
    }

    let d0 = Element::basis(BasisVector::D(0));
    let d1 = Element::basis(BasisVector::D(1));
    let v0 = oracle.value(&d0)?.clone();
    let v1 = oracle.value(&d1)?.clone();
    let base = fit_descriptor(&[(d0, v0), (d1, v1)], window).ok_or(TwoLocalError::NotTwoLocal)?;

    let ht_el = Element::basis(ht);
    let residual_t = oracle.value(&ht_el)?.sub(&base.apply(&ht_el));
    let lambda = if residual_t.is_zero() {
        Rational::zero()
    } else if residual_t.support().any(|bv| bv != ht) {
        return Err(TwoLocalError::ShapeViolation {
            point: ht.key(),
            residual: format_element(&residual_t),
        });
    } else {
        residual_t.coeff(ht)
    };

    let mut failures: Vec<(BasisVector, Element)> = Vec::new();
    for bv in window.outer_basis() {
        let x = Element::basis(bv);
        let predicted = base.apply(&x).add(&d1_image(&x).scale(&lambda));
        let defect = oracle.value(&x)?.sub(&predicted);
        if !defect.is_zero() {
            failures.push((bv, defect));
        }
    }
    let verdict = match failures.first() {
        None => RecoveryVerdict::Derivation,
        Some((bv, defect)) => RecoveryVerdict::Violation {
            witness: bv.key(),
            defect: defect.clone(),
        },
    };
    Ok(RecoveryReport {
        base,
        lambda,
        residual_max_support: failures.len(),
        verdict,
    })
}

/// For an oracle vanishing on every window d_m, the recorded value at `x`
/// must be a scalar multiple of the pattern built from x's h-part and twice
/// its l-coefficient. Returns that scalar when the value matches the
/// pattern (0 by convention when the pattern is the zero vector), `None`
/// when it does not.
pub fn check_lemma_shape(
    oracle: &TwoLocalOracle,
    x: &Element,
) -> Result<Option<Rational>, TwoLocalError> {
    for m in -oracle.window().outer..=oracle.window().outer {
        let d = Element::basis(BasisVector::D(m));
        if !oracle.value(&d)?.is_zero() {
            return Err(TwoLocalError::Precondition(format!(
                "value at {} must be zero",
                BasisVector::D(m)
            )));
        }
    }
    let value = oracle.value(x)?.clone();
    let mut pattern = Element::zero();
    for (bv, coef) in x.iter() {
        if let BasisVector::H(k) = bv {
            pattern.add_term(BasisVector::H(k), coef.clone());
        }
    }
    let l = x.coeff(BasisVector::L);
    pattern.add_term(BasisVector::L, &l + &l);

    if pattern.is_zero() {
        return Ok(if value.is_zero() {
            Some(Rational::zero())
        } else {
            None
        });
    }
    let (lead, lead_coef) = pattern.iter().next().expect("nonzero pattern");
    let lambda = &value.coeff(lead) / lead_coef;
    if value == pattern.scale(&lambda) {
        Ok(Some(lambda))
    } else {
        Ok(None)
    }
}

/// A seeded random descriptor with u supported in the given index bound and
/// coefficients with numerators and denominators bounded by `max_abs`.
pub fn random_descriptor<R: Rng>(
    rng: &mut R,
    index_bound: i64,
    max_abs: i64,
) -> DerivationDescriptor {
    let rand_q = |rng: &mut R| {
        Rational::new(
            rng.random_range(-max_abs..=max_abs),
            rng.random_range(1..=max_abs),
        )
    };
    let mut u = Element::zero();
    for bv in basis_with_bound(index_bound) {
        if rng.random_bool(0.5) {
            u.add_term(bv, rand_q(rng));
        }
    }
    let alpha = rand_q(rng);
    let beta = rand_q(rng);
    DerivationDescriptor::new(u, alpha, beta)
}

impl Serialize for TwoLocalOracle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct SelectorRepr<'a> {
            x: String,
            y: String,
            u: &'a Element,
            alpha: &'a Rational,
            beta: &'a Rational,
        }
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("window", &self.window)?;
        let values: serde_json::Map<String, serde_json::Value> = self
            .values
            .iter()
            .map(|(point, value)| {
                (
                    format_element(point),
                    serde_json::to_value(value).expect("element serializes"),
                )
            })
            .collect();
        map.serialize_entry("values", &values)?;
        let selectors: Vec<SelectorRepr> = self
            .selectors
            .iter()
            .map(|s| SelectorRepr {
                x: format_element(&s.x),
                y: format_element(&s.y),
                u: &s.descriptor.u,
                alpha: &s.descriptor.alpha,
                beta: &s.descriptor.beta,
            })
            .collect();
        map.serialize_entry("selectors", &selectors)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for TwoLocalOracle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct SelectorRepr {
            x: String,
            y: String,
            u: Element,
            alpha: Rational,
            beta: Rational,
        }
        #[derive(Deserialize)]
        struct OracleRepr {
            window: Window,
            #[serde(default)]
            values: BTreeMap<String, Element>,
            #[serde(default)]
            selectors: Vec<SelectorRepr>,
        }
        let repr = OracleRepr::deserialize(deserializer)?;
        Window::new(repr.window.outer, repr.window.interior).map_err(D::Error::custom)?;
        let mut oracle = TwoLocalOracle::new(repr.window);
        for (key, value) in repr.values {
            let point = parse_element(&key)
                .map_err(|e| D::Error::custom(format!("bad value key `{key}`: {e}")))?;
            oracle.set_value(point, value);
        }
        for s in repr.selectors {
            let x = parse_element(&s.x)
                .map_err(|e| D::Error::custom(format!("bad selector x `{}`: {e}", s.x)))?;
            let y = parse_element(&s.y)
                .map_err(|e| D::Error::custom(format!("bad selector y `{}`: {e}", s.y)))?;
            oracle
                .add_selector(x, y, DerivationDescriptor::new(s.u, s.alpha, s.beta))
                .map_err(D::Error::custom)?;
        }
        Ok(oracle)
    }
}
