//! Basis symbols, sparse elements, the Lie bracket, and the ℤ-grading.
//!
//! The algebra has basis {d_m, h_r, c, l} with m ranging over the integers
//! and r over the half-integers 1/2 + ℤ. The nontrivial brackets are
//!
//! ```text
//! [d_m, d_n] = (m - n) d_{m+n} + (m^3 - m)/12 δ_{m+n,0} c
//! [d_m, h_r] = -r h_{m+r}
//! [h_r, h_s] = r δ_{r+s,0} l
//! ```
//!
//! with c and l central. Half-integer indices are keyed by the integer k
//! with h_{k+1/2} stored as `H(k)`, so every degree is an integer:
//! deg d_m = m, deg H(k) = k, deg c = 0, deg l = -1.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as DeError;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

/// A basis symbol. `H(k)` denotes h_{k+1/2}.
///
/// The derived ordering (d's by index, then h's by index, then c, then l)
/// is the canonical term order used everywhere output must be deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisVector {
    D(i64),
    H(i64),
    C,
    L,
}

impl BasisVector {
    pub fn degree(self) -> i64 {
        match self {
            BasisVector::D(m) => m,
            BasisVector::H(k) => k,
            BasisVector::C => 0,
            BasisVector::L => -1,
        }
    }

    /// True for basis vectors of the Heisenberg ideal (h's and l).
    pub fn in_heisenberg(self) -> bool {
        matches!(self, BasisVector::H(_) | BasisVector::L)
    }

    /// True for basis vectors of the Virasoro subalgebra (d's and c).
    pub fn in_virasoro(self) -> bool {
        matches!(self, BasisVector::D(_) | BasisVector::C)
    }

    pub fn in_index_bound(self, bound: i64) -> bool {
        match self {
            BasisVector::D(m) | BasisVector::H(m) => m.abs() <= bound,
            BasisVector::C | BasisVector::L => true,
        }
    }

    /// The stable text key: `d[m]`, `h[k]`, `c`, `l`.
    pub fn key(self) -> String {
        match self {
            BasisVector::D(m) => format!("d[{m}]"),
            BasisVector::H(k) => format!("h[{k}]"),
            BasisVector::C => "c".to_owned(),
            BasisVector::L => "l".to_owned(),
        }
    }

    pub fn parse_key(s: &str) -> Option<BasisVector> {
        match s {
            "c" => return Some(BasisVector::C),
            "l" => return Some(BasisVector::L),
            _ => {}
        }
        let rest = s.strip_suffix(']')?;
        if let Some(idx) = rest.strip_prefix("d[") {
            return idx.parse().ok().map(BasisVector::D);
        }
        if let Some(idx) = rest.strip_prefix("h[") {
            return idx.parse().ok().map(BasisVector::H);
        }
        None
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Truncation parameters: an outer index bound N and an interior bound M ≤ N.
///
/// The window basis is {d_m, h_{k+1/2} : |m|, |k| ≤ N} ∪ {c, l}; dimensions
/// are reported on the interior basis (bound M) to keep truncation artifacts
/// at the boundary from leaking into reported numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub outer: i64,
    pub interior: i64,
}

impl Window {
    pub fn new(outer: i64, interior: i64) -> Result<Window, WindowError> {
        if interior < 1 || outer < interior {
            return Err(WindowError { outer, interior });
        }
        Ok(Window { outer, interior })
    }

    pub fn outer_basis(&self) -> Vec<BasisVector> {
        basis_with_bound(self.outer)
    }

    pub fn interior_basis(&self) -> Vec<BasisVector> {
        basis_with_bound(self.interior)
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.support().all(|bv| bv.in_index_bound(self.outer))
    }
}

/// All window basis vectors with index bound `bound`, in canonical order.
pub fn basis_with_bound(bound: i64) -> Vec<BasisVector> {
    let mut out = Vec::with_capacity(4 * bound as usize + 4);
    out.extend((-bound..=bound).map(BasisVector::D));
    out.extend((-bound..=bound).map(BasisVector::H));
    out.push(BasisVector::C);
    out.push(BasisVector::L);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid window: outer = {outer}, interior = {interior} (need 1 <= interior <= outer)")]
pub struct WindowError {
    pub outer: i64,
    pub interior: i64,
}

/// A finite rational linear combination of basis vectors, kept in canonical
/// sparse form: no stored coefficient is zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    terms: BTreeMap<BasisVector, Rational>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn basis(bv: BasisVector) -> Element {
        Element::term(bv, Rational::one())
    }

    pub fn term(bv: BasisVector, coef: Rational) -> Element {
        let mut e = Element::zero();
        e.add_term(bv, coef);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (BasisVector, Rational)>>(terms: I) -> Element {
        let mut e = Element::zero();
        for (bv, c) in terms {
            e.add_term(bv, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, bv: BasisVector) -> Rational {
        self.terms.get(&bv).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = BasisVector> + '_ {
        self.terms.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisVector, &Rational)> + '_ {
        self.terms.iter().map(|(bv, c)| (*bv, c))
    }

    pub fn add_term(&mut self, bv: BasisVector, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(bv) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (bv, c) in other.iter() {
            out.add_term(bv, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (bv, c) in other.iter() {
            out.add_term(bv, -c);
        }
        out
    }

    pub fn neg(&self) -> Element {
        Element {
            terms: self.terms.iter().map(|(bv, c)| (*bv, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Element {
        if k.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(bv, c)| (*bv, c * k)).collect(),
        }
    }

    /// Restriction to the Heisenberg ideal (h-terms and l).
    pub fn heisenberg_part(&self) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(bv, _)| bv.in_heisenberg())
                .map(|(bv, c)| (*bv, c.clone()))
                .collect(),
        }
    }

    pub fn in_heisenberg(&self) -> bool {
        self.support().all(|bv| bv.in_heisenberg())
    }

    pub fn degree(&self) -> Degree {
        let mut degs = self.support().map(BasisVector::degree);
        let first = match degs.next() {
            None => return Degree::Zero,
            Some(d) => d,
        };
        if degs.all(|d| d == first) {
            Degree::Homogeneous(first)
        } else {
            Degree::NonHomogeneous
        }
    }

    /// The degree-`n` homogeneous component.
    pub fn component(&self, n: i64) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(bv, _)| bv.degree() == n)
                .map(|(bv, c)| (*bv, c.clone()))
                .collect(),
        }
    }
}

/// Degree report for an element. Zero is homogeneous of every degree, so it
/// gets its own flag rather than an arbitrary value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(i64),
    NonHomogeneous,
}

impl Degree {
    pub fn value(self) -> Option<i64> {
        match self {
            Degree::Homogeneous(n) => Some(n),
            _ => None,
        }
    }
}

/// Bracket of two basis vectors, expanded exactly (central terms included).
pub fn basis_bracket(x: BasisVector, y: BasisVector) -> Element {
    use BasisVector::*;
    match (x, y) {
        (C, _) | (_, C) | (L, _) | (_, L) => Element::zero(),
        (D(m), D(n)) => {
            let mut out = Element::term(D(m + n), Rational::from_int(m - n));
            if m + n == 0 {
                out.add_term(C, Rational::new(m * m * m - m, 12));
            }
            out
        }
        (D(m), H(k)) => Element::term(H(m + k), -Rational::half_odd(k)),
        (H(k), D(m)) => Element::term(H(m + k), Rational::half_odd(k)),
        (H(j), H(k)) => {
            if j + k + 1 == 0 {
                Element::term(L, Rational::half_odd(j))
            } else {
                Element::zero()
            }
        }
    }
}

/// Bilinear extension of [`basis_bracket`]. Total and exact.
pub fn bracket(x: &Element, y: &Element) -> Element {
    let mut out = Element::zero();
    for (bx, cx) in x.iter() {
        for (by, cy) in y.iter() {
            let factor = cx * cy;
            for (bz, cz) in basis_bracket(bx, by).iter() {
                out.add_term(bz, cz * &factor);
            }
        }
    }
    out
}

/// [x,[y,z]] + [y,[z,x]] + [z,[x,y]]; identically zero when the structure
/// constants are consistent.
pub fn jacobi_defect(x: &Element, y: &Element, z: &Element) -> Element {
    let a = bracket(x, &bracket(y, z));
    let b = bracket(y, &bracket(z, x));
    let c = bracket(z, &bracket(x, y));
    a.add(&b).add(&c)
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut d: Vec<(i64, &Rational)> = Vec::new();
        let mut h: Vec<(i64, &Rational)> = Vec::new();
        let mut c = None;
        let mut l = None;
        for (bv, coef) in self.terms.iter() {
            match bv {
                BasisVector::D(m) => d.push((*m, coef)),
                BasisVector::H(k) => h.push((*k, coef)),
                BasisVector::C => c = Some(coef),
                BasisVector::L => l = Some(coef),
            }
        }
        let len = usize::from(!d.is_empty())
            + usize::from(!h.is_empty())
            + usize::from(c.is_some())
            + usize::from(l.is_some());
        let mut map = serializer.serialize_map(Some(len))?;
        for (key, group) in [("d", d), ("h", h)] {
            if group.is_empty() {
                continue;
            }
            let entries: Vec<(String, String)> = group
                .into_iter()
                .map(|(i, r)| (i.to_string(), r.to_string()))
                .collect();
            let obj: serde_json::Map<String, serde_json::Value> = entries
                .into_iter()
                .map(|(k, v)| (k, serde_json::Value::String(v)))
                .collect();
            map.serialize_entry(key, &obj)?;
        }
        if let Some(r) = c {
            map.serialize_entry("c", &r.to_string())?;
        }
        if let Some(r) = l {
            map.serialize_entry("l", &r.to_string())?;
        }
        map.end()
    }
}

#[derive(Deserialize)]
struct ElementRepr {
    #[serde(default)]
    d: BTreeMap<String, String>,
    #[serde(default)]
    h: BTreeMap<String, String>,
    c: Option<String>,
    l: Option<String>,
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        let mut e = Element::zero();
        for (group, make) in [
            (&repr.d, BasisVector::D as fn(i64) -> BasisVector),
            (&repr.h, BasisVector::H as fn(i64) -> BasisVector),
        ] {
            for (idx, coef) in group {
                let idx: i64 = idx
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad index `{idx}`")))?;
                let coef: Rational = coef.parse().map_err(D::Error::custom)?;
                e.add_term(make(idx), coef);
            }
        }
        if let Some(coef) = repr.c {
            e.add_term(BasisVector::C, coef.parse().map_err(D::Error::custom)?);
        }
        if let Some(coef) = repr.l {
            e.add_term(BasisVector::L, coef.parse().map_err(D::Error::custom)?);
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64) -> Element {
        Element::basis(BasisVector::D(m))
    }

    fn h(k: i64) -> Element {
        Element::basis(BasisVector::H(k))
    }

    #[test]
    fn bracket_dd_with_central_term() {
        // [d_2, d_-2] = 4 d_0 + (2^3 - 2)/12 c = 4 d_0 + 1/2 c
        let got = bracket(&d(2), &d(-2));
        let want = Element::from_terms([
            (BasisVector::D(0), Rational::from_int(4)),
            (BasisVector::C, Rational::new(1, 2)),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn bracket_dd_antisymmetric_diagonal() {
        assert!(bracket(&d(0), &d(0)).is_zero());
        assert!(bracket(&d(5), &d(5)).is_zero());
    }

    #[test]
    fn bracket_dh() {
        // [d_1, h_{-3/2}] = (3/2) h_{-1/2}; h_{-3/2} = H(-2), h_{-1/2} = H(-1)
        let got = bracket(&d(1), &h(-2));
        assert_eq!(got, Element::term(BasisVector::H(-1), Rational::new(3, 2)));
    }

    #[test]
    fn bracket_hh_central() {
        // [h_{1/2}, h_{-1/2}] = (1/2) l
        let got = bracket(&h(0), &h(-1));
        assert_eq!(got, Element::term(BasisVector::L, Rational::new(1, 2)));
        assert!(bracket(&h(0), &h(1)).is_zero());
    }

    #[test]
    fn central_elements() {
        let c = Element::basis(BasisVector::C);
        let l = Element::basis(BasisVector::L);
        for x in basis_with_bound(4) {
            assert!(bracket(&c, &Element::basis(x)).is_zero());
            assert!(bracket(&l, &Element::basis(x)).is_zero());
            assert!(bracket(&Element::basis(x), &c).is_zero());
            assert!(bracket(&Element::basis(x), &l).is_zero());
        }
    }

    #[test]
    fn degrees() {
        assert_eq!(h(-1).degree(), Degree::Homogeneous(-1));
        assert_eq!(
            Element::basis(BasisVector::C).degree(),
            Degree::Homogeneous(0)
        );
        assert_eq!(
            Element::basis(BasisVector::L).degree(),
            Degree::Homogeneous(-1)
        );
        assert_eq!(d(1).add(&d(2)).degree(), Degree::NonHomogeneous);
        assert_eq!(Element::zero().degree(), Degree::Zero);
        // h_{-1/2} and l are both degree -1
        assert_eq!(
            h(-1).add(&Element::basis(BasisVector::L)).degree(),
            Degree::Homogeneous(-1)
        );
    }

    #[test]
    fn jacobi_small_cases() {
        assert!(jacobi_defect(&d(1), &d(-1), &d(0)).is_zero());
        // expand by hand: [h_{1/2}, h_{-1/2}] = l/2 central so [d_2, l/2] = 0;
        // [d_2, h_{-1/2}] = (1/2) h_{3/2} and [h_{1/2}, h_{3/2}] = 0;
        // [d_2, h_{1/2}] = -(1/2) h_{5/2} and [h_{5/2}, h_{-1/2}] = 0; sum = 0.
        assert!(jacobi_defect(&d(2), &h(0), &h(-1)).is_zero());
        let c = Element::basis(BasisVector::C);
        assert!(jacobi_defect(&c, &d(3), &h(2)).is_zero());
    }

    #[test]
    fn canonical_sparse_form() {
        let mut e = Element::zero();
        e.add_term(BasisVector::D(1), Rational::new(1, 2));
        e.add_term(BasisVector::D(1), Rational::new(-1, 2));
        assert!(e.is_zero());
        assert_eq!(e, Element::zero());
    }

    #[test]
    fn element_json_round_trip() {
        let e = Element::from_terms([
            (BasisVector::D(3), Rational::from_int(2)),
            (BasisVector::H(-1), Rational::new(1, 2)),
            (BasisVector::C, Rational::from_int(-1)),
        ]);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"d":{"3":"2"},"h":{"-1":"1/2"},"c":"-1"}"#);
        let back: Element = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
        assert_eq!(serde_json::to_string(&Element::zero()).unwrap(), "{}");
    }

    #[test]
    fn basis_keys() {
        for bv in basis_with_bound(3) {
            assert_eq!(BasisVector::parse_key(&bv.key()), Some(bv));
        }
        assert_eq!(BasisVector::parse_key("d[-7]"), Some(BasisVector::D(-7)));
        assert_eq!(BasisVector::parse_key("x[1]"), None);
    }
}
