//! Homogeneous linear maps on window bases: the scaling derivation `D1`,
//! the shift derivation `D2`, inner maps `ad(u)`, Leibniz-defect
//! computation, and the (u, α, β) descriptor combining all three.
//!
//! Two bracket conventions coexist on purpose. Inner maps built by [`ad`]
//! act on the right, x ↦ [x, u], which is the module-action form used by
//! the derivation solvers. Descriptors act on the left,
//! x ↦ [u, x] + α D1(x) + β D2(x), which is the form the stabilizer
//! constraint sets are stated in. The two differ only by u ↦ -u, so they
//! span the same inner spaces.

use std::collections::BTreeMap;

use serde::de::Error as DeError;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{bracket, BasisVector, Degree, Element, Window};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Codomain {
    /// The Heisenberg ideal as a module (values among h's and l).
    H,
    /// The whole algebra under the adjoint action.
    D,
}

impl Codomain {
    pub fn label(self) -> &'static str {
        match self {
            Codomain::H => "H",
            Codomain::D => "D",
        }
    }

    pub fn contains(self, x: &Element) -> bool {
        match self {
            Codomain::H => x.in_heisenberg(),
            Codomain::D => true,
        }
    }

    /// Basis of the degree-`n` homogeneous component of the codomain.
    pub fn component(self, n: i64) -> Vec<BasisVector> {
        match self {
            Codomain::H => {
                if n == -1 {
                    vec![BasisVector::H(-1), BasisVector::L]
                } else {
                    vec![BasisVector::H(n)]
                }
            }
            Codomain::D => match n {
                0 => vec![BasisVector::D(0), BasisVector::H(0), BasisVector::C],
                -1 => vec![BasisVector::D(-1), BasisVector::H(-1), BasisVector::L],
                _ => vec![BasisVector::D(n), BasisVector::H(n)],
            },
        }
    }
}

impl Serialize for Codomain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for Codomain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "H" => Ok(Codomain::H),
            "D" => Ok(Codomain::D),
            other => Err(D::Error::custom(format!("unknown codomain `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapsError {
    #[error("basis vector {0} is outside the map's window")]
    OutOfWindow(BasisVector),
    #[error("image of {vector} has degree inconsistent with map degree {delta}")]
    NotHomogeneous { vector: BasisVector, delta: i64 },
    #[error("image of {0} leaves the declared codomain")]
    OutsideCodomain(BasisVector),
    #[error("ad requires a homogeneous nonzero argument")]
    AdNotHomogeneous,
}

/// A degree-homogeneous linear map given by images of window basis vectors.
///
/// A basis vector with a stored zero image is inside the map's window; a
/// missing key is outside it and applying the map there is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    delta: i64,
    codomain: Codomain,
    images: BTreeMap<BasisVector, Element>,
}

impl GradedMap {
    pub fn new(
        delta: i64,
        codomain: Codomain,
        images: BTreeMap<BasisVector, Element>,
    ) -> Result<GradedMap, MapsError> {
        for (bv, img) in &images {
            match img.degree() {
                Degree::Zero => {}
                Degree::Homogeneous(g) if g == bv.degree() + delta => {}
                _ => return Err(MapsError::NotHomogeneous { vector: *bv, delta }),
            }
            if !codomain.contains(img) {
                return Err(MapsError::OutsideCodomain(*bv));
            }
        }
        Ok(GradedMap {
            delta,
            codomain,
            images,
        })
    }

    pub fn zero(delta: i64, codomain: Codomain, basis: &[BasisVector]) -> GradedMap {
        GradedMap {
            delta,
            codomain,
            images: basis.iter().map(|&bv| (bv, Element::zero())).collect(),
        }
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn images(&self) -> &BTreeMap<BasisVector, Element> {
        &self.images
    }

    pub fn domain(&self) -> impl Iterator<Item = BasisVector> + '_ {
        self.images.keys().copied()
    }

    pub fn image_of(&self, bv: BasisVector) -> Result<&Element, MapsError> {
        self.images.get(&bv).ok_or(MapsError::OutOfWindow(bv))
    }

    /// Linear extension of the image table.
    pub fn apply(&self, x: &Element) -> Result<Element, MapsError> {
        let mut out = Element::zero();
        for (bv, coef) in x.iter() {
            let img = self.image_of(bv)?;
            for (bz, cz) in img.iter() {
                out.add_term(bz, cz * coef);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.images.values().all(Element::is_zero)
    }

    /// m([x,y]) - [m(x), y] - [x, m(y)]; zero exactly when the Leibniz rule
    /// holds on the pair.
    pub fn derivation_defect(&self, x: BasisVector, y: BasisVector) -> Result<Element, MapsError> {
        let xe = Element::basis(x);
        let ye = Element::basis(y);
        let lhs = self.apply(&bracket(&xe, &ye))?;
        let mx = self.image_of(x)?;
        let my = self.image_of(y)?;
        Ok(lhs.sub(&bracket(mx, &ye)).sub(&bracket(&xe, my)))
    }

    /// Restriction of the image table to basis vectors with index bound
    /// `bound`.
    pub fn restrict(&self, bound: i64) -> GradedMap {
        GradedMap {
            delta: self.delta,
            codomain: self.codomain,
            images: self
                .images
                .iter()
                .filter(|(bv, _)| bv.in_index_bound(bound))
                .map(|(bv, img)| (*bv, img.clone()))
                .collect(),
        }
    }
}

impl Serialize for GradedMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("delta", &self.delta)?;
        map.serialize_entry("codomain", &self.codomain)?;
        let images: serde_json::Map<String, serde_json::Value> = self
            .images
            .iter()
            .map(|(bv, img)| {
                (
                    bv.key(),
                    serde_json::to_value(img).expect("element serializes"),
                )
            })
            .collect();
        map.serialize_entry("images", &images)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for GradedMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            delta: i64,
            codomain: Codomain,
            images: BTreeMap<String, Element>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let mut images = BTreeMap::new();
        for (key, img) in repr.images {
            let bv = BasisVector::parse_key(&key)
                .ok_or_else(|| D::Error::custom(format!("bad basis key `{key}`")))?;
            images.insert(bv, img);
        }
        GradedMap::new(repr.delta, repr.codomain, images).map_err(D::Error::custom)
    }
}

/// D1 on an arbitrary element: zero on d's and c, identity on h's, doubling
/// on l.
pub fn d1_image(x: &Element) -> Element {
    let mut out = Element::zero();
    for (bv, coef) in x.iter() {
        match bv {
            BasisVector::H(k) => out.add_term(BasisVector::H(k), coef.clone()),
            BasisVector::L => out.add_term(BasisVector::L, coef + coef),
            BasisVector::D(_) | BasisVector::C => {}
        }
    }
    out
}

/// D2 on an arbitrary element: d_n ↦ h_{n+1/2}, h_{-1/2} ↦ l, c and l ↦ 0.
pub fn d2_image(x: &Element) -> Element {
    let mut out = Element::zero();
    for (bv, coef) in x.iter() {
        match bv {
            BasisVector::D(n) => out.add_term(BasisVector::H(n), coef.clone()),
            BasisVector::H(-1) => out.add_term(BasisVector::L, coef.clone()),
            BasisVector::H(_) | BasisVector::C | BasisVector::L => {}
        }
    }
    out
}

fn tabulate(
    delta: i64,
    codomain: Codomain,
    bound: i64,
    f: impl Fn(&Element) -> Element,
) -> GradedMap {
    let images = crate::algebra::basis_with_bound(bound)
        .into_iter()
        .map(|bv| (bv, f(&Element::basis(bv))))
        .collect();
    GradedMap::new(delta, codomain, images).expect("tabulated map is graded")
}

/// D1 as a degree-0 graded map on the window basis.
pub fn make_d1(window: Window, codomain: Codomain) -> GradedMap {
    tabulate(0, codomain, window.outer, d1_image)
}

/// D2 as a degree-0 graded map on the window basis.
pub fn make_d2(window: Window, codomain: Codomain) -> GradedMap {
    tabulate(0, codomain, window.outer, d2_image)
}

/// The inner map x ↦ [x, u] tabulated on the window basis. `u` must be
/// homogeneous (and inside the Heisenberg ideal for codomain H); the
/// resulting map has degree deg u, and images may extend past the window
/// bound by |deg u|.
pub fn ad(u: &Element, window: Window, codomain: Codomain) -> Result<GradedMap, MapsError> {
    let delta = match u.degree() {
        Degree::Homogeneous(n) => n,
        _ => return Err(MapsError::AdNotHomogeneous),
    };
    if !codomain.contains(u) {
        return Err(MapsError::AdNotHomogeneous);
    }
    Ok(tabulate(delta, codomain, window.outer, |x| bracket(x, u)))
}

/// The triple (u, α, β) describing the map x ↦ [u, x] + α D1(x) + β D2(x).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationDescriptor {
    pub u: Element,
    pub alpha: Rational,
    pub beta: Rational,
}

impl DerivationDescriptor {
    pub fn new(u: Element, alpha: Rational, beta: Rational) -> Self {
        DerivationDescriptor { u, alpha, beta }
    }

    pub fn zero() -> Self {
        DerivationDescriptor::new(Element::zero(), Rational::zero(), Rational::zero())
    }

    /// [u, x] + α D1(x) + β D2(x); total and exact.
    pub fn apply(&self, x: &Element) -> Element {
        bracket(&self.u, x)
            .add(&d1_image(x).scale(&self.alpha))
            .add(&d2_image(x).scale(&self.beta))
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.alpha.is_zero() && self.beta.is_zero()
    }
}
