//! Exact-arithmetic workbench for the mirror Heisenberg-Virasoro algebra.
//!
//! The crate implements the algebra's bracket and grading over exact
//! rationals, solves graded derivation and Hom spaces by exact linear
//! algebra over finite truncation windows, computes first-cohomology
//! components together with explicit inner witnesses, and recovers a global
//! derivation from a 2-local derivation oracle.
//!
//! Every computation is exact: scalars are arbitrary-precision rationals,
//! solvers are fraction-free, and all reported equalities are bit-exact.

pub mod algebra;
pub mod linsolve;
pub mod maps;
pub mod parse;
pub mod rational;
pub mod registry;
pub mod solver;
pub mod twolocal;

pub use algebra::{basis_with_bound, bracket, jacobi_defect, BasisVector, Degree, Element, Window};
pub use maps::{ad, make_d1, make_d2, Codomain, DerivationDescriptor, GradedMap};
pub use parse::{format_element, parse_element, ParseError};
pub use rational::Rational;
