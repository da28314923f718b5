//! Exact lambda-bracket calculus for the Lie conformal algebras `CSV(a,b)`
//! and `CHV(a,b)` and their relatives.
//!
//! The crate builds the algebras from bracket templates, checks the
//! conformal algebra axioms symbolically, computes conformal derivations
//! and classifies rank one and graded intermediate series modules. All
//! arithmetic is exact over `Q(i)`; parameters that are not numbers are
//! carried as polynomial variables.

pub mod catalog;
pub mod der;
pub mod exactpoly;
pub mod lca;
pub mod repr;
pub mod solve;
pub mod suite;

pub use exactpoly::{linear_solve, poly, MPoly, Monomial, PolyError, Scalar, Var};
pub use lca::{AlgebraSpec, Element, Family, GenPoly, Generator, LambdaPoly};
