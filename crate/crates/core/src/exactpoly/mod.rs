//! Exact sparse multivariate polynomials over the Gaussian rationals.
//!
//! Everything in the crate is expressed through [`MPoly`]: bracket
//! templates, module actions, derivation images and the unknown
//! coefficients of the constraint systems solved by the classifiers.

mod linsolve;
mod monomial;
mod poly;
mod scalar;
mod text;
mod var;

pub use linsolve::{linear_solve, rank_of, to_sparse, LinearSolution, RowEchelon, SparseRow};
pub use monomial::Monomial;
pub use poly::MPoly;
pub use scalar::Scalar;
pub use text::{monomial_label, poly};
pub use var::Var;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor is not monic in the division variable")]
    NotMonic,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix and right-hand side dimensions differ")]
    DimensionMismatch,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[cfg(test)]
mod tests;
