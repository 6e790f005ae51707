//! Exact arithmetic kernel: scalars in ℚ(√d), sparse polynomials, rational
//! functions with pole orders along hyperplanes, and exact linear algebra.

mod gcd;
mod linalg;
mod linear;
pub mod modular;
mod poly;
mod ratfunc;
mod scalar;
pub mod text;

pub use gcd::poly_gcd;
pub use linalg::{
    cofactor_det, poly_matrix_det, ratfunc_adjugate, ratfunc_matrix_det, scalar_det, solve_linear, LinearSolution,
};
pub use linear::LinearForm;
pub use poly::{poly_arith, Monomial, MultiPoly, PolyOp, Vars};
pub use ratfunc::RatFunc;
pub use scalar::ExactScalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands live in different polynomial rings")]
    VariableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("{0} is not square-free")]
    NotSquareFree(u32),
    #[error("linear form is zero")]
    ZeroLinearForm,
    #[error("division by zero")]
    ZeroDenominator,
    #[error("pole order of zero is undefined")]
    ZeroOrder,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square")]
    NonSquare,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
