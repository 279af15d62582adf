//! Exact rational scalars, vectors and matrices.

mod matrix;
mod rational;

pub use matrix::{RatMatrix, RatVector};
pub use rational::{q, rat, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square: {0:?}")]
    NotSquare((usize, usize)),
    #[error("matrix is not unit lower triangular")]
    NotUnitLowerTriangular,
    #[error("rows have different lengths")]
    Ragged,
    #[error("expected {rows}x{cols} entries, got {got}")]
    BadEntryCount { rows: usize, cols: usize, got: usize },
}
