//! Exact linear algebra over the Gaussian rationals Q(i).

mod matrix;
mod scalar;
mod subspace;

pub use matrix::QiMatrix;
pub use scalar::{parse_rational, rational, rational_int, GaussianRational, Rational};
pub use subspace::{concat_bases, conjugate, direct_sum_spans, intersect, kernel, rref, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("malformed matrix: {0}")]
    Shape(String),
}
