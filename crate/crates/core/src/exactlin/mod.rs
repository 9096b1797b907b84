//! Exact linear algebra over ℚ and prime fields.

mod echelon;
mod homology;
mod matrix;
mod scalar;

pub use echelon::{
    image_basis, inverse, kernel, kernel_basis, rank, solve, Echelon, Quotient, Solver, Subspace,
};
pub use homology::{check_chain_map, ChainComplex, HomologyBasis};
pub(crate) use matrix::Accumulator;
pub use matrix::{sparse_axpy, sparse_from_dense, sparse_scale, sparse_to_dense, Matrix, SparseVec};
pub use scalar::{Field, Rational, Scalar};
