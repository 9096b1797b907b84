//! Hochschild, cyclic and periodic cyclic homology of finite-dimensional
//! algebras with exact arithmetic.

pub mod algebra;
pub mod cli;
pub mod cyclic_bimod;
pub mod cyclic_space;
pub mod deform;
pub mod exactlin;
pub mod lambda_cat;
pub mod trace_res;

pub use exactlin::{Field, Matrix, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
