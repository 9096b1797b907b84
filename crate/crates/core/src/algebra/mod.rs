//! Finite-dimensional algebras, bimodules, traces and Hochschild complexes.

#[allow(clippy::module_inception)]
mod algebra;
mod bimodule;
mod hochschild;

pub use algebra::FinAlgebra;
pub use bimodule::{
    swap_matrix, tensor_over_a, trace, trace_of_tensor, trace_swap, Bimodule, TensorOverA,
};
pub use hochschild::{
    alternating_sum, cocycle_violation, hh, hh_cohomology, hochschild_chain_complex,
    hochschild_cochain_complex, hochschild_degeneracies, hochschild_faces,
    normalized_hochschild_complex, CochainComplex, HHCohomology,
};
