//! Cyclic bimodules, the cyclic vector space `M_#`, and the Kan extension `j_!`.

mod msharp;
mod simplicial;
mod structure;

pub use msharp::{build_m_sharp, build_m_sharp_unchecked, hc_with_coefficients, m_sharp_rotation, tau_sharp};
pub use simplicial::{counit, j_shriek, j_shriek_map, restrict, simplicial_m, SimplicialVectorSpace};
pub use structure::{
    check_cyclic_structure, tautological_tau, triple_composite, CyclicBimodule, StructureFailure, StructureReport,
};
