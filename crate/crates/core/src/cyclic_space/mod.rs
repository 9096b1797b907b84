//! Cyclic vector spaces and their Hochschild, cyclic and periodic homology.

mod bicomplex;
mod connes;
mod cyclic;
mod model;

pub use bicomplex::{bar_b_prime, cyclic_bicomplex, extra_degeneracy, hochschild_b, Bicomplex};
pub use connes::{
    audit_connes_b, connes_b, connes_sequence_check, connes_sequence_check_with, connes_sequence_of, hc, hc_with, hh_of_cyclic,
    hochschild_bases, hp, hp_of, hp_with, periodicity_map, ConnesReport, HpDegree, ModelHomology, NodeReport,
};
pub use cyclic::{a_sharp_map, build_a_sharp, tensor_vectors, CyclicMap, CyclicVectorSpace};
pub use model::{connes_b_chain, degenerate_quotients, tot_chain_map, CyclicModel, ModelKind};
pub(crate) use cyclic::digits;
