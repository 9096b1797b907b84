//! Bimodule resolutions, their traces, and Connes' `B` and the low cyclic
//! structure recovered from `P ⊗_A P`.

mod connes;
mod free;
mod resolution;
mod section;
mod tensor;

pub use connes::{bar_trace_to_hochschild, compare_with_bicomplex, connes_b_via_trace, lift_to_bar, BComparison, TraceB};
pub use free::{FreeLayout, FreeMap};
pub use resolution::{bar_resolution, periodic_resolution, small_resolution_ingest, BimoduleResolution, ResolutionData};
pub use section::{lambda2_check, lambda2_section, Lambda2Report, Lambda2Section};
pub use tensor::{audit_homotopy, audit_tensor_square, find_homotopy, sigma_on_trace, tensor_res, HomotopyData, SolveOrder, TensorSquare};
