//! The cyclic category Λ, its truncations, and homology of finite categories.

mod category;
mod homology;
mod morphism;

pub use category::{lambda_leq, FiniteCategory, LambdaTruncation, Representation};
pub use homology::{bar_complex, bar_homology, category_homology, resolution_ranks, tor_complex, tor_total_complex};
pub use morphism::{hom_set, marked_lift, CycMor, Generator, MarkedObj};
