//! Square-zero extensions and the filtered cyclic objects they produce.

mod extension;
mod filtered;
mod splitting;

pub use extension::{coboundary, cochain_from_matrix, cohomologous_isomorphism, square_zero, SquareZeroExtension};
pub use filtered::{abar_sharp, filtered_a_tilde_sharp, truncated_sharp, AbarData, FilteredSharp, TensorBasis, TruncatedSharp};
pub use splitting::{
    ahat_sharp, gauss_manin_splitting, goodwillie_check, hp_objects, AhatData, GoodwillieDegree, GoodwillieReport, SplitDegree,
    SplittingReport,
};
