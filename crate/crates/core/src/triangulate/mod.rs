//! Degeneracy, zero-Hessian classification, weight search and the
//! construction of transforms clearing the Hessian below the anti-diagonal.

mod classify;
mod clear;
mod pipeline;
mod univariate;
mod weight_search;
mod witness;

pub use classify::{
    classify, classify_zero_hessian, directional_kernel, make_degenerate_transform, ClassTag, Classification,
    ClassificationRecord,
};
pub use clear::{
    clear_below_antidiagonal, clear_below_antidiagonal_with, normalize_linear_part, ClearOptions, Normalization,
};
pub use pipeline::{dillen_pipeline, dillen_pipeline_with, PipelineOptions, PipelineOutcome};
pub use weight_search::{find_adapted_weight, find_adapted_weight_with, AdaptedWeight, SearchOptions, DEFAULT_BUDGET};
pub use witness::{AntiTriWitness, CaseTag, WitnessRecord};
