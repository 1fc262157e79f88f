//! Skew-LKS graphs: the cluster model, its validator, a synthetic generator
//! and a heuristic builder from arbitrary host graphs.

pub mod build;
pub mod model;
pub mod synth;
pub mod validate;

pub use build::{build_skew_lks, choose_r_prime, BuildOptions, BuildReport, ErasureReport};
pub use model::{ClusterGraph, Family, LksParams, SkewLksGraph};
pub use synth::{synthesize_lks, DensityPlan};
pub use validate::{cluster_size_bounds, lks_items, ultratypical_degree_check, validate_lks, LksViolation, SizeBound};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ClusterError {
    #[error("unknown cluster {0}")]
    UnknownCluster(usize),
    #[error("infeasible plan: {0}")]
    InfeasiblePlan(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("partition failure: {0}")]
    PartitionFailure(String),
    #[error("vertex {0} is not ultratypical")]
    NotUltratypical(usize),
    #[error("json: {0}")]
    Json(String),
}
