//! Fine partitions of rooted trees and the anchored forests built from them.

pub mod anchored;
pub mod fine;

pub use anchored::{oriented_forests, to_anchored_forests, AnchoredForest, ClassCounts, Component, Deferred, Forests};
pub use fine::{fine_partition, verify_fine_partition, violated_items, FinePartition, Violation};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("ℓ = {ell} must satisfy 1 ≤ ℓ < k = {k}")]
    BadEll { ell: usize, k: usize },
    #[error("internal contract: item {item} violated ({witness})")]
    Contract { item: u8, witness: String },
    #[error("anchored forest contract: {0}")]
    Forest(String),
}
