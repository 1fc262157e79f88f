//! Densities, ε-regular pairs, typical vertices and tree embedding into pairs.

pub mod embed;
pub mod pair;
pub mod typical;

pub use embed::{embed_in_pair, pair_embed_violations, GreedyState, PairEmbedRequest};
pub use pair::{density_of, edges_between, is_regular, witness_is_valid, Method, Pair, RegularityVerdict, Witness};
pub use typical::{check_slicing, typical_vertices, ultratypical_vertices, UltratypicalIndex};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegularityError {
    #[error("pair has an empty side")]
    EmptySide,
    #[error("vertex {0} lies in both sides")]
    Overlap(usize),
    #[error("vertex {0} is not in the host graph")]
    VertexOutOfRange(usize),
    #[error("ε must be positive")]
    BadEpsilon,
    #[error("exhaustive check needs the smaller side ≤ {limit}, got {side}")]
    BudgetExceeded { side: usize, limit: usize },
    #[error("preconditions violated: {}", .0.join("; "))]
    Precondition(Vec<String>),
    #[error("stuck at tree vertex {vertex} (mapped neighbours {mapped_neighbours:?}): no candidate among {pool} available vertices on its side, {opposite_pool} on the other")]
    Stuck {
        vertex: usize,
        mapped_neighbours: Vec<usize>,
        pool: usize,
        opposite_pool: usize,
    },
}
