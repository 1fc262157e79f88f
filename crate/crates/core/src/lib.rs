//! Core primitives: exact rationals, graphs, rooted trees, embedding
//! certificates and seeded generators.

pub mod cert;
pub mod gen;
pub mod graph;
pub mod rational;
pub mod tree;

pub use cert::{validate_embedding, validate_map, EmbeddingCertificate};
pub use fixedbitset::FixedBitSet;
pub use gen::{generate_tree, rng, GenError, TreeShape};
pub use graph::{Graph, GraphError};
pub use rational::{fmt_q, parse_q, q, qi, qu, Q};
pub use tree::{RootedTree, TreeError, TreeFile};
