//! Configuration finding on skew-LKS cluster graphs: an S₀-covering matching,
//! alternating reachability, and certified witnesses for configurations A–D.

pub mod gen;
pub mod matching;
pub mod witness;

pub use gen::{random_instance, Instance};
pub use matching::{alternating_reachability, low_s, matching_max_cover, Matching, Reachability};
pub use witness::{
    basic_props_violations, build_witness, find_configuration, inequalities_at, proof_sets, verify_witness, Config, ConfigWitness, Inequality,
    ProofSets, TreeStats, WitnessMeta,
};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid tree statistics: {0}")]
    InvalidStats(String),
    #[error("not an LKS cluster graph: {0}")]
    NotLks(String),
    #[error("no configuration found; counterexample candidate")]
    CounterexampleCandidate(Box<ProofSets>),
}
