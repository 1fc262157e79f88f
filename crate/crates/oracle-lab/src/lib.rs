//! Independent ground truth: exhaustive subtree search, the extremal host
//! and broom, small conjecture scans, and bistar/Ramsey checks.

pub mod brute;
pub mod canon;
pub mod extremal;
pub mod ramsey;
pub mod scan;

pub use brute::{brute_force_embed, plain_embed, BudgetExceeded, DEFAULT_BUDGET};
pub use canon::{all_graphs, all_trees, canonical_code, canonical_graph, tree_code, tree_diameter, CanonCode};
pub use extremal::{bistar_check, bistar_embeds, extremal_exclusions, floor_rk1, gen_extremal, gen_tight_tree, DegreeProfile, Extremal};
pub use ramsey::{monochromatic, pairs, pigeonhole_step, ramsey_check, Colouring, PigeonholeStep, RamseyVerdict};
pub use scan::{conjecture_scan, meets_hypothesis, sample_host, scan_trees, Counterexample, ScanMode, ScanReport, SubScan};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("degenerate r: {0}")]
    DegenerateR(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}
