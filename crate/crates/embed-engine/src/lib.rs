//! Embedding trees with a fine partition into a skew-LKS graph, driven by a
//! certified configuration witness.

pub mod context;
pub mod fixtures;
pub mod master;
pub mod prop11;
pub mod prop12;
pub mod split;

pub use context::{EmbedContext, TraceStep};
pub use master::{case_hypotheses, engine_stats, master_embed, EmbedOutcome};
pub use prop11::embed_anchored_matching;
pub use prop12::{embed_anchored_degrees_cfg2, embed_anchored_degrees_complete, embed_anchored_degrees_reserve, Block, Reservation};
pub use split::{component_order, max_prefix, skew_cmp, split_fgh, trim_near_leaves, PartCounts, SplitFGH, SplitMode, SplitOrder};

use lks_config::{Config, Inequality};

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("{op}: {} inequality(ies) failed: {}", failed.len(), failed.iter().map(|i| format!("{} ({} vs {})", i.name, i.lhs, i.rhs)).collect::<Vec<_>>().join(", "))]
    Precondition { op: String, failed: Vec<Inequality> },
    #[error("{op}: stuck on component {component:?}: {detail}")]
    Stuck { op: String, component: Vec<usize>, detail: String },
    #[error("{op}: slack lost in cluster {cluster}: {detail}")]
    Slack { op: String, cluster: usize, detail: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("case {case:?}, step {step}: {source}")]
    Step {
        case: Config,
        step: String,
        #[source]
        source: Box<EmbedError>,
    },
}

impl EmbedError {
    /// The innermost error, past any case/step wrappers.
    pub fn root(&self) -> &EmbedError {
        match self {
            EmbedError::Step { source, .. } => source.root(),
            e => e,
        }
    }
}
