//! Embedding certificates and their validation.

use crate::graph::Graph;
use crate::tree::RootedTree;
use serde::{Deserialize, Serialize};

/// Injective homomorphism pattern → host with a per-vertex provenance tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub map: Vec<usize>,
    pub provenance: Vec<String>,
}

impl EmbeddingCertificate {
    pub fn new(map: Vec<usize>, tag: &str) -> Self {
        let provenance = vec![tag.to_string(); map.len()];
        EmbeddingCertificate { map, provenance }
    }
}

/// True iff `cert.map` is an injective, edge-preserving map of `pattern` into `host`.
pub fn validate_embedding(cert: &EmbeddingCertificate, pattern: &RootedTree, host: &Graph) -> bool {
    validate_map(&cert.map, &pattern.to_graph(), host)
}

/// Same check for an arbitrary pattern graph.
pub fn validate_map(map: &[usize], pattern: &Graph, host: &Graph) -> bool {
    if map.len() != pattern.n() {
        return false;
    }
    let mut seen = vec![false; host.n()];
    for &h in map {
        if h >= host.n() || seen[h] {
            return false;
        }
        seen[h] = true;
    }
    pattern.edges().all(|(u, v)| host.has_edge(map[u], map[v]))
}
