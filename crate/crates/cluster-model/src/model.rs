//! Skew-LKS graphs and their weighted cluster graphs.

use crate::ClusterError;
use lks_core::rational::{qu, serde_q, Q};
use lks_core::Graph;
use lks_regularity::density_of;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LksParams {
    pub k: usize,
    #[serde(with = "serde_q")]
    pub eta: Q,
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    #[serde(with = "serde_q")]
    pub d: Q,
    #[serde(with = "serde_q")]
    pub r: Q,
}

/// A host graph with its L/S cluster partition; vertices in `garbage` belong
/// to no cluster and carry no edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewLksGraph {
    pub host: Graph,
    pub l_clusters: Vec<Vec<usize>>,
    pub s_clusters: Vec<Vec<usize>>,
    pub garbage: Vec<usize>,
    pub params: LksParams,
}

#[derive(Serialize, Deserialize)]
struct Bundle {
    host: String,
    #[serde(rename = "L")]
    l: Vec<Vec<usize>>,
    #[serde(rename = "S")]
    s: Vec<Vec<usize>>,
    garbage: Vec<usize>,
    params: LksParams,
}

impl SkewLksGraph {
    /// Clusters in id order: L-clusters first, then S-clusters.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        self.l_clusters.iter().chain(&self.s_clusters).cloned().collect()
    }

    /// Number of clustered vertices (the order of the LKS graph proper).
    pub fn order(&self) -> usize {
        self.l_clusters.iter().chain(&self.s_clusters).map(Vec::len).sum()
    }

    /// Cluster id per host vertex.
    pub fn cluster_of(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.host.n()];
        for (i, c) in self.clusters().iter().enumerate() {
            for &v in c {
                out[v] = Some(i);
            }
        }
        out
    }

    pub fn cluster_graph(&self) -> ClusterGraph {
        let clusters = self.clusters();
        let m = clusters.len();
        let mut dens = vec![vec![Q::zero(); m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let d = density_of(&self.host, &clusters[i], &clusters[j]).unwrap_or_default();
                dens[i][j] = d;
                dens[j][i] = d;
            }
        }
        let l = self.l_clusters.len();
        let fam = (0..m).map(|i| if i < l { Family::L } else { Family::S }).collect();
        let sizes = clusters.iter().map(Vec::len).collect();
        ClusterGraph::from_parts(fam, sizes, dens, self.params.clone()).expect("consistent model")
    }

    pub fn to_json(&self) -> String {
        let b = Bundle {
            host: self.host.to_edge_list(),
            l: self.l_clusters.clone(),
            s: self.s_clusters.clone(),
            garbage: self.garbage.clone(),
            params: self.params.clone(),
        };
        serde_json::to_string(&b).expect("bundle serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ClusterError> {
        let b: Bundle = serde_json::from_str(s).map_err(|e| ClusterError::Json(e.to_string()))?;
        let host = Graph::parse_edge_list(&b.host).map_err(|e| ClusterError::Json(e.to_string()))?;
        Ok(SkewLksGraph {
            host,
            l_clusters: b.l,
            s_clusters: b.s,
            garbage: b.garbage,
            params: b.params,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    L,
    S,
}

/// Cluster graph with exact pair densities.
///
/// Edges are the L–L and L–S pairs of positive density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterGraph {
    family: Vec<Family>,
    sizes: Vec<usize>,
    dens: Vec<Vec<Q>>,
    adj: Vec<Vec<usize>>,
    total: Vec<Q>,
    pub params: LksParams,
}

impl ClusterGraph {
    /// Builds from explicit data; S–S densities must be zero.
    pub fn from_parts(
        family: Vec<Family>,
        sizes: Vec<usize>,
        dens: Vec<Vec<Q>>,
        params: LksParams,
    ) -> Result<Self, ClusterError> {
        let m = family.len();
        if sizes.len() != m || dens.len() != m || dens.iter().any(|r| r.len() != m) {
            return Err(ClusterError::InfeasiblePlan("dimension mismatch".into()));
        }
        for i in 0..m {
            for j in 0..m {
                let d = dens[i][j];
                if d != dens[j][i] || d < Q::zero() || d > Q::from_integer(1) {
                    return Err(ClusterError::InfeasiblePlan(format!("density ({i},{j}) = {d}")));
                }
                let ss = family[i] == Family::S && family[j] == Family::S;
                if (i == j || ss) && !d.is_zero() {
                    return Err(ClusterError::InfeasiblePlan(format!("pair ({i},{j}) must be empty")));
                }
            }
        }
        let adj: Vec<Vec<usize>> = (0..m).map(|i| (0..m).filter(|&j| !dens[i][j].is_zero()).collect()).collect();
        let total = (0..m).map(|i| (0..m).map(|j| dens[i][j] * qu(sizes[j])).sum()).collect();
        Ok(ClusterGraph {
            family,
            sizes,
            dens,
            adj,
            total,
            params,
        })
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn family(&self, c: usize) -> Family {
        self.family[c]
    }

    pub fn is_l(&self, c: usize) -> bool {
        self.family[c] == Family::L
    }

    pub fn l_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.is_l(c)).collect()
    }

    pub fn s_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| !self.is_l(c)).collect()
    }

    pub fn size(&self, c: usize) -> usize {
        self.sizes[c]
    }

    pub fn density(&self, a: usize, b: usize) -> Q {
        self.dens[a][b]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        !self.dens[a][b].is_zero()
    }

    pub fn neighbors(&self, c: usize) -> &[usize] {
        &self.adj[c]
    }

    /// Sum of cluster sizes.
    pub fn order(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `deḡ(C, 𝒮) = Σ_{D∈𝒮} d(C,D)·|D|`.
    pub fn degbar(&self, c: usize, set: &[usize]) -> Result<Q, ClusterError> {
        let m = self.len();
        if let Some(&bad) = std::iter::once(&c).chain(set).find(|&&x| x >= m) {
            return Err(ClusterError::UnknownCluster(bad));
        }
        Ok(self.degbar_to(c, set))
    }

    /// [`Self::degbar`] for ids known to be valid.
    pub fn degbar_to(&self, c: usize, set: &[usize]) -> Q {
        set.iter().map(|&d| self.dens[c][d] * qu(self.sizes[d])).sum()
    }

    /// `deḡ(C)` to all clusters.
    pub fn degbar_total(&self, c: usize) -> Q {
        self.total[c]
    }
}
