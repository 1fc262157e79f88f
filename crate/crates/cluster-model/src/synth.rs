//! Synthetic skew-LKS graphs from a density plan.

use crate::model::{LksParams, SkewLksGraph};
use crate::ClusterError;
use lks_core::rational::{qu, serde_q_mat, Q};
use lks_core::{rng, Graph};
use num_traits::{One, Zero};
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

/// Cluster counts, sizes and the planned density of every cluster pair.
///
/// Clusters `0..m_l` are L-clusters of size `l_size`; the S-clusters have size
/// `l_size·(1−r)/r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityPlan {
    pub m_l: usize,
    pub m_s: usize,
    pub l_size: usize,
    #[serde(with = "serde_q_mat")]
    pub densities: Vec<Vec<Q>>,
    pub params: LksParams,
}

impl DensityPlan {
    pub fn s_size(&self) -> Result<usize, ClusterError> {
        let s = qu(self.l_size) * (Q::one() - self.params.r) / self.params.r;
        if !s.is_integer() {
            return Err(ClusterError::InfeasiblePlan(format!(
                "S-cluster size {s} is not an integer"
            )));
        }
        Ok(s.to_integer() as usize)
    }

    /// Plan with one density for all L–L pairs and one for all L–S pairs.
    pub fn uniform(m_l: usize, m_s: usize, l_size: usize, ll: Q, ls: Q, params: LksParams) -> Self {
        let m = m_l + m_s;
        let densities = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| match (i < m_l, j < m_l) {
                        _ if i == j => Q::zero(),
                        (true, true) => ll,
                        (false, false) => Q::zero(),
                        _ => ls,
                    })
                    .collect()
            })
            .collect();
        DensityPlan {
            m_l,
            m_s,
            l_size,
            densities,
            params,
        }
    }

    /// Planned `deḡ` of cluster `i` to all clusters.
    pub fn planned_degree(&self, i: usize) -> Result<Q, ClusterError> {
        let s = self.s_size()?;
        Ok((0..self.m_l + self.m_s)
            .map(|j| self.densities[i][j] * qu(if j < self.m_l { self.l_size } else { s }))
            .sum())
    }
}

/// Realizes `plan` on fresh vertices; each pair gets exactly `round(p·|X||Y|)`
/// edges chosen uniformly.
pub fn synthesize_lks(plan: &DensityPlan, seed: u64) -> Result<SkewLksGraph, ClusterError> {
    let m = plan.m_l + plan.m_s;
    let s_size = plan.s_size()?;
    if plan.l_size == 0 || plan.densities.len() != m || plan.densities.iter().any(|r| r.len() != m) {
        return Err(ClusterError::InfeasiblePlan("plan dimensions".into()));
    }
    for i in 0..m {
        for j in 0..m {
            let d = plan.densities[i][j];
            if d != plan.densities[j][i] || d < Q::zero() || d > Q::one() {
                return Err(ClusterError::InfeasiblePlan(format!("density ({i},{j}) = {d}")));
            }
            if (i == j || (i >= plan.m_l && j >= plan.m_l)) && !d.is_zero() {
                return Err(ClusterError::InfeasiblePlan(format!("pair ({i},{j}) must be empty")));
            }
        }
    }
    let mut clusters = Vec::with_capacity(m);
    let mut next = 0;
    for i in 0..m {
        let size = if i < plan.m_l { plan.l_size } else { s_size };
        clusters.push((next..next + size).collect::<Vec<usize>>());
        next += size;
    }
    let mut host = Graph::empty(next);
    let mut r = rng(seed);
    for i in 0..m {
        for j in i + 1..m {
            let d = plan.densities[i][j];
            let (a, b) = (&clusters[i], &clusters[j]);
            let total = a.len() * b.len();
            let want = (d * qu(total)).round().to_integer() as usize;
            for idx in sample(&mut r, total, want).into_iter() {
                host.add_edge(a[idx / b.len()], b[idx % b.len()]).expect("fresh edge");
            }
        }
    }
    let s_clusters = clusters.split_off(plan.m_l);
    Ok(SkewLksGraph {
        host,
        l_clusters: clusters,
        s_clusters,
        garbage: Vec::new(),
        params: plan.params.clone(),
    })
}
