//! The six defining items, size bounds and the ultratypical degree bound.

use crate::model::{ClusterGraph, Family, SkewLksGraph};
use lks_regularity::density_of;
use crate::ClusterError;
use lks_core::rational::{qu, sqrt_upper, Q};
use lks_regularity::{is_regular, Method, Pair, UltratypicalIndex};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LksViolation {
    pub item: u8,
    pub witness: String,
}

/// Violations of items 1–6; empty iff the partition is a skew-LKS partition
/// (regularity checked with `method`, the sampled seed mixed per pair).
pub fn validate_lks(g: &SkewLksGraph, method: Method) -> Vec<LksViolation> {
    let p = &g.params;
    let mut out = Vec::new();
    let mut push = |item: u8, witness: String| out.push(LksViolation { item, witness });
    let (ml, ms) = (g.l_clusters.len(), g.s_clusters.len());
    if qu(ml) < (Q::one() + p.eta) * qu(ms) {
        push(1, format!("m_L = {ml} < (1+η)·{ms}"));
    }
    for (fam, list) in [("L", &g.l_clusters), ("S", &g.s_clusters)] {
        if let Some(c) = list.iter().find(|c| c.len() != list[0].len()) {
            push(2, format!("{fam}-cluster sizes {} and {} differ", list[0].len(), c.len()));
        }
    }
    if let (Some(l), Some(s)) = (g.l_clusters.first(), g.s_clusters.first()) {
        if p.r * qu(s.len()) != (Q::one() - p.r) * qu(l.len()) {
            push(3, format!("r·|S| = {} ≠ (1−r)·|L| = {}", p.r * qu(s.len()), (Q::one() - p.r) * qu(l.len())));
        }
    }
    let clusters = g.clusters();
    let m = clusters.len();
    let mut seen = vec![0u8; g.host.n()];
    for c in &clusters {
        for &v in c {
            if v < seen.len() {
                seen[v] += 1;
            }
        }
    }
    for &v in &g.garbage {
        if v < seen.len() {
            seen[v] += 1;
        }
    }
    if let Some(v) = seen.iter().position(|&s| s != 1) {
        push(2, format!("vertex {v} lies in {} parts", seen[v]));
    }
    let pairs: Vec<(usize, usize)> = (0..ml).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let reg: Vec<LksViolation> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let pair = Pair::new(&g.host, clusters[i].clone(), clusters[j].clone()).ok()?;
            let d = pair.density();
            if d.is_zero() {
                return None;
            }
            if d < p.d {
                return Some(LksViolation {
                    item: 4,
                    witness: format!("pair ({i},{j}) density {d} in (0, d)"),
                });
            }
            let mth = match method {
                Method::Sampled { seed, trials } => Method::Sampled {
                    seed: seed ^ ((i as u64) << 32 | j as u64),
                    trials,
                },
                e => e,
            };
            match is_regular(&pair, &p.epsilon, mth) {
                Ok(v) if v.regular => None,
                Ok(v) => Some(LksViolation {
                    item: 4,
                    witness: format!("pair ({i},{j}) irregular, gap {}", v.witness.map(|w| w.gap).unwrap_or_default()),
                }),
                Err(e) => Some(LksViolation {
                    item: 4,
                    witness: format!("pair ({i},{j}) unchecked: {e}"),
                }),
            }
        })
        .collect();
    out.extend(reg);
    let cof = g.cluster_of();
    let fam = |c: usize| if c < ml { Family::L } else { Family::S };
    for (u, v) in g.host.edges() {
        match (cof[u], cof[v]) {
            (Some(a), Some(b)) if a == b => out.push(LksViolation {
                item: 5,
                witness: format!("edge {u}-{v} inside cluster {a}"),
            }),
            (Some(a), Some(b)) if fam(a) == Family::S && fam(b) == Family::S => out.push(LksViolation {
                item: 5,
                witness: format!("edge {u}-{v} between S-clusters {a},{b}"),
            }),
            (None, _) | (_, None) => out.push(LksViolation {
                item: 5,
                witness: format!("edge {u}-{v} touches the garbage set"),
            }),
            _ => {}
        }
    }
    let need = (Q::one() + p.eta) * qu(p.k);
    for i in 0..ml {
        let deg: Q = (0..m)
            .filter(|&j| j != i)
            .map(|j| density_of(&g.host, &clusters[i], &clusters[j]).unwrap_or_default() * qu(clusters[j].len()))
            .sum();
        if deg < need {
            out.push(LksViolation {
                item: 6,
                witness: format!("L-cluster {i} average degree {deg} < (1+η)k = {need}"),
            });
        }
    }
    out.sort_by_key(|v| v.item);
    out
}

/// Sorted, deduplicated item numbers.
pub fn lks_items(v: &[LksViolation]) -> Vec<u8> {
    let mut items: Vec<u8> = v.iter().map(|x| x.item).collect();
    items.dedup();
    items
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeBound {
    pub cluster: usize,
    pub size: usize,
    #[serde(with = "lks_core::rational::serde_q")]
    pub bound: Q,
    #[serde(with = "lks_core::rational::serde_q")]
    pub margin: Q,
    pub holds: bool,
}

/// `|C| ≤ n/|V(𝐇)|` for L-clusters and `|D| ≤ n/(r|V(𝐇)|)` for S-clusters.
pub fn cluster_size_bounds(cg: &ClusterGraph, n: usize) -> Vec<SizeBound> {
    let v = qu(cg.len());
    (0..cg.len())
        .map(|c| {
            let bound = match cg.family(c) {
                Family::L => qu(n) / v,
                Family::S => qu(n) / (cg.params.r * v),
            };
            let margin = bound - qu(cg.size(c));
            SizeBound {
                cluster: c,
                size: cg.size(c),
                bound,
                margin,
                holds: margin >= Q::zero(),
            }
        })
        .collect()
}

/// Checks `deg(v, ∪𝒮) ≥ deḡ(C,𝒮) − 2√ε·n/r` for an ultratypical `v`.
///
/// `n` is the order of the LKS graph; `√ε` is the grid upper bound.
pub fn ultratypical_degree_check(
    g: &SkewLksGraph,
    cg: &ClusterGraph,
    index: &UltratypicalIndex,
    v: usize,
    set: &[usize],
    epsilon: &Q,
) -> Result<bool, ClusterError> {
    if !index.is_ultratypical(v) {
        return Err(ClusterError::NotUltratypical(v));
    }
    let cof = g.cluster_of();
    let c = cof[v].ok_or(ClusterError::NotUltratypical(v))?;
    let clusters = g.clusters();
    let mut union = lks_core::FixedBitSet::with_capacity(g.host.n());
    for &s in set {
        for &x in clusters.get(s).ok_or(ClusterError::UnknownCluster(s))? {
            union.insert(x);
        }
    }
    let deg = qu(g.host.deg_into(v, &union));
    let slack = Q::from_integer(2) * sqrt_upper(epsilon) * qu(g.order()) / g.params.r;
    Ok(deg >= cg.degbar(c, set)? - slack)
}
