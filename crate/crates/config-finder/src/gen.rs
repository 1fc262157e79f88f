//! Seeded random cluster graphs that satisfy the configuration hypothesis.

use crate::witness::TreeStats;
use lks_cluster::{ClusterGraph, Family, LksParams};
use lks_core::rational::floor_q;
use lks_core::{q, qu, rng, Q};
use num_traits::{One, Zero};
use rand::Rng;

#[derive(Clone, Debug)]
pub struct Instance {
    pub cg: ClusterGraph,
    pub stats: TreeStats,
    pub eta: Q,
}

/// A cluster graph with `clusters` clusters (6–24 is the intended range),
/// `m_L ≥ (1+η)m_S`, `r′`-proportional cluster sizes, pair densities 0 or at
/// least 1/5, and `k` the largest integer with every L-cluster at
/// `deḡ ≥ (1+η)k`; plus tree statistics with `a₂+b₁ = r̃k`, `r̃ ≤ r′`.
pub fn random_instance(seed: u64, clusters: usize) -> Instance {
    let mut r = rng(seed);
    loop {
        let (s, t) = [(1i128, 2i128), (1, 3), (2, 5), (1, 4)][r.gen_range(0..4)];
        let rp = q(s, t);
        let eta = [q(1, 10), q(1, 5), q(1, 20)][r.gen_range(0..3)];
        let max_s = floor_q(&(qu(clusters) / (Q::from_integer(2) + eta))) as usize;
        let m_s = r.gen_range(0..=max_s);
        let m_l = clusters - m_s;
        let unit = r.gen_range(1..=4) * 5;
        let l_size = s as usize * unit;
        let s_size = (t - s) as usize * unit;
        let family: Vec<Family> = (0..clusters).map(|i| if i < m_l { Family::L } else { Family::S }).collect();
        let sizes: Vec<usize> = (0..clusters).map(|i| if i < m_l { l_size } else { s_size }).collect();
        let p_edge = q(r.gen_range(3..=9), 10);
        let mut dens = vec![vec![Q::zero(); clusters]; clusters];
        for (i, j) in (0..m_l).flat_map(|i| (i + 1..clusters).map(move |j| (i, j))) {
            if qu(r.gen_range(0..10)) < p_edge * Q::from_integer(10) {
                let d = q(r.gen_range(4..=20), 20);
                dens[i][j] = d;
                dens[j][i] = d;
            }
        }
        let params = LksParams { k: 1, eta, epsilon: q(1, 4), d: q(1, 5), r: rp };
        let probe = ClusterGraph::from_parts(family.clone(), sizes.clone(), dens.clone(), params.clone()).expect("valid plan");
        let min_l = (0..m_l).map(|i| probe.degbar_total(i)).min().unwrap_or_default();
        let k = floor_q(&(min_l / (Q::one() + eta)));
        if k < 2 {
            continue;
        }
        let k = k as usize;
        let cg = ClusterGraph::from_parts(family, sizes, dens, LksParams { k, ..params }).expect("valid plan");
        let t1 = r.gen_range(0..=floor_q(&(rp * qu(k))) as usize);
        let a2 = r.gen_range(0..=t1);
        let a1 = r.gen_range(0..=k - t1);
        let stats = TreeStats {
            a1,
            a2,
            b1: t1 - a2,
            b2: k - t1 - a1,
            r_tilde: q(t1 as i128, k as i128),
        };
        return Instance { cg, stats, eta };
    }
}
