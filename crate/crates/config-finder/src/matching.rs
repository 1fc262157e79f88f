//! Matchings in `𝐇[𝓛,𝒮]` covering as many low-degree S-clusters as possible,
//! and the alternating-path structure around them.

use lks_cluster::ClusterGraph;
use lks_core::Q;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Matching edges as `(L-cluster, S-cluster)`, sorted.
pub type Matching = Vec<(usize, usize)>;

/// S-clusters with `deḡ < threshold`.
pub fn low_s(cg: &ClusterGraph, threshold: &Q) -> Vec<usize> {
    cg.s_ids().into_iter().filter(|&s| cg.degbar_total(s) < *threshold).collect()
}

/// Kuhn's augmenting-path matching restricted to `ss` and the L-clusters not in `banned`.
fn max_matching(cg: &ClusterGraph, ss: &[usize], banned: &[bool]) -> usize {
    let mut mate_l = vec![usize::MAX; cg.len()];
    let mut size = 0;
    for &s in ss {
        let mut seen = vec![false; cg.len()];
        if augment(cg, s, banned, &mut seen, &mut mate_l) {
            size += 1;
        }
    }
    size
}

fn augment(cg: &ClusterGraph, s: usize, banned: &[bool], seen: &mut [bool], mate_l: &mut [usize]) -> bool {
    for &l in cg.neighbors(s) {
        if !cg.is_l(l) || banned[l] || seen[l] {
            continue;
        }
        seen[l] = true;
        if mate_l[l] == usize::MAX || augment(cg, mate_l[l], banned, seen, mate_l) {
            mate_l[l] = s;
            return true;
        }
    }
    false
}

/// A matching in `𝐇[𝓛,𝒮]` that covers the most S-clusters with `deḡ < threshold`.
///
/// Covered S-clusters are picked greedily in the transversal matroid: low
/// clusters by id, then the remaining S-clusters by id, each kept if the set
/// stays matchable. So the low count is maximum and, subject to that, so is the
/// matching size. The edge set is then the lexicographically least matching
/// covering exactly the chosen S-clusters.
pub fn matching_max_cover(cg: &ClusterGraph, threshold: &Q) -> Matching {
    let low = low_s(cg, threshold);
    let high: Vec<usize> = cg.s_ids().into_iter().filter(|s| !low.contains(s)).collect();
    let none = vec![false; cg.len()];
    let mut cover: Vec<usize> = Vec::new();
    for &s in low.iter().chain(&high) {
        cover.push(s);
        if max_matching(cg, &cover, &none) < cover.len() {
            cover.pop();
        }
    }
    cover.sort_unstable();
    let mut banned = vec![false; cg.len()];
    let mut left = cover.clone();
    let mut out = Vec::new();
    let mut edges: Vec<(usize, usize)> = cover
        .iter()
        .flat_map(|&s| cg.neighbors(s).iter().filter(|&&l| cg.is_l(l)).map(move |&l| (l, s)))
        .collect();
    edges.sort_unstable();
    for (l, s) in edges {
        if banned[l] || !left.contains(&s) {
            continue;
        }
        banned[l] = true;
        let rest: Vec<usize> = left.iter().copied().filter(|&x| x != s).collect();
        if max_matching(cg, &rest, &banned) == rest.len() {
            out.push((l, s));
            left = rest;
        } else {
            banned[l] = false;
        }
    }
    out
}

/// The sets 𝓑 (matched clusters reachable by an alternating path starting in
/// an uncovered low S-cluster) and 𝓐 = V(𝐌) ∖ 𝓑, split by family.
///
/// `l_a` is 𝓛 ∖ 𝓛_B, so it includes unmatched L-clusters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reachability {
    pub a_side: Vec<usize>,
    pub b_side: Vec<usize>,
    pub l_a: Vec<usize>,
    pub l_b: Vec<usize>,
    pub s_a: Vec<usize>,
    pub s_b: Vec<usize>,
}

/// BFS over alternating paths `X₁X₂…` with `X₁ ∈ s0`, `X₂ᵢ ∈ 𝓛` and `{X₂ᵢ, X₂ᵢ₊₁} ∈ m`.
pub fn alternating_reachability(cg: &ClusterGraph, m: &[(usize, usize)], s0: &[usize]) -> Reachability {
    let n = cg.len();
    let mut mate = vec![usize::MAX; n];
    for &(l, s) in m {
        mate[l] = s;
        mate[s] = l;
    }
    let mut reached = vec![false; n];
    let mut queue: VecDeque<usize> = s0.iter().copied().collect();
    let mut visited_s = vec![false; n];
    for &s in s0 {
        visited_s[s] = true;
    }
    while let Some(s) = queue.pop_front() {
        for &l in cg.neighbors(s) {
            if !cg.is_l(l) || mate[l] == usize::MAX || mate[l] == s || reached[l] {
                continue;
            }
            reached[l] = true;
            let next = mate[l];
            reached[next] = true;
            if !visited_s[next] {
                visited_s[next] = true;
                queue.push_back(next);
            }
        }
    }
    let mut r = Reachability::default();
    for &(l, s) in m {
        for x in [l, s] {
            if reached[x] {
                r.b_side.push(x);
            } else {
                r.a_side.push(x);
            }
        }
    }
    r.a_side.sort_unstable();
    r.b_side.sort_unstable();
    for c in 0..n {
        match (cg.is_l(c), reached[c]) {
            (true, true) => r.l_b.push(c),
            (true, false) => r.l_a.push(c),
            (false, true) => r.s_b.push(c),
            (false, false) if mate[c] != usize::MAX => r.s_a.push(c),
            _ => {}
        }
    }
    r
}
