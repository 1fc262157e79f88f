//! Desk-scale version of the decomposition pipeline: host graph to skew-LKS graph.

use crate::model::{LksParams, SkewLksGraph};
use crate::ClusterError;
use lks_core::rational::{floor_q, qu, simplest_in, Q};
use lks_core::{FixedBitSet, Graph};
use lks_regularity::{is_regular, Method, Pair};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Parts have the least size that is a multiple of `lcm(s, t−s)` and at least this.
    pub min_part: usize,
    /// Cap on witness-driven refinement rounds.
    pub iterations: usize,
    pub seed: u64,
    pub trials: usize,
    /// Parts up to this size are checked exhaustively.
    pub exhaustive_up_to: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            min_part: 4,
            iterations: 20,
            seed: 0,
            trials: 200,
            exhaustive_up_to: 8,
        }
    }
}

/// Erased-edge counts next to the accounting bounds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasureReport {
    pub inside_sets: usize,
    pub irregular_pairs: usize,
    pub low_density: usize,
    pub between_s: usize,
    pub garbage_edges: usize,
    pub cluster_cleanup: usize,
    #[serde(with = "lks_core::rational::serde_q")]
    pub bound_inside: Q,
    #[serde(with = "lks_core::rational::serde_q")]
    pub bound_irregular: Q,
    #[serde(with = "lks_core::rational::serde_q")]
    pub bound_low_density: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    #[serde(with = "lks_core::rational::serde_q")]
    pub r_prime: Q,
    pub s: usize,
    pub t: usize,
    pub n_prime: usize,
    pub parts: usize,
    pub part_size: usize,
    pub l_sets: usize,
    pub s_sets: usize,
    pub rounds: usize,
    pub converged: bool,
    pub irregular_left: usize,
    pub garbage: usize,
    pub erasures: ErasureReport,
    /// `m_L ≥ (1+ηq/100)(m_L+m_S)/2`.
    pub ml_inequality: bool,
}

/// `r′ = s/t` in `[r, r(1+ηρq/12)]`, least `t` then least `s`; `1/2` stays `1/2`.
pub fn choose_r_prime(r: &Q, eta: &Q, q: &Q) -> Option<(usize, usize)> {
    let half = Q::new(1, 2);
    if *r == half {
        return Some((1, 2));
    }
    let rho = half - r;
    let hi = r * (Q::one() + eta * rho * q / Q::from_integer(12));
    let x = simplest_in(r, &hi)?;
    Some((*x.numer() as usize, *x.denom() as usize))
}

/// Runs the pipeline: drop low-degree vertices, partition heuristically,
/// erase inside/irregular/sparse pairs, classify L/S sets by average degree,
/// split L-sets into `t−s` and S-sets into `s` clusters, erase S–S edges.
///
/// The partition groups vertices by connected component and degree bucket,
/// refines by rounded density profiles to the current groups, then splits
/// groups along regularity witnesses for up to `opts.iterations` rounds.
/// Cluster pairs left sparser than `d/2` or irregular at `tε` are emptied.
pub fn build_skew_lks(
    g: &Graph,
    k: usize,
    eta: &Q,
    r_target: &Q,
    epsilon: &Q,
    d: &Q,
    opts: &BuildOptions,
) -> Result<(SkewLksGraph, BuildReport), ClusterError> {
    let n = g.n();
    let half = Q::new(1, 2);
    if n == 0 || k == 0 || *r_target <= Q::zero() || *r_target > half || *eta <= Q::zero() {
        return Err(ClusterError::Precondition("need n, k ≥ 1, 0 < r ≤ 1/2 and η > 0".into()));
    }
    let big = (Q::one() + eta) * qu(k);
    let high = (0..n).filter(|&v| qu(g.degree(v)) >= big).count();
    if qu(high) < r_target * qu(n) {
        return Err(ClusterError::Precondition(format!(
            "{high} vertices of degree ≥ (1+η)k = {big}, need r·n = {}",
            r_target * qu(n)
        )));
    }
    let q = Q::new(k as i128, n as i128);
    let (s, t) = choose_r_prime(r_target, eta, &q)
        .ok_or_else(|| ClusterError::Precondition("no r′ in range".into()))?;
    let r_prime = Q::new(s as i128, t as i128);

    let mut host = g.clone();
    let mut garbage = vec![false; n];
    let drop = floor_q(&(eta * q * qu(n) / Q::from_integer(2))).max(0) as usize;
    let mut low: Vec<usize> = (0..n).filter(|&v| qu(g.degree(v)) < big).collect();
    low.sort_by_key(|&v| (g.degree(v), v));
    for &v in low.iter().take(drop) {
        garbage[v] = true;
    }
    let n_prime = n - drop.min(low.len());
    let mut report = ErasureReport::default();
    report.garbage_edges += isolate(&mut host, &garbage);

    let unit = s.lcm(&(t - s));
    let m = unit * opts.min_part.div_ceil(unit).max(1);
    let mut key: Vec<Vec<u64>> = initial_keys(&host, &garbage, epsilon);
    refine(&host, &garbage, &mut key, epsilon);
    let method_for = |seed: u64| {
        if m <= opts.exhaustive_up_to {
            Method::Exhaustive
        } else {
            Method::Sampled { seed, trials: opts.trials }
        }
    };
    let mut rounds = 0;
    let (mut parts, mut leftover) = chunk(&key, &garbage, m);
    let mut irregular: Vec<(usize, usize)>;
    loop {
        let mut flags: Vec<(usize, u64)> = Vec::new();
        irregular = Vec::new();
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let pair = Pair::new(&host, parts[i].clone(), parts[j].clone()).expect("disjoint parts");
                let v = is_regular(&pair, epsilon, method_for(opts.seed ^ (i * 7919 + j) as u64)).expect("valid ε");
                if let Some(w) = v.witness {
                    irregular.push((i, j));
                    let tag = (i * parts.len() + j) as u64 + 1;
                    flags.extend(w.x.iter().chain(&w.y).map(|&x| (x, tag)));
                }
            }
        }
        if irregular.is_empty() || rounds >= opts.iterations {
            break;
        }
        rounds += 1;
        for (v, tag) in flags {
            key[v].push(tag);
        }
        canonical(&mut key, &garbage);
        let (p, l) = chunk(&key, &garbage, m);
        parts = p;
        leftover = l;
    }
    let converged = irregular.is_empty();
    for &v in &leftover {
        garbage[v] = true;
    }
    report.garbage_edges += isolate(&mut host, &garbage);

    let np = parts.len();
    let mut part_of = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            part_of[v] = i;
        }
    }
    let irr: std::collections::BTreeSet<(usize, usize)> = irregular.iter().copied().collect();
    let mut pair_edges: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (u, v) in host.edges().collect::<Vec<_>>() {
        let (a, b) = (part_of[u], part_of[v]);
        if a == b {
            host.remove_edge(u, v);
            report.inside_sets += 1;
        } else {
            pair_edges.entry((a.min(b), a.max(b))).or_default().push((u, v));
        }
    }
    for ((a, b), es) in &pair_edges {
        let dens = Q::new(es.len() as i128, (m * m) as i128);
        let erase_irr = irr.contains(&(*a, *b));
        if erase_irr || dens < *d {
            for &(u, v) in es {
                host.remove_edge(u, v);
            }
            if erase_irr {
                report.irregular_pairs += es.len();
            } else {
                report.low_density += es.len();
            }
        }
    }
    let npq = qu(n_prime);
    let nq = qu(np.max(1));
    let mq = npq / nq;
    report.bound_inside = nq * mq * (mq - Q::one()) / Q::from_integer(2);
    report.bound_irregular = epsilon * npq * npq;
    report.bound_low_density = d / Q::from_integer(2) * npq * npq;

    let threshold = qu(k) * (Q::one() + eta * q / Q::from_integer(4));
    let all = host.set_of(&(0..n).filter(|&v| !garbage[v]).collect::<Vec<_>>());
    let is_l: Vec<bool> = parts
        .iter()
        .map(|p| Q::new(p.iter().map(|&v| host.deg_into(v, &all)).sum::<usize>() as i128, m as i128) >= threshold)
        .collect();
    let mut l_clusters = Vec::new();
    let mut s_clusters = Vec::new();
    for (p, &l) in parts.iter().zip(&is_l) {
        let pieces = if l { t - s } else { s };
        let size = m / pieces;
        let target = if l { &mut l_clusters } else { &mut s_clusters };
        for c in p.chunks(size) {
            target.push(c.to_vec());
        }
    }
    let mut s_set = FixedBitSet::with_capacity(n);
    for c in &s_clusters {
        for &v in c {
            s_set.insert(v);
        }
    }
    for (u, v) in host.edges().collect::<Vec<_>>() {
        if s_set.contains(u) && s_set.contains(v) {
            host.remove_edge(u, v);
            report.between_s += 1;
        }
    }
    let eps_prime = epsilon * qu(t);
    let d_half = d / Q::from_integer(2);
    let clusters: Vec<Vec<usize>> = l_clusters.iter().chain(&s_clusters).cloned().collect();
    let ml = l_clusters.len();
    for i in 0..ml {
        for j in i + 1..clusters.len() {
            let pair = Pair::new(&host, clusters[i].clone(), clusters[j].clone()).expect("disjoint clusters");
            let dens = pair.density();
            if dens.is_zero() {
                continue;
            }
            let size = clusters[i].len().min(clusters[j].len());
            let mth = if size <= opts.exhaustive_up_to {
                Method::Exhaustive
            } else {
                Method::Sampled { seed: opts.seed ^ (i * 104_729 + j) as u64, trials: opts.trials }
            };
            let bad = dens < d_half || !is_regular(&pair, &eps_prime, mth).expect("valid ε").regular;
            if bad {
                let yset = host.set_of(&clusters[j]);
                for &u in &clusters[i] {
                    let nb: Vec<usize> = host.row(u).intersection(&yset).collect();
                    for v in nb {
                        host.remove_edge(u, v);
                        report.cluster_cleanup += 1;
                    }
                }
            }
        }
    }
    if ml == 0 {
        return Err(ClusterError::PartitionFailure("no part reaches the L-set degree threshold".into()));
    }
    let eta_out = eta * q / Q::from_integer(100);
    let ms = s_clusters.len();
    let ml_inequality = qu(ml) >= (Q::one() + eta_out) * qu(ml + ms) / Q::from_integer(2);
    let garbage_list: Vec<usize> = (0..n).filter(|&v| garbage[v]).collect();
    let lks = SkewLksGraph {
        host,
        l_clusters,
        s_clusters,
        garbage: garbage_list.clone(),
        params: LksParams {
            k,
            eta: eta_out,
            epsilon: eps_prime,
            d: d_half,
            r: r_prime,
        },
    };
    let rep = BuildReport {
        r_prime,
        s,
        t,
        n_prime,
        parts: np,
        part_size: m,
        l_sets: is_l.iter().filter(|&&l| l).count(),
        s_sets: is_l.iter().filter(|&&l| !l).count(),
        rounds,
        converged,
        irregular_left: irregular.len(),
        garbage: garbage_list.len(),
        erasures: report,
        ml_inequality,
    };
    Ok((lks, rep))
}

fn isolate(host: &mut Graph, garbage: &[bool]) -> usize {
    let mut count = 0;
    for v in (0..host.n()).filter(|&v| garbage[v]) {
        for u in host.neighbors(v).to_vec() {
            host.remove_edge(u, v);
            count += 1;
        }
    }
    count
}

/// Connected component and degree bucket of width `⌈εn⌉`.
fn initial_keys(host: &Graph, garbage: &[bool], epsilon: &Q) -> Vec<Vec<u64>> {
    let n = host.n();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if garbage[s] || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in host.neighbors(v) {
                if comp[u] == usize::MAX && !garbage[u] {
                    comp[u] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    let width = lks_core::rational::ceil_usize(&(epsilon * qu(n))).max(1);
    (0..n)
        .map(|v| vec![comp[v] as u64, (host.degree(v) / width) as u64])
        .collect()
}

/// Replaces keys by their rank among distinct keys.
fn canonical(key: &mut [Vec<u64>], garbage: &[bool]) -> usize {
    let mut distinct: Vec<Vec<u64>> = key
        .iter()
        .enumerate()
        .filter(|(v, _)| !garbage[*v])
        .map(|(_, k)| k.clone())
        .collect();
    distinct.sort();
    distinct.dedup();
    for (v, k) in key.iter_mut().enumerate() {
        if !garbage[v] {
            let id = distinct.binary_search(k).expect("present") as u64;
            *k = vec![id];
        }
    }
    distinct.len()
}

/// Colour refinement by density profiles rounded to a `⌈1/ε⌉` grid.
fn refine(host: &Graph, garbage: &[bool], key: &mut [Vec<u64>], epsilon: &Q) {
    let buckets = lks_core::rational::ceil_usize(&(Q::one() / epsilon)).max(1);
    let mut count = canonical(key, garbage);
    for _ in 0..20 {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); count];
        for v in (0..host.n()).filter(|&v| !garbage[v]) {
            groups[key[v][0] as usize].push(v);
        }
        let sets: Vec<FixedBitSet> = groups.iter().map(|g| host.set_of(g)).collect();
        for v in (0..host.n()).filter(|&v| !garbage[v]) {
            let mut sig = key[v].clone();
            for (g, set) in groups.iter().zip(&sets) {
                sig.push((host.deg_into(v, set) * buckets / g.len()) as u64);
            }
            key[v] = sig;
        }
        let c = canonical(key, garbage);
        if c == count {
            break;
        }
        count = c;
    }
}

/// Parts of size `m` cut from each group in id order; returns leftovers too.
fn chunk(key: &[Vec<u64>], garbage: &[bool], m: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut groups: BTreeMap<&Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (v, k) in key.iter().enumerate() {
        if !garbage[v] {
            groups.entry(k).or_default().push(v);
        }
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups.sort_by_key(|g| g[0]);
    let mut parts = Vec::new();
    let mut left = Vec::new();
    for g in groups {
        let full = g.len() / m * m;
        for c in g[..full].chunks(m) {
            parts.push(c.to_vec());
        }
        left.extend_from_slice(&g[full..]);
    }
    (parts, left)
}
