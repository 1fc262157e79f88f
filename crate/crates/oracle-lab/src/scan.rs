//! Small-scale search for counterexamples to the median-degree tree
//! conjecture: hosts with at least `rn` vertices of degree at least `k`
//! against trees of order at most `k+1` whose smaller class is at most `r(k+1)`.

use lks_core::gen::{gnp, rng};
use lks_core::{fmt_q, q, qu, Graph, RootedTree, TreeFile, Q};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::brute::{brute_force_embed, plain_embed, DEFAULT_BUDGET};
use crate::canon::{all_graphs, all_trees, tree_diameter};
use crate::OracleError;

/// Largest host order accepted by the exhaustive mode.
pub const EXHAUSTIVE_MAX_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Random { seed: u64, trials: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub host_n: usize,
    pub host_edges: Vec<(usize, usize)>,
    pub tree: TreeFile,
}

/// Tallies restricted to one family of trees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubScan {
    pub family: String,
    pub trees: usize,
    pub pairs: u64,
    pub counterexamples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub k: usize,
    pub r: String,
    pub n: usize,
    pub mode: ScanMode,
    /// Hosts generated or sampled.
    pub hosts_tried: u64,
    /// Hosts failing the degree hypothesis.
    pub hosts_skipped: u64,
    pub hosts_checked: u64,
    pub trees: usize,
    pub pairs_checked: u64,
    /// Pairs whose search ran out of budget.
    pub inconclusive: u64,
    /// Pairs where the two searches disagreed.
    pub disagreements: u64,
    pub counterexamples: Vec<Counterexample>,
    pub subscans: Vec<SubScan>,
    pub elapsed_ms: u64,
}

/// Whether `g` has at least `r·n` vertices of degree at least `k`.
pub fn meets_hypothesis(g: &Graph, k: usize, r: &Q) -> bool {
    let heavy = (0..g.n()).filter(|&v| g.degree(v) >= k).count();
    qu(heavy) >= r * qu(g.n())
}

/// Non-isomorphic trees of order `1..=k+1` with smaller class at most `r(k+1)`.
pub fn scan_trees(k: usize, r: &Q) -> Vec<RootedTree> {
    (1..=k + 1).flat_map(all_trees).filter(|t| t.fits_conjecture(r)).collect()
}

fn is_path(t: &RootedTree) -> bool {
    (0..t.n()).all(|v| t.degree(v) <= 2)
}

type Family = (&'static str, fn(&RootedTree) -> bool);

#[derive(Default)]
struct HostTally {
    pairs: u64,
    inconclusive: u64,
    disagreements: u64,
    misses: Vec<usize>,
}

fn check_host(g: &Graph, trees: &[RootedTree]) -> HostTally {
    let mut t = HostTally::default();
    for (i, tree) in trees.iter().enumerate() {
        t.pairs += 1;
        match brute_force_embed(tree, g, DEFAULT_BUDGET) {
            Ok(Some(_)) => {}
            Ok(None) => match plain_embed(tree, g, DEFAULT_BUDGET) {
                Ok(None) => t.misses.push(i),
                Ok(Some(_)) => t.disagreements += 1,
                Err(_) => t.inconclusive += 1,
            },
            Err(_) => t.inconclusive += 1,
        }
    }
    t
}

/// Random host for trial `i`: half the trials are `G(n, p)` with `p` drawn
/// from `{1/20, …, 19/20}`; the rest plant `⌈rn⌉` vertices of degree at
/// least `k` over a sparse `G(n, p)`.
pub fn sample_host(n: usize, k: usize, r: &Q, seed: u64, i: u64) -> Graph {
    let mut rg = rng(seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let p = q(rg.gen_range(1..20), 20);
    if i.is_multiple_of(2) {
        return gnp(n, &p, &mut rg);
    }
    let mut g = gnp(n, &(p / 4), &mut rg);
    let heavy = lks_core::rational::ceil_usize(&(r * qu(n))).min(n);
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(&mut rg);
    for &h in &vs[..heavy] {
        let mut others: Vec<usize> = (0..n).filter(|&w| w != h).collect();
        others.shuffle(&mut rg);
        for &w in others.iter().take(k) {
            g.add_edge(h, w).expect("valid");
        }
    }
    g
}

/// Runs the scan. Hosts are processed in parallel; results are merged in
/// host order, so reports depend only on the parameters.
pub fn conjecture_scan(k: usize, r: &Q, n: usize, mode: &ScanMode) -> Result<ScanReport, OracleError> {
    let start = Instant::now();
    if *r <= q(0, 1) || *r > q(1, 1) {
        return Err(OracleError::DegenerateR(fmt_q(r)));
    }
    let trees = scan_trees(k, r);
    let all = match mode {
        ScanMode::Exhaustive if n > EXHAUSTIVE_MAX_N => {
            return Err(OracleError::Infeasible(format!("exhaustive scan needs n <= {EXHAUSTIVE_MAX_N}, got {n}")));
        }
        ScanMode::Exhaustive => all_graphs(n),
        ScanMode::Random { .. } => Vec::new(),
    };
    let (count, seed) = match mode {
        ScanMode::Exhaustive => (all.len() as u64, 0),
        ScanMode::Random { seed, trials } => (*trials, *seed),
    };
    let host = |i: u64| match mode {
        ScanMode::Exhaustive => all[i as usize].clone(),
        ScanMode::Random { .. } => sample_host(n, k, r, seed, i),
    };
    let results: Vec<(bool, Graph, HostTally)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let g = host(i);
            if meets_hypothesis(&g, k, r) {
                let t = check_host(&g, &trees);
                (true, g, t)
            } else {
                (false, g, HostTally::default())
            }
        })
        .collect();

    let families: [Family; 2] = [("paths", is_path), ("diameter<=5", |t| tree_diameter(t) <= 5)];
    let mut subscans: Vec<SubScan> = families
        .iter()
        .map(|(name, f)| SubScan {
            family: name.to_string(),
            trees: trees.iter().filter(|t| f(t)).count(),
            ..SubScan::default()
        })
        .collect();
    let mut report = ScanReport {
        k,
        r: fmt_q(r),
        n,
        mode: mode.clone(),
        hosts_tried: count,
        hosts_skipped: 0,
        hosts_checked: 0,
        trees: trees.len(),
        pairs_checked: 0,
        inconclusive: 0,
        disagreements: 0,
        counterexamples: Vec::new(),
        subscans: Vec::new(),
        elapsed_ms: 0,
    };
    for (ok, g, t) in results {
        if !ok {
            report.hosts_skipped += 1;
            continue;
        }
        report.hosts_checked += 1;
        report.pairs_checked += t.pairs;
        report.inconclusive += t.inconclusive;
        report.disagreements += t.disagreements;
        for (s, (_, f)) in subscans.iter_mut().zip(&families) {
            s.pairs += s.trees as u64;
            s.counterexamples += t.misses.iter().filter(|&&i| f(&trees[i])).count();
        }
        for i in t.misses {
            report.counterexamples.push(Counterexample {
                host_n: g.n(),
                host_edges: g.edges().collect(),
                tree: trees[i].to_file(),
            });
        }
    }
    report.subscans = subscans;
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
