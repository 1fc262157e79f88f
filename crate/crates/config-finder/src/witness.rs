//! Configurations A–D: search and independent verification.

use crate::matching::{alternating_reachability, low_s, matching_max_cover, Matching, Reachability};
use crate::ConfigError;
use lks_cluster::ClusterGraph;
use lks_core::rational::serde_q;
use lks_core::{qu, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    #[serde(with = "serde_q")]
    pub r_tilde: Q,
}

impl TreeStats {
    /// Problems with `a₂ + b₁ = r̃k` and `0 ≤ r̃ ≤ r′ ≤ 1/2`.
    pub fn violations(&self, k: usize, r_prime: &Q) -> Vec<String> {
        let mut out = Vec::new();
        if qu(self.a2 + self.b1) != self.r_tilde * qu(k) {
            out.push(format!("a2 + b1 = {} ≠ r̃k = {}", self.a2 + self.b1, self.r_tilde * qu(k)));
        }
        if self.r_tilde < Q::zero() || self.r_tilde > *r_prime {
            out.push(format!("r̃ = {} not in [0, r′ = {r_prime}]", self.r_tilde));
        }
        if *r_prime > Q::new(1, 2) || *r_prime <= Q::zero() {
            out.push(format!("r′ = {r_prime} not in (0, 1/2]"));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Config {
    A,
    B,
    C,
    D,
}

impl Config {
    pub const ALL: [Config; 4] = [Config::A, Config::B, Config::C, Config::D];
}

/// `lhs ≥ rhs`, or `lhs > rhs` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    #[serde(with = "serde_q")]
    pub lhs: Q,
    #[serde(with = "serde_q")]
    pub rhs: Q,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub strict: bool,
}

impl Inequality {
    fn new(name: &str, lhs: Q, rhs: Q) -> Self {
        Inequality { name: name.into(), lhs, rhs, strict: false }
    }

    pub fn holds(&self) -> bool {
        if self.strict {
            self.lhs > self.rhs
        } else {
            self.lhs >= self.rhs
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessMeta {
    /// How `M` was chosen.
    pub matching: String,
    /// Unmatched S-clusters with `(r̃+r′η/2)k ≤ deḡ < (r̃+r′η)k`: in neither `S₀` nor `S₁`.
    pub band: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigWitness {
    pub config: Config,
    #[serde(rename = "X")]
    pub x: usize,
    #[serde(rename = "Y")]
    pub y: usize,
    #[serde(rename = "M")]
    pub m: Matching,
    #[serde(rename = "S_M")]
    pub s_m: Vec<usize>,
    #[serde(rename = "S_1")]
    pub s_1: Vec<usize>,
    #[serde(rename = "S_0")]
    pub s_0: Vec<usize>,
    pub inequalities: Vec<Inequality>,
    pub meta: WitnessMeta,
}

impl ConfigWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }
}

/// Everything the search derived, kept for failure reports and tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofSets {
    pub m: Matching,
    pub s_m: Vec<usize>,
    pub s_0: Vec<usize>,
    pub s_1: Vec<usize>,
    pub band: Vec<usize>,
    pub reach: Reachability,
    pub l_star: Vec<usize>,
    pub l_plus: Vec<usize>,
    pub n_set: Vec<usize>,
    #[serde(with = "serde_q")]
    pub s0_threshold: Q,
    #[serde(with = "serde_q")]
    pub s1_threshold: Q,
}

impl ProofSets {
    /// `𝓛*_A`.
    pub fn l_a_star(&self) -> Vec<usize> {
        self.l_star.iter().copied().filter(|x| self.reach.l_a.contains(x)).collect()
    }

    /// `𝓛⁺_A`.
    pub fn l_a_plus(&self) -> Vec<usize> {
        self.l_plus.iter().copied().filter(|x| self.reach.l_a.contains(x)).collect()
    }
}

/// Builds `M`, `S_M`, `S₀`, `S₁`, the band, 𝓐/𝓑, `𝓛*`, `𝓛⁺` and `𝓝`.
pub fn proof_sets(cg: &ClusterGraph, stats: &TreeStats, eta: &Q) -> ProofSets {
    let k = qu(cg.params.k);
    let rp = cg.params.r;
    let s0_threshold = (stats.r_tilde + rp * eta / Q::from_integer(2)) * k;
    let s1_threshold = (stats.r_tilde + rp * eta) * k;
    let m = matching_max_cover(cg, &s0_threshold);
    let mut s_m: Vec<usize> = m.iter().map(|&(_, s)| s).collect();
    s_m.sort_unstable();
    let s_0: Vec<usize> = low_s(cg, &s0_threshold).into_iter().filter(|s| !s_m.contains(s)).collect();
    let unmatched: Vec<usize> = cg.s_ids().into_iter().filter(|s| !s_m.contains(s)).collect();
    let s_1: Vec<usize> = unmatched.iter().copied().filter(|&s| cg.degbar_total(s) >= s1_threshold).collect();
    let band: Vec<usize> = unmatched
        .iter()
        .copied()
        .filter(|&s| cg.degbar_total(s) >= s0_threshold && cg.degbar_total(s) < s1_threshold)
        .collect();
    let reach = alternating_reachability(cg, &m, &s_0);
    let l = cg.l_ids();
    let sm1: Vec<usize> = s_m.iter().chain(&s_1).copied().collect();
    let l_star: Vec<usize> = l.iter().copied().filter(|&x| cg.degbar_to(x, &l) >= s0_threshold).collect();
    let plus_bound = (Q::one() - stats.r_tilde + eta / Q::from_integer(2)) * k;
    let l_plus: Vec<usize> = l
        .iter()
        .copied()
        .filter(|x| !l_star.contains(x) && cg.degbar_to(*x, &sm1) >= plus_bound)
        .collect();
    let l_a_star: Vec<usize> = l_star.iter().copied().filter(|x| reach.l_a.contains(x)).collect();
    let n_set: Vec<usize> = l
        .iter()
        .copied()
        .filter(|&y| l_a_star.iter().any(|&x| cg.adjacent(x, y)))
        .collect();
    ProofSets { m, s_m, s_0, s_1, band, reach, l_star, l_plus, n_set, s0_threshold, s1_threshold }
}

/// The exchange-argument facts every optimal `M` must satisfy: S_B clusters
/// are below the `S₀` threshold and no edge joins `𝓛_A` to `S₀ ∪ S_B`.
pub fn basic_props_violations(cg: &ClusterGraph, ps: &ProofSets) -> Vec<String> {
    let mut out = Vec::new();
    for &x in &ps.reach.s_b {
        if cg.degbar_total(x) >= ps.s0_threshold {
            out.push(format!("S_B cluster {x} has deḡ {} ≥ {}", cg.degbar_total(x), ps.s0_threshold));
        }
    }
    for &x in &ps.reach.l_a {
        for &y in ps.s_0.iter().chain(&ps.reach.s_b) {
            if cg.adjacent(x, y) {
                out.push(format!("edge between L_A cluster {x} and {y}"));
            }
        }
    }
    out
}

/// Sets the inequalities of a configuration are evaluated on.
struct Frame<'a> {
    cg: &'a ClusterGraph,
    stats: &'a TreeStats,
    eta: Q,
    k: Q,
    rp: Q,
    l: Vec<usize>,
    sm1: Vec<usize>,
    sm1l: Vec<usize>,
    sml: Vec<usize>,
    m: &'a [(usize, usize)],
}

impl<'a> Frame<'a> {
    fn new(cg: &'a ClusterGraph, stats: &'a TreeStats, eta: &Q, m: &'a [(usize, usize)], s_m: &[usize], s_1: &[usize]) -> Self {
        let l = cg.l_ids();
        let sm1: Vec<usize> = s_m.iter().chain(s_1).copied().collect();
        let sm1l = sm1.iter().chain(&l).copied().collect();
        let sml = s_m.iter().chain(&l).copied().collect();
        Frame { cg, stats, eta: *eta, k: qu(cg.params.k), rp: cg.params.r, l, sm1, sm1l, sml, m }
    }

    /// Inequalities of `config` for the ordered pair `(x, y)`.
    fn inequalities(&self, config: Config, x: usize, y: usize) -> Vec<Inequality> {
        let (cg, st, k, eta, rp) = (self.cg, self.stats, self.k, self.eta, self.rp);
        let rt = st.r_tilde;
        let four = Q::from_integer(4);
        let (a1, a2, b1) = (qu(st.a1), qu(st.a2), qu(st.b1));
        let deg_y_l = cg.degbar_to(y, &self.l);
        match config {
            Config::A => {
                let base = if a2.is_zero() { Q::zero() } else { a2 * (Q::one() - rt) / rt };
                vec![
                    Inequality::new("A.degX", cg.degbar_to(x, &self.sm1), base + eta * k / four),
                    Inequality::new("A.degY", deg_y_l, rt * k + eta * k / four),
                ]
            }
            Config::B => vec![
                Inequality { strict: true, ..Inequality::new("B.side", rt * a1, (Q::one() - rt) * a2) },
                Inequality::new("B.degX", cg.degbar_to(x, &self.sm1l), k + eta * k / four),
                Inequality::new("B.degY", deg_y_l, rt * k + eta * rp * k / four),
            ],
            Config::C => vec![
                Inequality::new("C.side", (Q::one() - rt) * a2, rt * a1),
                Inequality::new("C.degX", cg.degbar_to(x, &self.sm1l), k + eta * k / four),
                Inequality::new("C.degY", deg_y_l, b1 + eta * rp * k / four),
            ],
            Config::D => {
                let inside = self
                    .m
                    .iter()
                    .filter(|&&(l, s)| cg.adjacent(x, l) && cg.adjacent(x, s))
                    .count();
                vec![
                    Inequality::new("D.side", rt * a1, (Q::one() - rt) * a2),
                    Inequality::new("D.b1", rt * rt * k / (Q::one() - rt), b1),
                    Inequality::new("D.degX", cg.degbar_to(x, &self.sml), k + eta * k / four),
                    Inequality::new("D.degY", deg_y_l, b1 + eta * k / four),
                    Inequality::new("D.matchingEdgesInNX", Q::zero(), qu(inside)),
                ]
            }
        }
    }
}

fn check_lks(cg: &ClusterGraph, eta: &Q) -> Result<(), ConfigError> {
    let k = qu(cg.params.k);
    let (l, s) = (cg.l_ids(), cg.s_ids());
    if qu(l.len()) < (Q::one() + eta) * qu(s.len()) {
        return Err(ConfigError::NotLks(format!("m_L = {} < (1+η)·m_S = {}", l.len(), (Q::one() + eta) * qu(s.len()))));
    }
    for &x in &l {
        if cg.degbar_total(x) < (Q::one() + eta) * k {
            return Err(ConfigError::NotLks(format!("L-cluster {x} has deḡ {} < (1+η)k", cg.degbar_total(x))));
        }
    }
    let r = cg.params.r;
    for &x in &l {
        for &y in &s {
            if r * qu(cg.size(y)) != (Q::one() - r) * qu(cg.size(x)) {
                return Err(ConfigError::NotLks(format!("sizes of clusters {x} and {y} break r|S| = (1−r)|L|")));
            }
        }
    }
    Ok(())
}

/// Scans ordered adjacent pairs in lexicographic order, trying A, then B, C, D.
pub fn find_configuration(cg: &ClusterGraph, stats: &TreeStats, eta: &Q) -> Result<ConfigWitness, ConfigError> {
    let bad = stats.violations(cg.params.k, &cg.params.r);
    if !bad.is_empty() {
        return Err(ConfigError::InvalidStats(bad.join("; ")));
    }
    if *eta <= Q::zero() {
        return Err(ConfigError::InvalidStats("η must be positive".into()));
    }
    check_lks(cg, eta)?;
    let ps = proof_sets(cg, stats, eta);
    let broken = basic_props_violations(cg, &ps);
    assert!(broken.is_empty(), "matching is not optimal: {broken:?}");
    let frame = Frame::new(cg, stats, eta, &ps.m, &ps.s_m, &ps.s_1);
    let pairs: Vec<(usize, usize)> = (0..cg.len())
        .flat_map(|x| cg.neighbors(x).iter().map(move |&y| (x, y)))
        .collect();
    for config in Config::ALL {
        for &(x, y) in &pairs {
            let ineq = frame.inequalities(config, x, y);
            if ineq.iter().all(Inequality::holds) {
                return Ok(ConfigWitness {
                    config,
                    x,
                    y,
                    m: ps.m.clone(),
                    s_m: ps.s_m.clone(),
                    s_1: ps.s_1.clone(),
                    s_0: ps.s_0.clone(),
                    inequalities: ineq,
                    meta: WitnessMeta {
                        matching: "max-cover of S_0, then max size, then lexicographically least".into(),
                        band: ps.band.clone(),
                    },
                });
            }
        }
    }
    Err(ConfigError::CounterexampleCandidate(Box::new(ps)))
}

/// Inequalities of `config` at the ordered pair `(x, y)` for the sets in `ps`.
pub fn inequalities_at(
    cg: &ClusterGraph,
    stats: &TreeStats,
    eta: &Q,
    ps: &ProofSets,
    config: Config,
    x: usize,
    y: usize,
) -> Vec<Inequality> {
    Frame::new(cg, stats, eta, &ps.m, &ps.s_m, &ps.s_1).inequalities(config, x, y)
}

/// Recomputes the configuration from the cluster graph and the witness's `M`.
///
/// Checks adjacency of `X,Y`, that `M` is a matching in `𝐇[𝓛,𝒮]`, that
/// `S_M` and `S₁` are the sets `M` induces, and every inequality of the
/// claimed configuration, including the listed values.
pub fn verify_witness(cg: &ClusterGraph, stats: &TreeStats, w: &ConfigWitness, eta: &Q) -> bool {
    let n = cg.len();
    if w.x >= n || w.y >= n || !cg.adjacent(w.x, w.y) {
        return false;
    }
    if !stats.violations(cg.params.k, &cg.params.r).is_empty() || *eta <= Q::zero() {
        return false;
    }
    let mut used = vec![false; n];
    for &(l, s) in &w.m {
        if l >= n || s >= n || !cg.is_l(l) || cg.is_l(s) || !cg.adjacent(l, s) || used[l] || used[s] {
            return false;
        }
        used[l] = true;
        used[s] = true;
    }
    let mut s_m: Vec<usize> = w.m.iter().map(|&(_, s)| s).collect();
    s_m.sort_unstable();
    let k = qu(cg.params.k);
    let s1_threshold = (stats.r_tilde + cg.params.r * eta) * k;
    let s_1: Vec<usize> = cg
        .s_ids()
        .into_iter()
        .filter(|s| !used[*s] && cg.degbar_total(*s) >= s1_threshold)
        .collect();
    if s_m != w.s_m || s_1 != w.s_1 {
        return false;
    }
    let frame = Frame::new(cg, stats, eta, &w.m, &s_m, &s_1);
    let ineq = frame.inequalities(w.config, w.x, w.y);
    ineq.iter().all(Inequality::holds) && ineq == w.inequalities
}

/// A witness for `config` at `(x, y)` over a given matching `m`, with `S_M`,
/// `S₁`, `S₀` and the inequalities computed as [`verify_witness`] expects.
///
/// The result may fail verification; nothing is checked here.
pub fn build_witness(
    cg: &ClusterGraph,
    stats: &TreeStats,
    eta: &Q,
    config: Config,
    x: usize,
    y: usize,
    m: Matching,
) -> ConfigWitness {
    let k = qu(cg.params.k);
    let mut s_m: Vec<usize> = m.iter().map(|&(_, s)| s).collect();
    s_m.sort_unstable();
    let s0_threshold = (stats.r_tilde + cg.params.r * eta / Q::from_integer(2)) * k;
    let s1_threshold = (stats.r_tilde + cg.params.r * eta) * k;
    let unmatched: Vec<usize> = cg.s_ids().into_iter().filter(|s| !s_m.contains(s)).collect();
    let s_1: Vec<usize> = unmatched.iter().copied().filter(|&s| cg.degbar_total(s) >= s1_threshold).collect();
    let s_0: Vec<usize> = unmatched.iter().copied().filter(|&s| cg.degbar_total(s) < s0_threshold).collect();
    let band = unmatched
        .iter()
        .copied()
        .filter(|&s| cg.degbar_total(s) >= s0_threshold && cg.degbar_total(s) < s1_threshold)
        .collect();
    let inequalities = Frame::new(cg, stats, eta, &m, &s_m, &s_1).inequalities(config, x, y);
    ConfigWitness {
        config,
        x,
        y,
        m,
        s_m,
        s_1,
        s_0,
        inequalities,
        meta: WitnessMeta { matching: "given".into(), band },
    }
}
