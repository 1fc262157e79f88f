//! Multicolour tree Ramsey checks on small complete graphs.

use lks_core::{Graph, RootedTree};
use serde::{Deserialize, Serialize};

use crate::brute::{brute_force_embed, BudgetExceeded, DEFAULT_BUDGET};
use crate::canon::tree_code;
use crate::OracleError;

/// Edge colouring of `K_n`; `colour[i]` belongs to the `i`-th pair in
/// [`pairs`] order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    pub n: usize,
    pub colour: Vec<u8>,
}

/// Pairs of `K_n` ordered by larger endpoint, then smaller:
/// `(0,1), (0,2), (1,2), (0,3), …`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect()
}

impl Colouring {
    pub fn class(&self, c: u8) -> Graph {
        let edges: Vec<(usize, usize)> = pairs(self.n).into_iter().zip(&self.colour).filter(|(_, &x)| x == c).map(|(e, _)| e).collect();
        Graph::from_edges(self.n, &edges).expect("pairs are valid")
    }

    /// Degree of `v` in colour `c`.
    pub fn degree(&self, v: usize, c: u8) -> usize {
        pairs(self.n).into_iter().zip(&self.colour).filter(|((a, b), &x)| x == c && (*a == v || *b == v)).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RamseyVerdict {
    /// Every colouring has some colour `i` containing `T_i`.
    Forced { nodes: u64 },
    /// A colouring avoiding every `T_i` in its colour.
    NotForced { witness: Colouring },
    Inconclusive { nodes: u64 },
}

/// First colour `i` whose class contains `trees[i]`, if any.
pub fn monochromatic(trees: &[RootedTree], col: &Colouring) -> Result<Option<usize>, BudgetExceeded> {
    for (i, t) in trees.iter().enumerate() {
        if brute_force_embed(t, &col.class(i as u8), DEFAULT_BUDGET)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

struct Ramsey<'a> {
    trees: &'a [RootedTree],
    n: usize,
    pairs: Vec<(usize, usize)>,
    classes: Vec<Graph>,
    colour: Vec<u8>,
    symmetric: bool,
    nodes: u64,
    budget: u64,
}

impl Ramsey<'_> {
    /// Searches for an avoiding colouring of the pairs from `i` on.
    fn go(&mut self, i: usize, used: u8) -> Result<bool, BudgetExceeded> {
        if i == self.pairs.len() {
            return Ok(true);
        }
        let (u, v) = self.pairs[i];
        let m = self.trees.len() as u8;
        let top = if self.symmetric { (used + 1).min(m) } else { m };
        for c in 0..top {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(BudgetExceeded { budget: self.budget });
            }
            let ci = c as usize;
            self.classes[ci].add_edge(u, v).expect("valid pair");
            let hit = brute_force_embed(&self.trees[ci], &self.classes[ci], DEFAULT_BUDGET)?.is_some();
            if !hit {
                self.colour[i] = c;
                if self.go(i + 1, used.max(c + 1))? {
                    return Ok(true);
                }
            }
            self.classes[ci].remove_edge(u, v);
        }
        Ok(false)
    }
}

/// Whether every colouring of `K_n` with `trees.len()` colours has a
/// colour `i` containing `trees[i]`.
///
/// Backtracks over the pairs, cutting a branch as soon as a colour class
/// contains its tree. When all trees are isomorphic, colours are introduced
/// in order of first use.
pub fn ramsey_check(trees: &[RootedTree], n: usize, budget: u64) -> Result<RamseyVerdict, OracleError> {
    if trees.is_empty() || trees.len() > u8::MAX as usize {
        return Err(OracleError::Infeasible(format!("need 1..=255 trees, got {}", trees.len())));
    }
    let codes: Vec<String> = trees.iter().map(tree_code).collect();
    let mut s = Ramsey {
        trees,
        n,
        pairs: pairs(n),
        classes: vec![Graph::empty(n); trees.len()],
        colour: vec![0; n * n.saturating_sub(1) / 2],
        symmetric: codes.iter().all(|c| *c == codes[0]),
        nodes: 0,
        budget,
    };
    match s.go(0, 0) {
        Ok(true) => Ok(RamseyVerdict::NotForced {
            witness: Colouring { n: s.n, colour: s.colour },
        }),
        Ok(false) => Ok(RamseyVerdict::Forced { nodes: s.nodes }),
        Err(_) => Ok(RamseyVerdict::Inconclusive { nodes: s.nodes }),
    }
}

/// Outcome of the pigeonhole step on one colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PigeonholeStep {
    /// For each vertex, a colour `i` in which it has at least `ks[i]` edges.
    pub rich_colour: Vec<usize>,
    /// A colour shared by at least `n/m` vertices.
    pub colour: usize,
    pub vertices: Vec<usize>,
}

/// Degree pigeonhole on `K_n` with `n ≥ Σ(k_i − 1) + 2`: every vertex has some
/// colour `i` with at least `k_i` incident edges, and some colour is rich at
/// `⌈n/m⌉` or more vertices.
pub fn pigeonhole_step(col: &Colouring, ks: &[usize]) -> Result<PigeonholeStep, OracleError> {
    let n = col.n;
    let m = ks.len();
    let need: usize = ks.iter().map(|&k| k.saturating_sub(1)).sum::<usize>() + 2;
    if m == 0 || n < need {
        return Err(OracleError::Infeasible(format!("pigeonhole needs n >= {need}, got {n}")));
    }
    let mut rich_colour = Vec::with_capacity(n);
    let mut buckets = vec![Vec::new(); m];
    for v in 0..n {
        let i = (0..m)
            .find(|&i| col.degree(v, i as u8) >= ks[i])
            .ok_or_else(|| OracleError::Infeasible(format!("vertex {v} has no rich colour")))?;
        rich_colour.push(i);
        buckets[i].push(v);
    }
    let colour = (0..m).max_by_key(|&i| (buckets[i].len(), std::cmp::Reverse(i))).expect("m > 0");
    let vertices = buckets[colour].clone();
    if vertices.len() * m < n {
        return Err(OracleError::Infeasible("pigeonhole bound violated".into()));
    }
    Ok(PigeonholeStep { rich_colour, colour, vertices })
}
