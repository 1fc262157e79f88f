//! Exhaustive subtree search.
//!
//! Two searches that share no code: [`brute_force_embed`] walks the tree in
//! BFS order from its root and prunes on degrees and reachable room;
//! [`plain_embed`] walks a DFS order from the highest-numbered vertex, tries
//! host vertices from the top down and prunes nothing.

use lks_core::{EmbeddingCertificate, FixedBitSet, Graph, RootedTree};
use std::collections::VecDeque;

/// The search visited more than its node cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("search budget of {budget} nodes exceeded")]
pub struct BudgetExceeded {
    pub budget: u64,
}

/// Node cap large enough for every host the acceptance runs use.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

struct Search<'a> {
    host: &'a Graph,
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    tdeg: Vec<usize>,
    kids: Vec<usize>,
    sub: Vec<usize>,
    map: Vec<usize>,
    used: FixedBitSet,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Free vertices reachable from `h` through free vertices, `h` included,
    /// stopping early once `need` are found.
    fn room(&self, h: usize, need: usize) -> usize {
        if need <= 1 {
            return 1;
        }
        let n = self.host.n();
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(h);
        let mut queue = VecDeque::from([h]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.host.neighbors(u) {
                if !self.used.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    count += 1;
                    if count >= need {
                        return count;
                    }
                    queue.push_back(w);
                }
            }
        }
        count
    }

    fn fits(&self, v: usize, h: usize) -> bool {
        if self.used.contains(h) || self.host.degree(h) < self.tdeg[v] {
            return false;
        }
        let free = self.host.neighbors(h).iter().filter(|&&w| !self.used.contains(w)).count();
        free >= self.kids[v] && self.room(h, self.sub[v]) >= self.sub[v]
    }

    fn go(&mut self, i: usize) -> Result<bool, BudgetExceeded> {
        if i == self.order.len() {
            return Ok(true);
        }
        let v = self.order[i];
        let cands: Vec<usize> = match self.parent[v] {
            None => (0..self.host.n()).collect(),
            Some(p) => self.host.neighbors(self.map[p]).to_vec(),
        };
        for h in cands {
            if !self.fits(v, h) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(BudgetExceeded { budget: self.budget });
            }
            self.map[v] = h;
            self.used.insert(h);
            if self.go(i + 1)? {
                return Ok(true);
            }
            self.used.set(h, false);
        }
        Ok(false)
    }
}

/// Finds an embedding of `tree` in `host` if one exists.
///
/// Complete within `budget` search nodes; `Ok(None)` means no embedding.
pub fn brute_force_embed(tree: &RootedTree, host: &Graph, budget: u64) -> Result<Option<EmbeddingCertificate>, BudgetExceeded> {
    let n = tree.n();
    if n > host.n() {
        return Ok(None);
    }
    let order = tree.bfs_order();
    let kids = (0..n).map(|v| tree.children(v).len()).collect();
    let sub = tree.subtree_sizes();
    let mut s = Search {
        host,
        parent: (0..n).map(|v| tree.parent(v)).collect(),
        tdeg: (0..n).map(|v| tree.degree(v)).collect(),
        kids,
        sub,
        order,
        map: vec![usize::MAX; n],
        used: FixedBitSet::with_capacity(host.n()),
        nodes: 0,
        budget,
    };
    if s.go(0)? {
        Ok(Some(EmbeddingCertificate::new(s.map, "brute-force")))
    } else {
        Ok(None)
    }
}

/// Second, independently written search: DFS order from the top vertex,
/// candidates scanned downward, every mapped tree neighbour checked, no pruning.
pub fn plain_embed(tree: &RootedTree, host: &Graph, budget: u64) -> Result<Option<Vec<usize>>, BudgetExceeded> {
    let t = tree.to_graph();
    let tn = t.n();
    if tn > host.n() {
        return Ok(None);
    }
    if tn == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut order = Vec::with_capacity(tn);
    let mut seen = vec![false; tn];
    let mut stack = vec![tn - 1];
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        order.push(v);
        for &w in t.neighbors(v) {
            if !seen[w] {
                stack.push(w);
            }
        }
    }
    let mut p = Plain {
        t: &t,
        host,
        order: &order,
        img: vec![None; tn],
        taken: vec![false; host.n()],
        nodes: 0,
        budget,
    };
    if p.rec(0)? {
        Ok(Some(p.img.into_iter().map(|x| x.expect("all mapped")).collect()))
    } else {
        Ok(None)
    }
}

struct Plain<'a> {
    t: &'a Graph,
    host: &'a Graph,
    order: &'a [usize],
    img: Vec<Option<usize>>,
    taken: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Plain<'_> {
    fn rec(&mut self, d: usize) -> Result<bool, BudgetExceeded> {
        if d == self.order.len() {
            return Ok(true);
        }
        let v = self.order[d];
        for h in (0..self.host.n()).rev() {
            if self.taken[h] {
                continue;
            }
            let ok = self.t.neighbors(v).iter().all(|&w| match self.img[w] {
                Some(x) => self.host.has_edge(h, x),
                None => true,
            });
            if !ok {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(BudgetExceeded { budget: self.budget });
            }
            self.img[v] = Some(h);
            self.taken[h] = true;
            if self.rec(d + 1)? {
                return Ok(true);
            }
            self.img[v] = None;
            self.taken[h] = false;
        }
        Ok(false)
    }
}
