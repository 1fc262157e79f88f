//! Canonical forms and isomorph-free enumeration of small graphs and trees.
//!
//! Graphs: iterated neighbour-count refinement, then individualization of the
//! first non-trivial cell, keeping the smallest adjacency code over all
//! discrete leaves. Twins in a cell are tried once. Trees: centre-rooted
//! parenthesis strings.

use lks_core::{Graph, RootedTree};
use std::collections::{BTreeMap, HashSet};

/// Canonical code: order plus the upper-triangle adjacency bits under the
/// canonical labelling, packed row by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonCode {
    pub n: usize,
    pub bits: Vec<u64>,
}

fn refine(g: &Graph, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = g.n();
    loop {
        let mut cell_of = vec![0; n];
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let mut next = Vec::with_capacity(cells.len());
        for c in &cells {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for &v in c {
                let mut sig = vec![0; cells.len()];
                for &w in g.neighbors(v) {
                    sig[cell_of[w]] += 1;
                }
                groups.entry(sig).or_default().push(v);
            }
            next.extend(groups.into_values());
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn code_of(g: &Graph, order: &[usize]) -> Vec<u64> {
    let n = order.len();
    let mut bits = vec![0u64; (n * n.saturating_sub(1) / 2).div_ceil(64).max(1)];
    let mut idx = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(order[i], order[j]) {
                bits[idx / 64] |= 1 << (63 - idx % 64);
            }
            idx += 1;
        }
    }
    bits
}

fn twins(g: &Graph, u: usize, v: usize) -> bool {
    let nu: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| w != v).collect();
    let nv: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| w != u).collect();
    nu == nv
}

fn search(g: &Graph, cells: Vec<Vec<usize>>, best: &mut Option<(Vec<u64>, Vec<usize>)>) {
    let cells = refine(g, cells);
    let Some(ci) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let code = code_of(g, &order);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order));
        }
        return;
    };
    let cell = &cells[ci];
    let mut tried: Vec<usize> = Vec::new();
    for &v in cell {
        if tried.iter().any(|&u| twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        let mut next = cells[..ci].to_vec();
        next.push(vec![v]);
        next.push(cell.iter().copied().filter(|&w| w != v).collect());
        next.extend(cells[ci + 1..].iter().cloned());
        search(g, next, best);
    }
}

/// Canonical code and the labelling achieving it (`order[i]` is the vertex
/// placed at position `i`).
pub fn canonical_labelling(g: &Graph) -> (CanonCode, Vec<usize>) {
    let n = g.n();
    if n == 0 {
        return (CanonCode { n, bits: vec![0] }, Vec::new());
    }
    let mut best = None;
    search(g, vec![(0..n).collect()], &mut best);
    let (bits, order) = best.expect("at least one leaf");
    (CanonCode { n, bits }, order)
}

pub fn canonical_code(g: &Graph) -> CanonCode {
    canonical_labelling(g).0
}

/// `g` relabelled canonically.
pub fn canonical_graph(g: &Graph) -> Graph {
    let (_, order) = canonical_labelling(g);
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (pos[u], pos[v])).collect();
    Graph::from_edges(g.n(), &edges).expect("relabelled")
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// built by adding a vertex in every possible way and deduplicating.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0)];
    for m in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let base: Vec<(usize, usize)> = g.edges().collect();
            for mask in 0u64..(1u64 << (m - 1)) {
                let mut edges = base.clone();
                edges.extend((0..m - 1).filter(|&i| mask >> i & 1 == 1).map(|i| (i, m - 1)));
                let h = Graph::from_edges(m, &edges).expect("valid");
                let c = canonical_graph(&h);
                if seen.insert(canonical_code(&c)) {
                    next.push(c);
                }
            }
        }
        next.sort_by_key(|g| (g.m(), canonical_code(g)));
        level = next;
    }
    level
}

/// Parenthesis string of the subtree at `v` away from `from`.
fn ahu(adj: &[Vec<usize>], v: usize, from: Option<usize>) -> String {
    let mut parts: Vec<String> = adj[v].iter().filter(|&&w| Some(w) != from).map(|&w| ahu(adj, w, Some(v))).collect();
    parts.sort();
    format!("({})", parts.concat())
}

fn centres(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                if deg[w] > 1 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            deg[v] = 0;
        }
        layer = next;
    }
    layer
}

/// Canonical string of the unrooted tree.
pub fn tree_code(t: &RootedTree) -> String {
    let adj: Vec<Vec<usize>> = (0..t.n()).map(|v| t.neighbors(v)).collect();
    centres(&adj).into_iter().map(|c| ahu(&adj, c, None)).min().unwrap_or_default()
}

/// One representative per isomorphism class of trees on `n ≥ 1` vertices.
pub fn all_trees(n: usize) -> Vec<RootedTree> {
    assert!(n >= 1, "trees have at least one vertex");
    let mut level = vec![RootedTree::path(1)];
    for m in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..t.n() {
                let mut parent = t.parents().to_vec();
                parent.push(Some(v));
                let u = RootedTree::from_parent(t.root(), parent).expect("leaf added");
                if seen.insert(tree_code(&u)) {
                    next.push(u);
                }
            }
        }
        next.sort_by_key(tree_code);
        level = next;
        debug_assert!(level.iter().all(|t| t.n() == m));
    }
    level
}

/// Diameter of a tree (edges on a longest path).
pub fn tree_diameter(t: &RootedTree) -> usize {
    let far = |s: usize| (0..t.n()).map(|v| (t.distance(s, v), v)).max().expect("non-empty");
    let (_, a) = far(t.root());
    far(a).0
}
