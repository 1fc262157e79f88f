//! Rooted trees with their proper 2-colouring.
//!
//! Colour `1` is always the smaller class; on a tie it is the class of the
//! root. The conjecture-style bound `|V₁| ≤ r(k+1)` and the theorem-style
//! bound `|T₁| ≤ rk` are both exposed, see [`RootedTree::fits_conjecture`] and
//! [`RootedTree::fits_theorem`].

use crate::graph::Graph;
use crate::rational::{qu, Q};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree must have at least one vertex")]
    Empty,
    #[error("parent array has length {got}, expected {n}")]
    Length { n: usize, got: usize },
    #[error("root {0} out of range or has a parent")]
    BadRoot(usize),
    #[error("vertex {0} has no parent but is not the root")]
    Orphan(usize),
    #[error("parent of {v} is {p}, out of range")]
    ParentOutOfRange { v: usize, p: usize },
    #[error("parent structure is not a tree rooted at {0}")]
    NotATree(usize),
    #[error("colouring is not proper at edge {0}-{1}")]
    ImproperColouring(usize, usize),
    #[error("colour values must be 1 or 2")]
    BadColourValue,
    #[error("edge list does not form a tree on {0} vertices")]
    NotSpanningTree(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    n: usize,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    colour: Vec<u8>,
    depth: Vec<usize>,
}

/// JSON shape: `{"n":8,"root":0,"parent":[null,0,...],"colour":[1,2,...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeFile {
    pub n: usize,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    #[serde(default)]
    pub colour: Option<Vec<u8>>,
}

impl RootedTree {
    /// Builds a tree from a parent array; `parent[root]` must be `None`.
    pub fn from_parent(root: usize, parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if root >= n || parent[root].is_some() {
            return Err(TreeError::BadRoot(root));
        }
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None if v != root => return Err(TreeError::Orphan(v)),
                None => {}
                Some(p) if p >= n => return Err(TreeError::ParentOutOfRange { v, p }),
                Some(p) => children[p].push(v),
            }
        }
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut seen = 1;
        while let Some(u) = queue.pop_front() {
            for &c in &children[u] {
                if depth[c] != usize::MAX {
                    return Err(TreeError::NotATree(root));
                }
                depth[c] = depth[u] + 1;
                seen += 1;
                queue.push_back(c);
            }
        }
        if seen != n {
            return Err(TreeError::NotATree(root));
        }
        let even = depth.iter().filter(|&&d| d % 2 == 0).count();
        let root_class_small = even <= n - even;
        let colour = depth
            .iter()
            .map(|&d| if (d % 2 == 0) == root_class_small { 1 } else { 2 })
            .collect();
        Ok(RootedTree {
            n,
            root,
            parent,
            children,
            colour,
            depth,
        })
    }

    /// Builds a tree from `n - 1` edges, rooted at `root`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if edges.len() + 1 != n || root >= n {
            return Err(TreeError::NotSpanningTree(n));
        }
        let g = Graph::from_edges(n, edges).map_err(|_| TreeError::NotSpanningTree(n))?;
        if g.m() != edges.len() {
            return Err(TreeError::NotSpanningTree(n));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(TreeError::NotSpanningTree(n));
        }
        RootedTree::from_parent(root, parent)
    }

    /// Validates a [`TreeFile`]; a supplied colouring must be proper (either labelling).
    pub fn from_file(f: &TreeFile) -> Result<Self, TreeError> {
        if f.parent.len() != f.n {
            return Err(TreeError::Length {
                n: f.n,
                got: f.parent.len(),
            });
        }
        let t = RootedTree::from_parent(f.root, f.parent.clone())?;
        if let Some(col) = &f.colour {
            if col.len() != f.n {
                return Err(TreeError::Length {
                    n: f.n,
                    got: col.len(),
                });
            }
            if col.iter().any(|&c| c != 1 && c != 2) {
                return Err(TreeError::BadColourValue);
            }
            for v in 0..f.n {
                if let Some(p) = f.parent[v] {
                    if col[v] == col[p] {
                        return Err(TreeError::ImproperColouring(p, v));
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn to_file(&self) -> TreeFile {
        TreeFile {
            n: self.n,
            root: self.root,
            parent: self.parent.clone(),
            colour: Some(self.colour.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("tree serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let f: TreeFile = serde_json::from_str(s).map_err(|e| e.to_string())?;
        RootedTree::from_file(&f).map_err(|e| e.to_string())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn k(&self) -> usize {
        self.n - 1
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Colour class of `v`, `1` (smaller) or `2`.
    pub fn colour(&self, v: usize) -> u8 {
        self.colour[v]
    }

    pub fn colours(&self) -> &[u8] {
        &self.colour
    }

    /// All tree neighbours of `v` (parent first, then children).
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.children[v].len() + 1);
        if let Some(p) = self.parent[v] {
            out.push(p);
        }
        out.extend_from_slice(&self.children[v]);
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) <= 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .filter_map(|v| self.parent[v].map(|p| (p, v)))
            .collect()
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges()).expect("tree edges are valid")
    }

    /// `(|class 1|, |class 2|)`.
    pub fn class_sizes(&self) -> (usize, usize) {
        let c1 = self.colour.iter().filter(|&&c| c == 1).count();
        (c1, self.n - c1)
    }

    pub fn smaller_class_size(&self) -> usize {
        self.class_sizes().0
    }

    pub fn class(&self, c: u8) -> Vec<usize> {
        (0..self.n).filter(|&v| self.colour[v] == c).collect()
    }

    /// Smaller class over total vertex count.
    pub fn skew(&self) -> Q {
        Q::new(self.smaller_class_size() as i128, self.n as i128)
    }

    /// `|V₁| ≤ r·(k+1)`.
    pub fn fits_conjecture(&self, r: &Q) -> bool {
        qu(self.smaller_class_size()) <= r * qu(self.n)
    }

    /// `|T₁| ≤ r·k`.
    pub fn fits_theorem(&self, r: &Q) -> bool {
        qu(self.smaller_class_size()) <= r * qu(self.k())
    }

    /// Vertices in BFS order from the root, children in stored order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::from([self.root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            queue.extend(self.children[u].iter().copied());
        }
        order
    }

    /// Tree distance via depth-guided lowest common ancestor.
    pub fn distance(&self, mut u: usize, mut v: usize) -> usize {
        let mut d = 0;
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].expect("non-root");
            d += 1;
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].expect("non-root");
            d += 1;
        }
        while u != v {
            u = self.parent[u].expect("non-root");
            v = self.parent[v].expect("non-root");
            d += 2;
        }
        d
    }

    /// Path from `u` to `v` inclusive.
    pub fn path_between(&self, u: usize, v: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, v);
        let mut left = vec![a];
        let mut right = vec![b];
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root");
            left.push(a);
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root");
            right.push(b);
        }
        while a != b {
            a = self.parent[a].expect("non-root");
            b = self.parent[b].expect("non-root");
            left.push(a);
            right.push(b);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    }

    /// Size of the subtree hanging from each vertex.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1usize; self.n];
        for &v in self.bfs_order().iter().rev() {
            if let Some(p) = self.parent[v] {
                size[p] += size[v];
            }
        }
        size
    }

    /// Re-roots the same tree at `root`.
    pub fn rerooted(&self, root: usize) -> RootedTree {
        RootedTree::from_edges(self.n, &self.edges(), root).expect("same tree")
    }

    pub fn path(n: usize) -> RootedTree {
        let parent = (0..n).map(|v| v.checked_sub(1)).collect();
        RootedTree::from_parent(0, parent).expect("path")
    }

    /// `K_{1,n-1}` rooted at its centre `0`.
    pub fn star(n: usize) -> RootedTree {
        let parent = (0..n).map(|v| if v == 0 { None } else { Some(0) }).collect();
        RootedTree::from_parent(0, parent).expect("star")
    }

    /// Bistar: adjacent centres `0` and `1` with `a` and `b` leaves.
    pub fn bistar(a: usize, b: usize) -> RootedTree {
        let mut parent = vec![None, Some(0)];
        parent.extend(std::iter::repeat_n(Some(0), a));
        parent.extend(std::iter::repeat_n(Some(1), b));
        RootedTree::from_parent(0, parent).expect("bistar")
    }
}
