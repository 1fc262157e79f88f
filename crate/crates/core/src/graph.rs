//! Undirected simple graphs with sorted adjacency lists and bitset rows.

use fixedbitset::FixedBitSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph on vertices `0..n`.
///
/// Adjacency is kept both as sorted neighbour lists (iteration) and as one
/// bitset row per vertex (membership and set-degree counts).
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    rows: Vec<FixedBitSet>,
    m: usize,
    labels: Option<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj && self.labels == other.labels
    }
}
impl Eq for Graph {}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            rows: vec![FixedBitSet::with_capacity(n); n],
            m: 0,
            labels: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `uv`; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { v: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.rows[u].contains(v) {
            return Ok(false);
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        let pu = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pu, v);
        let pv = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pv, u);
        self.m += 1;
        Ok(true)
    }

    /// Removes `uv`; returns `false` if it was absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || !self.rows[u].contains(v) {
            return false;
        }
        self.rows[u].set(v, false);
        self.rows[v].set(u, false);
        if let Ok(p) = self.adj[u].binary_search(&v) {
            self.adj[u].remove(p);
        }
        if let Ok(p) = self.adj[v].binary_search(&u) {
            self.adj[v].remove(p);
        }
        self.m -= 1;
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u].contains(v)
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbourhood of `v` as a bitset.
    pub fn row(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    /// `|N(v) ∩ set|`.
    pub fn deg_into(&self, v: usize, set: &FixedBitSet) -> usize {
        self.rows[v].intersection_count(set)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Option<Vec<usize>>) {
        if let Some(l) = &labels {
            assert_eq!(l.len(), self.n, "one label per vertex");
        }
        self.labels = labels;
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("valid");
            }
        }
        g
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v).expect("valid");
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v).expect("valid");
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0).expect("valid");
        }
        g
    }

    /// Disjoint union, `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.add_edge(u, v).expect("valid");
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n).expect("valid");
        }
        g
    }

    /// Subgraph induced on `vs`, relabelled to `0..vs.len()` in the given order.
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut g = Graph::empty(vs.len());
        for (i, &u) in vs.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j).expect("valid");
                }
            }
        }
        g
    }

    /// Bitset over `0..n` containing `vs`.
    pub fn set_of(&self, vs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        for &v in vs {
            s.insert(v);
        }
        s
    }

    /// Edge-list text: header `n m`, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}", self.n, self.m).expect("string write");
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").expect("string write");
        }
        s
    }

    /// Parses the edge-list format. Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(hl, header)?;
        let mut g = Graph::empty(n);
        let mut count = 0;
        for (ln, l) in lines {
            let (u, v) = parse_pair(ln, l)?;
            g.add_edge(u, v).map_err(|e| GraphError::Parse {
                line: ln,
                msg: e.to_string(),
            })?;
            count += 1;
        }
        if count != m {
            return Err(GraphError::Parse {
                line: hl,
                msg: format!("header declares {m} edges, found {count}"),
            });
        }
        Ok(g)
    }
}

fn parse_pair(line: usize, l: &str) -> Result<(usize, usize), GraphError> {
    let mut it = l.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        it.next()
            .ok_or_else(|| GraphError::Parse {
                line,
                msg: "expected two integers".into(),
            })?
            .parse::<usize>()
            .map_err(|e| GraphError::Parse {
                line,
                msg: e.to_string(),
            })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}
