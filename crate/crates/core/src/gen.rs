//! Seeded generators for trees and random graphs.

use crate::graph::Graph;
use crate::rational::{floor_q, qu, Q};
use crate::tree::RootedTree;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Deterministic RNG for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeShape {
    Path,
    Star,
    Caterpillar,
    Random(u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("trees need at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("no {shape} on {n} vertices has smaller class at most {cap}·n")]
    UnreachableSkew { shape: String, n: usize, cap: String },
    #[error("probability {0} outside [0,1] or not representable")]
    BadProbability(String),
}

fn unreachable(shape: &str, n: usize, cap: &Q) -> GenError {
    GenError::UnreachableSkew {
        shape: shape.into(),
        n,
        cap: crate::rational::fmt_q(cap),
    }
}

/// Tree on `n` vertices of the given shape whose smaller class is at most `skew_cap·n`.
pub fn generate_tree(n: usize, shape: TreeShape, skew_cap: &Q) -> Result<RootedTree, GenError> {
    if n < 2 {
        return Err(GenError::TooSmall(n));
    }
    let budget = floor_q(&(skew_cap * qu(n))).max(0) as usize;
    match shape {
        TreeShape::Path => {
            if n / 2 > budget {
                return Err(unreachable("path", n, skew_cap));
            }
            Ok(RootedTree::path(n))
        }
        TreeShape::Star => {
            if budget < 1 {
                return Err(unreachable("star", n, skew_cap));
            }
            Ok(RootedTree::star(n))
        }
        TreeShape::Caterpillar => {
            let m = budget.min(n / 2);
            if m < 1 {
                return Err(unreachable("caterpillar", n, skew_cap));
            }
            // Spine 0..2m; leaves hang off even spine positions.
            let spine = 2 * m;
            let mut parent: Vec<Option<usize>> = (0..spine).map(|v| v.checked_sub(1)).collect();
            for i in 0..n - spine {
                parent.push(Some(2 * (i % m)));
            }
            Ok(RootedTree::from_parent(0, parent).expect("caterpillar"))
        }
        TreeShape::Random(seed) => {
            let hi = budget.min(n / 2);
            if hi < 1 {
                return Err(unreachable("random tree", n, skew_cap));
            }
            let mut r = rng(seed);
            let a = r.gen_range(1..=hi);
            Ok(random_tree_with_classes(a, n - a, &mut r))
        }
    }
}

/// Uniformly attached random tree with class sizes exactly `a` and `b` (both ≥ 1).
///
/// Vertex `0` is the root and lies in the `a`-class; every vertex attaches to a
/// random earlier vertex of the opposite class.
pub fn random_tree_with_classes<R: Rng>(a: usize, b: usize, rng: &mut R) -> RootedTree {
    assert!(a >= 1 && b >= 1);
    let mut rest: Vec<bool> = std::iter::repeat_n(true, a - 1)
        .chain(std::iter::repeat_n(false, b - 1))
        .collect();
    rest.shuffle(rng);
    let mut is_a = vec![true, false];
    is_a.extend(rest);
    let mut parent = vec![None, Some(0)];
    let mut seen_a = vec![0usize];
    let mut seen_b = vec![1usize];
    for (v, &in_a) in is_a.iter().enumerate().skip(2) {
        let pool = if in_a { &seen_b } else { &seen_a };
        let p = pool[rng.gen_range(0..pool.len())];
        parent.push(Some(p));
        if in_a {
            seen_a.push(v);
        } else {
            seen_b.push(v);
        }
    }
    RootedTree::from_parent(0, parent).expect("random tree")
}

/// Uniform random labelled tree (Prüfer sequence), rooted at 0.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> RootedTree {
    if n <= 2 {
        return RootedTree::path(n.max(1));
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    for &x in &seq {
        let leaf = *leaves.iter().next().expect("a leaf exists");
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let rem: Vec<usize> = leaves.into_iter().collect();
    edges.push((rem[0], rem[1]));
    RootedTree::from_edges(n, &edges, 0).expect("prufer tree")
}

/// Bernoulli trial with exact rational probability.
pub fn bernoulli<R: Rng>(p: &Q, rng: &mut R) -> bool {
    let (num, den) = (*p.numer(), *p.denom());
    if num <= 0 {
        return false;
    }
    if num >= den {
        return true;
    }
    (rng.gen_range(0..den as u128) as i128) < num
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp<R: Rng>(n: usize, p: &Q, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if bernoulli(p, rng) {
                g.add_edge(u, v).expect("valid");
            }
        }
    }
    g
}

/// Adds each pair in `xs × ys` independently with probability `p`.
pub fn add_random_bipartite<R: Rng>(g: &mut Graph, xs: &[usize], ys: &[usize], p: &Q, rng: &mut R) {
    for &x in xs {
        for &y in ys {
            if x != y && bernoulli(p, rng) {
                g.add_edge(x, y).expect("valid");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn fixed_shapes() {
        let p = generate_tree(8, TreeShape::Path, &q(1, 2)).unwrap();
        assert_eq!(p.class_sizes(), (4, 4));
        let s = generate_tree(8, TreeShape::Star, &q(1, 8)).unwrap();
        assert_eq!(s.class_sizes(), (1, 7));
        assert!(generate_tree(8, TreeShape::Path, &q(1, 3)).is_err());
        assert!(generate_tree(8, TreeShape::Star, &q(1, 9)).is_err());
        assert!(generate_tree(1, TreeShape::Star, &q(1, 2)).is_err());
    }

    #[test]
    fn caterpillar_meets_cap() {
        for n in 2..40 {
            for cap in [q(1, 2), q(1, 3), q(1, 5)] {
                if let Ok(t) = generate_tree(n, TreeShape::Caterpillar, &cap) {
                    assert!(qu(t.smaller_class_size()) <= cap * qu(n));
                    assert_eq!(t.n(), n);
                }
            }
        }
    }

    #[test]
    fn random_is_reproducible() {
        let a = generate_tree(30, TreeShape::Random(42), &q(1, 3)).unwrap();
        let b = generate_tree(30, TreeShape::Random(42), &q(1, 3)).unwrap();
        assert_eq!(a, b);
        assert!(a.smaller_class_size() <= 10);
    }

    #[test]
    fn prufer_tree_is_spanning() {
        let mut r = rng(3);
        for n in 1..20 {
            assert_eq!(random_tree(n, &mut r).n(), n);
        }
    }

    #[test]
    fn bernoulli_extremes() {
        let mut r = rng(0);
        assert!(!bernoulli(&q(0, 1), &mut r));
        assert!(bernoulli(&q(1, 1), &mut r));
        let hits = (0..4000).filter(|_| bernoulli(&q(1, 4), &mut r)).count();
        assert!((800..1200).contains(&hits));
    }
}
