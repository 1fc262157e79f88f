//! Typical and ultratypical vertices, and the slicing check.

use crate::pair::{density_of, is_regular, Method, Pair};
use crate::RegularityError;
use lks_core::rational::{qu, sqrt_upper, Q};
use lks_core::{FixedBitSet, Graph};
use num_traits::Signed;

/// `x ∈ X` with `deg(x,Y′) ≥ (d(X,Y) − ε)|Y′|`.
pub fn typical_vertices(p: &Pair, yp: &[usize], epsilon: &Q) -> Vec<usize> {
    let threshold = (p.density() - epsilon) * qu(yp.len());
    let set = p.host().set_of(yp);
    p.x()
        .iter()
        .copied()
        .filter(|&x| qu(p.host().deg_into(x, &set)) >= threshold)
        .collect()
}

/// Ultratypicality data for a whole partition, computed once.
#[derive(Clone, Debug)]
pub struct UltratypicalIndex {
    /// `bad[v]` = number of clusters `i ≠ j(v)` for which `v` is not typical.
    bad: Vec<usize>,
    cluster_of: Vec<Option<usize>>,
    allowance: Q,
    densities: Vec<Vec<Q>>,
}

impl UltratypicalIndex {
    pub fn new(host: &Graph, clusters: &[Vec<usize>], epsilon: &Q) -> Self {
        let n_cl = clusters.len();
        let sets: Vec<FixedBitSet> = clusters.iter().map(|c| host.set_of(c)).collect();
        let mut cluster_of = vec![None; host.n()];
        for (i, c) in clusters.iter().enumerate() {
            for &v in c {
                cluster_of[v] = Some(i);
            }
        }
        let mut densities = vec![vec![Q::from_integer(0); n_cl]; n_cl];
        for i in 0..n_cl {
            for j in i + 1..n_cl {
                let d = density_of(host, &clusters[i], &clusters[j]).unwrap_or_default();
                densities[i][j] = d;
                densities[j][i] = d;
            }
        }
        let mut bad = vec![0; host.n()];
        for (j, c) in clusters.iter().enumerate() {
            for &v in c {
                bad[v] = (0..n_cl)
                    .filter(|&i| i != j && !clusters[i].is_empty())
                    .filter(|&i| {
                        let need = (densities[j][i] - epsilon) * qu(clusters[i].len());
                        qu(host.deg_into(v, &sets[i])) < need
                    })
                    .count();
            }
        }
        UltratypicalIndex {
            bad,
            cluster_of,
            allowance: sqrt_upper(epsilon) * qu(n_cl),
            densities,
        }
    }

    pub fn is_ultratypical(&self, v: usize) -> bool {
        self.cluster_of.get(v).copied().flatten().is_some() && qu(self.bad[v]) <= self.allowance
    }

    /// Number of clusters `v` fails to be typical for.
    pub fn atypical_count(&self, v: usize) -> usize {
        self.bad[v]
    }

    pub fn density(&self, i: usize, j: usize) -> Q {
        self.densities[i][j]
    }
}

/// Vertices of cluster `j` typical w.r.t. all but at most `√ε·N` other clusters.
///
/// `√ε` is replaced by the least `p/2¹⁶` whose square is at least `ε`.
pub fn ultratypical_vertices(host: &Graph, clusters: &[Vec<usize>], j: usize, epsilon: &Q) -> Vec<usize> {
    let idx = UltratypicalIndex::new(host, clusters, epsilon);
    clusters[j]
        .iter()
        .copied()
        .filter(|&v| idx.is_ultratypical(v))
        .collect()
}

/// Slicing check: `(X′,Y′)` is `max(ε/α, 2ε)`-regular with density at least `d − ε`.
pub fn check_slicing(
    p: &Pair,
    xp: &[usize],
    yp: &[usize],
    alpha: &Q,
    epsilon: &Q,
    method: Method,
) -> Result<bool, RegularityError> {
    if !alpha.is_positive() || alpha > &Q::from_integer(1) {
        return Err(RegularityError::Precondition(vec!["0 < α ≤ 1".into()]));
    }
    let mut violated = Vec::new();
    let xs = p.host().set_of(p.x());
    let ys = p.host().set_of(p.y());
    if !xp.iter().all(|&v| xs.contains(v)) || !yp.iter().all(|&v| ys.contains(v)) {
        violated.push("X′ ⊆ X and Y′ ⊆ Y".into());
    }
    if qu(xp.len()) < alpha * qu(p.x().len()) {
        violated.push("|X′| ≥ α|X|".into());
    }
    if qu(yp.len()) < alpha * qu(p.y().len()) {
        violated.push("|Y′| ≥ α|Y|".into());
    }
    if !violated.is_empty() {
        return Err(RegularityError::Precondition(violated));
    }
    if !is_regular(p, epsilon, method)?.regular {
        return Err(RegularityError::Precondition(vec!["(X,Y) is ε-regular".into()]));
    }
    let slice = Pair::new(p.host(), xp.to_vec(), yp.to_vec())?;
    let eps2 = (epsilon / alpha).max(epsilon * Q::from_integer(2));
    Ok(slice.density() >= p.density() - epsilon && is_regular(&slice, &eps2, method)?.regular)
}
