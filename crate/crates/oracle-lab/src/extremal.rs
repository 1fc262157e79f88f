//! The extremal host, the tight broom and the bistar check.

use lks_core::rational::floor_q;
use lks_core::{q, Graph, RootedTree, Q};
use serde::Serialize;

use crate::brute::{brute_force_embed, BudgetExceeded, DEFAULT_BUDGET};
use crate::OracleError;

/// `⌊r(k+1)⌋`.
pub fn floor_rk1(k: usize, r: &Q) -> usize {
    floor_q(&(r * q(k as i128 + 1, 1))).max(0) as usize
}

/// Per-block and total degree profile of [`gen_extremal`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub block_order: usize,
    pub clique: usize,
    pub independent: usize,
    pub clique_degree: usize,
    pub independent_degree: usize,
    pub degree_k_per_block: usize,
    pub degree_k_total: usize,
}

#[derive(Clone, Debug)]
pub struct Extremal {
    pub graph: Graph,
    pub profile: DegreeProfile,
}

/// `copies` disjoint blocks on `k+1` vertices: a clique on `⌊r(k+1)⌋−1`
/// vertices, an independent set on the rest, all edges between the two.
pub fn gen_extremal(k: usize, r: &Q, copies: usize) -> Result<Extremal, OracleError> {
    let f = floor_rk1(k, r);
    if f < 2 || f > k + 1 {
        return Err(OracleError::DegenerateR(format!("floor(r(k+1)) = {f} for k = {k}")));
    }
    let c = f - 1;
    let b = k + 1;
    let mut edges = Vec::new();
    for i in 0..c {
        for j in i + 1..b {
            edges.push((i, j));
        }
    }
    let block = Graph::from_edges(b, &edges).expect("block");
    let mut graph = Graph::empty(0);
    for _ in 0..copies {
        graph = graph.disjoint_union(&block);
    }
    let clique_degree = k;
    let independent_degree = c;
    let per_block = (0..b).filter(|&v| block.degree(v) >= k).count();
    let profile = DegreeProfile {
        block_order: b,
        clique: c,
        independent: b - c,
        clique_degree,
        independent_degree,
        degree_k_per_block: per_block,
        degree_k_total: (0..graph.n()).filter(|&v| graph.degree(v) >= k).count(),
    };
    Ok(Extremal { graph, profile })
}

/// Path on `2⌊r(k+1)⌋` vertices whose last vertex is the centre of a star
/// with `k+1−2⌊r(k+1)⌋` leaves, rooted at the free end of the path.
pub fn gen_tight_tree(k: usize, r: &Q) -> Result<RootedTree, OracleError> {
    let f = floor_rk1(k, r);
    if f == 0 || 2 * f > k + 1 {
        return Err(OracleError::Infeasible(format!("2*floor(r(k+1)) = {} exceeds k+1 = {}", 2 * f, k + 1)));
    }
    let p = 2 * f;
    let mut parent: Vec<Option<usize>> = (0..p).map(|v| v.checked_sub(1)).collect();
    parent.extend(std::iter::repeat_n(Some(p - 1), k + 1 - p));
    let t = RootedTree::from_parent(0, parent).expect("broom");
    assert_eq!(t.smaller_class_size(), f, "broom smaller class");
    Ok(t)
}

/// Whether the two trees that the extremal host should exclude are indeed
/// absent: `(no path on 2⌊r(k+1)⌋ vertices, no tight broom)`.
pub fn extremal_exclusions(k: usize, r: &Q, copies: usize) -> Result<(bool, bool), OracleError> {
    let ex = gen_extremal(k, r, copies)?;
    let f = floor_rk1(k, r);
    let path = brute_force_embed(&RootedTree::path(2 * f), &ex.graph, DEFAULT_BUDGET)?;
    let broom = brute_force_embed(&gen_tight_tree(k, r)?, &ex.graph, DEFAULT_BUDGET)?;
    Ok((path.is_none(), broom.is_none()))
}

/// True iff `B_{(k−1)/2,(k−1)/2}` does not embed in `K_{(k−1)/2,k}`.
pub fn bistar_check(k: usize) -> Result<bool, OracleError> {
    if k < 7 || k.is_multiple_of(2) {
        return Err(OracleError::Infeasible(format!("bistar check needs odd k >= 7, got {k}")));
    }
    let a = (k - 1) / 2;
    Ok(bistar_embeds(a, a, k)?.is_none())
}

/// Embedding of `B_{a,b}` in `K_{s,t}`, if any.
pub fn bistar_embeds(a: usize, s: usize, t: usize) -> Result<Option<lks_core::EmbeddingCertificate>, BudgetExceeded> {
    brute_force_embed(&RootedTree::bistar(a, a), &Graph::complete_bipartite(s, t), DEFAULT_BUDGET)
}
