//! Hand-built instances, one per case, at `k = 60`, `n = 600`.
//!
//! Ten L-clusters of 30 vertices and five S-clusters of 60 (`r = 1/3`). All
//! pairs have density 1/2 except those at the cluster `A = 0`, which are tuned
//! so that each case splits `𝓓_A` into non-empty parts. `B = 1`, the matching
//! is `{(2,10), (3,11)}`, and the host is realized from `seed`.

use lks_cluster::{synthesize_lks, DensityPlan, LksParams, SkewLksGraph};
use lks_config::{build_witness, verify_witness, Config, ConfigWitness};
use lks_core::{generate_tree, q, RootedTree, TreeShape, Q};
use lks_tree_decomp::{fine_partition, oriented_forests, FinePartition};
use num_traits::Zero;

use crate::master::engine_stats;

pub const K: usize = 60;
pub const L_SIZE: usize = 30;
pub const M_L: usize = 10;
pub const M_S: usize = 5;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub case: Config,
    pub g: SkewLksGraph,
    pub tree: RootedTree,
    pub fp: FinePartition,
    pub witness: ConfigWitness,
    pub delta: Q,
}

pub fn params() -> LksParams {
    LksParams {
        k: K,
        eta: q(1, 10),
        epsilon: q(3, 10),
        d: q(1, 4),
        r: q(1, 3),
    }
}

pub fn delta() -> Q {
    q(1, 20)
}

/// `(tree seed, ℓ)` per case.
pub fn tree_choice(case: Config) -> (u64, usize) {
    match case {
        Config::A => (39, 12),
        Config::B => (54, 12),
        Config::C => (23, 12),
        Config::D => (177, 12),
    }
}

/// Densities from `A` to `S10..S14` and whether `A` sees the L-cluster 2.
fn a_row(case: Config) -> ([Q; M_S], bool) {
    let z = Q::zero();
    match case {
        Config::A => ([q(1, 6), z, q(1, 2), z, z], true),
        Config::B => ([q(1, 6), z, q(1, 6), z, z], true),
        Config::C => ([q(1, 3), z, q(1, 6), z, z], true),
        Config::D => ([q(1, 3), z, z, z, z], false),
    }
}

pub fn plan(case: Config) -> DensityPlan {
    let mut p = DensityPlan::uniform(M_L, M_S, L_SIZE, q(1, 2), q(1, 2), params());
    let (row, sees_l2) = a_row(case);
    for (j, d) in row.iter().enumerate() {
        p.densities[0][M_L + j] = *d;
        p.densities[M_L + j][0] = *d;
    }
    if !sees_l2 {
        p.densities[0][2] = Q::zero();
        p.densities[2][0] = Q::zero();
    }
    p
}

pub fn tree(case: Config) -> (RootedTree, FinePartition) {
    let (seed, ell) = tree_choice(case);
    let t = generate_tree(K + 1, TreeShape::Random(seed), &q(1, 3)).expect("tree");
    let fp = fine_partition(&t, ell).expect("fine partition");
    (t, fp)
}

/// The fixture for `case` on host realization `seed`.
pub fn fixture(case: Config, seed: u64) -> Fixture {
    let g = synthesize_lks(&plan(case), seed).expect("feasible plan");
    let (tree, fp) = tree(case);
    let forests = oriented_forests(&fp, &tree, 1).expect("forests");
    let stats = engine_stats(&forests, K);
    let cg = g.cluster_graph();
    let witness = build_witness(&cg, &stats, &g.params.eta, case, 0, 1, vec![(2, 10), (3, 11)]);
    debug_assert!(verify_witness(&cg, &stats, &witness, &g.params.eta));
    Fixture {
        case,
        g,
        tree,
        fp,
        witness,
        delta: delta(),
    }
}
