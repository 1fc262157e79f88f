use lks_cluster::*;
use lks_core::{q, qu, Graph, Q};
use lks_regularity::{Method, UltratypicalIndex};
use proptest::prelude::*;

fn params(k: usize, r: Q) -> LksParams {
    LksParams {
        k,
        eta: q(1, 10),
        epsilon: q(3, 10),
        d: q(1, 4),
        r,
    }
}

const QUICK: Method = Method::Sampled { seed: 5, trials: 50 };

fn half_plan() -> DensityPlan {
    DensityPlan::uniform(6, 4, 40, q(1, 2), q(1, 2), params(150, q(2, 5)))
}

/// `e(C, ∪set) / |C|` counted edge by edge on the host.
fn host_degbar(g: &SkewLksGraph, c: usize, set: &[usize]) -> Q {
    let clusters = g.clusters();
    let inside = |v: usize, s: usize| clusters[s].contains(&v);
    let mut e = 0usize;
    for (u, v) in g.host.edges() {
        for (a, b) in [(u, v), (v, u)] {
            if inside(a, c) && set.iter().any(|&s| inside(b, s)) {
                e += 1;
            }
        }
    }
    Q::new(e as i128, clusters[c].len() as i128)
}

#[test]
fn synthetic_plan_validates() {
    let plan = half_plan();
    assert_eq!(plan.s_size().unwrap(), 60);
    let g = synthesize_lks(&plan, 7).unwrap();
    assert_eq!(g.order(), 480);
    let v = validate_lks(&g, Method::Sampled { seed: 1, trials: 200 });
    assert!(v.is_empty(), "{v:?}");
    let cg = g.cluster_graph();
    for c in 0..cg.len() {
        let planned = plan.planned_degree(c).unwrap();
        let got = cg.degbar_total(c);
        // exact-count sampling: each pair density equals round(p·|X||Y|)/(|X||Y|)
        assert_eq!(got, planned, "cluster {c}");
    }
}

#[test]
fn degbar_matches_host_count() {
    let plan = DensityPlan::uniform(3, 3, 6, q(2, 3), q(1, 3), params(4, q(1, 3)));
    let g = synthesize_lks(&plan, 3).unwrap();
    let cg = g.cluster_graph();
    let sets: [&[usize]; 4] = [&[1], &[1, 2], &[3, 4, 5], &[0, 1, 2, 3, 4, 5]];
    for c in 0..6 {
        for set in sets {
            assert_eq!(cg.degbar(c, set).unwrap(), host_degbar(&g, c, set));
        }
    }
    // L-cluster of size 6 against an S-cluster of size 12 at density 1/3
    assert_eq!(cg.degbar(0, &[3]).unwrap(), q(4, 1));
    assert_eq!(cg.degbar(3, &[0]).unwrap(), q(2, 1));
    assert_eq!(cg.degbar(0, &[7]), Err(ClusterError::UnknownCluster(7)));
}

#[test]
fn injected_defects_are_reported() {
    let g = synthesize_lks(&half_plan(), 11).unwrap();
    let mut bad = g.clone();
    let (a, b) = (bad.s_clusters[0][0], bad.s_clusters[1][0]);
    bad.host.add_edge(a, b).unwrap();
    assert_eq!(lks_items(&validate_lks(&bad, QUICK)), vec![5]);

    let mut low = g.clone();
    low.params.k = 300;
    assert_eq!(lks_items(&validate_lks(&low, QUICK)), vec![6]);

    let mut skew = g.clone();
    skew.params.r = q(1, 3);
    assert_eq!(lks_items(&validate_lks(&skew, QUICK)), vec![3]);
}

#[test]
fn empty_plan_fails_degree_item() {
    let plan = DensityPlan::uniform(3, 2, 4, Q::from_integer(0), Q::from_integer(0), params(1, q(1, 2)));
    let g = synthesize_lks(&plan, 0).unwrap();
    assert_eq!(lks_items(&validate_lks(&g, Method::Exhaustive)), vec![6]);
}

#[test]
fn infeasible_plans_rejected() {
    let plan = DensityPlan::uniform(3, 2, 5, q(1, 2), q(1, 2), params(1, q(2, 5)));
    assert!(matches!(synthesize_lks(&plan, 0), Err(ClusterError::InfeasiblePlan(_))));
    let mut plan = DensityPlan::uniform(3, 2, 4, q(1, 2), q(1, 2), params(1, q(1, 2)));
    plan.densities[3][4] = q(1, 2);
    plan.densities[4][3] = q(1, 2);
    assert!(matches!(synthesize_lks(&plan, 0), Err(ClusterError::InfeasiblePlan(_))));
}

#[test]
fn size_bounds_hold() {
    let g = synthesize_lks(&half_plan(), 1).unwrap();
    let cg = g.cluster_graph();
    let b = cluster_size_bounds(&cg, g.order());
    assert!(b.iter().all(|x| x.holds));
    assert_eq!(b[0].bound, q(48, 1));
    assert_eq!(b[9].bound, q(120, 1));
}

#[test]
fn ultratypical_degree_bound() {
    let plan = DensityPlan::uniform(6, 4, 40, q(1, 2), q(1, 2), LksParams { epsilon: q(1, 4), ..params(150, q(2, 5)) });
    let g = synthesize_lks(&plan, 9).unwrap();
    let cg = g.cluster_graph();
    let index = UltratypicalIndex::new(&g.host, &g.clusters(), &g.params.epsilon);
    let s_ids = cg.s_ids();
    let mut checked = 0;
    for v in 0..g.host.n() {
        if index.is_ultratypical(v) {
            assert!(ultratypical_degree_check(&g, &cg, &index, v, &s_ids, &g.params.epsilon).unwrap());
            checked += 1;
        }
    }
    assert!(checked >= 400, "{checked}");
}

#[test]
fn json_round_trip() {
    let g = synthesize_lks(&DensityPlan::uniform(3, 2, 4, q(1, 2), q(1, 4), params(2, q(1, 2))), 2).unwrap();
    let back = SkewLksGraph::from_json(&g.to_json()).unwrap();
    assert_eq!(back, g);
    let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
    assert_eq!(v["params"]["r"], "1/2");
}

/// Four copies of a 49-clique joined completely to an independent 51-set.
fn extremal_host() -> Graph {
    let mut g = Graph::empty(400);
    for b in 0..4 {
        let base = b * 100;
        for i in 0..49 {
            for j in i + 1..100 {
                g.add_edge(base + i, base + j).unwrap();
            }
        }
    }
    g
}

#[test]
fn build_on_extremal_host() {
    let g = extremal_host();
    let (lks, rep) = build_skew_lks(&g, 80, &q(1, 10), &q(2, 5), &q(1, 8), &q(1, 10), &BuildOptions::default()).unwrap();
    assert_eq!((rep.s, rep.t, rep.part_size), (2, 5, 6));
    assert!(rep.converged);
    assert!(rep.ml_inequality);
    assert_eq!(lks.params.r, q(2, 5));
    assert_eq!(lks.params.epsilon, q(5, 8));
    // low-degree vertices dropped first: ⌊ηqn/2⌋ = 4 of them
    assert_eq!(rep.n_prime, 396);
    assert!(validate_lks(&lks, Method::Exhaustive).is_empty());
    // L-clusters come from cliques, S-clusters from independent sets
    assert!(lks.l_clusters.iter().flatten().all(|v| v % 100 < 49));
    assert!(lks.s_clusters.iter().flatten().all(|v| v % 100 >= 49));
    assert!(rep.erasures.inside_sets as i128 <= rep.erasures.bound_inside.ceil().to_integer());
}

#[test]
fn build_on_blocks_respects_sides() {
    let mut g = Graph::empty(0);
    for _ in 0..5 {
        g = g.disjoint_union(&Graph::complete_bipartite(16, 24));
    }
    let (lks, rep) = build_skew_lks(&g, 19, &q(1, 10), &q(1, 3), &q(1, 8), &q(1, 10), &BuildOptions::default()).unwrap();
    assert_eq!((rep.s, rep.t), (1, 3));
    assert!(validate_lks(&lks, Method::Exhaustive).is_empty());
    for c in lks.clusters() {
        let side = |v: usize| (v / 40, v % 40 < 16);
        assert!(c.iter().all(|&v| side(v) == side(c[0])), "{c:?}");
    }
    assert_eq!(lks.l_clusters.len(), 40);
}

#[test]
fn build_requires_degree_hypothesis() {
    let g = Graph::complete_bipartite(10, 40);
    let err = build_skew_lks(&g, 30, &q(1, 10), &q(1, 3), &q(1, 8), &q(1, 10), &BuildOptions::default());
    assert!(matches!(err, Err(ClusterError::Precondition(_))));
}

#[test]
fn r_prime_choice() {
    assert_eq!(choose_r_prime(&q(1, 2), &q(1, 10), &q(1, 5)), Some((1, 2)));
    assert_eq!(choose_r_prime(&q(2, 5), &q(1, 10), &q(1, 5)), Some((2, 5)));
    // [0.3, 0.3·(1+0.5·0.2·1/12)] = [0.3, 0.3025]: 3/10 itself is simplest
    assert_eq!(choose_r_prime(&q(3, 10), &q(1, 2), &q(1, 1)), Some((3, 10)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degree_identities(ml in 1usize..4, ms in 1usize..4, seed in 0u64..1000, num in 0i128..=6, rsel in 0usize..3) {
        let r = [q(1, 2), q(1, 3), q(2, 5)][rsel];
        let l_size = [2, 2, 4][rsel] * 3;
        let plan = DensityPlan::uniform(ml, ms, l_size, q(num, 6), q(6 - num, 6), params(1, r));
        let g = synthesize_lks(&plan, seed).unwrap();
        let cg = g.cluster_graph();
        for c in cg.l_ids() {
            for d in cg.s_ids() {
                prop_assert_eq!(r * cg.degbar_to(c, &[d]), (Q::from_integer(1) - r) * cg.degbar_to(d, &[c]));
            }
        }
        let total: Q = (0..cg.len()).map(|c| cg.degbar_total(c) * qu(cg.size(c))).sum();
        prop_assert_eq!(total, qu(2 * g.host.m()));
    }
}
