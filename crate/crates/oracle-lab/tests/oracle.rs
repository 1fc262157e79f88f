use lks_core::gen::{gnp, random_tree, rng};
use lks_core::{q, validate_embedding, validate_map, Graph, RootedTree};
use lks_oracle::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn tree_from_graph(g: &Graph) -> RootedTree {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    RootedTree::from_edges(g.n(), &edges, 0).unwrap()
}

#[test]
fn p3_into_k3() {
    let cert = brute_force_embed(&RootedTree::path(3), &Graph::complete(3), DEFAULT_BUDGET).unwrap().unwrap();
    assert!(validate_embedding(&cert, &RootedTree::path(3), &Graph::complete(3)));
}

#[test]
fn claw_not_in_c4() {
    assert!(brute_force_embed(&RootedTree::star(4), &Graph::cycle(4), DEFAULT_BUDGET).unwrap().is_none());
    assert!(plain_embed(&RootedTree::star(4), &Graph::cycle(4), DEFAULT_BUDGET).unwrap().is_none());
}

#[test]
fn every_small_tree_in_k7() {
    let k7 = Graph::complete(7);
    for n in 1..=7 {
        for t in all_trees(n) {
            let cert = brute_force_embed(&t, &k7, DEFAULT_BUDGET).unwrap().expect("complete host");
            assert!(validate_embedding(&cert, &t, &k7));
        }
    }
}

#[test]
fn budget_exhaustion_is_not_absence() {
    let ex = gen_extremal(9, &q(1, 2), 1).unwrap();
    let err = brute_force_embed(&RootedTree::path(10), &ex.graph, 5).unwrap_err();
    assert_eq!(err, BudgetExceeded { budget: 5 });
    assert!(plain_embed(&RootedTree::path(10), &ex.graph, 5).is_err());
}

#[test]
fn isomorphism_class_counts() {
    let graphs: Vec<usize> = (1..=7).map(|n| all_graphs(n).len()).collect();
    assert_eq!(graphs, [1, 2, 4, 11, 34, 156, 1044]);
    let trees: Vec<usize> = (1..=10).map(|n| all_trees(n).len()).collect();
    assert_eq!(trees, [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
}

#[test]
fn canonical_graph_has_same_code() {
    for g in all_graphs(5) {
        assert_eq!(canonical_code(&canonical_graph(&g)), canonical_code(&g));
    }
}

#[test]
fn searches_agree_up_to_six() {
    let trees: Vec<RootedTree> = (1..=6).flat_map(all_trees).collect();
    for n in 1..=6 {
        for g in all_graphs(n) {
            for t in &trees {
                let a = brute_force_embed(t, &g, DEFAULT_BUDGET).unwrap();
                let b = plain_embed(t, &g, DEFAULT_BUDGET).unwrap();
                assert_eq!(a.is_some(), b.is_some(), "{} in {}", t.to_json(), g.to_edge_list());
                if let Some(c) = a {
                    assert!(validate_embedding(&c, t, &g));
                }
                if let Some(m) = b {
                    assert!(validate_map(&m, &t.to_graph(), &g));
                }
            }
        }
    }
}

#[test]
fn extremal_k7_half() {
    let ex = gen_extremal(7, &q(1, 2), 2).unwrap();
    let p = &ex.profile;
    assert_eq!((p.block_order, p.clique, p.independent), (8, 3, 5));
    assert_eq!((p.clique_degree, p.independent_degree), (7, 3));
    assert_eq!(p.degree_k_per_block, 3);
    assert_eq!(p.degree_k_total, 6);
    for v in 0..3 {
        assert_eq!(ex.graph.degree(v), 7);
    }
    assert!(brute_force_embed(&RootedTree::path(8), &ex.graph, DEFAULT_BUDGET).unwrap().is_none());
    assert!(brute_force_embed(&RootedTree::path(7), &ex.graph, DEFAULT_BUDGET).unwrap().is_some());
}

#[test]
fn extremal_k9_third() {
    let ex = gen_extremal(9, &q(1, 3), 1).unwrap();
    assert_eq!((ex.profile.clique, ex.profile.independent), (2, 8));
    assert!(brute_force_embed(&RootedTree::path(6), &ex.graph, DEFAULT_BUDGET).unwrap().is_none());
    assert_eq!(extremal_exclusions(9, &q(1, 3), 2).unwrap(), (true, true));
}

#[test]
fn extremal_rejects_degenerate_r() {
    assert!(matches!(gen_extremal(5, &q(1, 6), 1), Err(OracleError::DegenerateR(_))));
}

#[test]
fn tight_trees() {
    let t = gen_tight_tree(7, &q(1, 2)).unwrap();
    assert_eq!(tree_code(&t), tree_code(&RootedTree::path(8)));
    let t = gen_tight_tree(9, &q(1, 3)).unwrap();
    assert_eq!(t.n(), 10);
    assert_eq!(t.smaller_class_size(), 3);
    assert_eq!((0..10).filter(|&v| t.is_leaf(v)).count(), 5);
    assert_eq!((0..10).map(|v| t.degree(v)).max(), Some(5));
    assert!(matches!(gen_tight_tree(3, &q(1, 1)), Err(OracleError::Infeasible(_))));
}

#[test]
fn bistars() {
    assert!(bistar_check(7).unwrap());
    assert!(bistar_check(9).unwrap());
    assert!(bistar_embeds(3, 4, 4).unwrap().is_some());
    assert!(bistar_check(8).is_err());
}

#[test]
fn ramsey_p4() {
    let p4 = RootedTree::path(4);
    let v = ramsey_check(&[p4.clone(), p4.clone()], 5, 1_000_000).unwrap();
    assert!(matches!(v, RamseyVerdict::Forced { .. }));
    let v = ramsey_check(&[p4.clone(), p4.clone()], 4, 1_000_000).unwrap();
    let RamseyVerdict::NotForced { witness } = v else { panic!("n = 4 has an avoiding colouring") };
    assert_eq!(monochromatic(&[p4.clone(), p4], &witness).unwrap(), None);
}

#[test]
fn ramsey_single_tree_is_containment() {
    for n in 2..=6 {
        let forced = matches!(ramsey_check(&[RootedTree::path(5)], n, 1_000_000).unwrap(), RamseyVerdict::Forced { .. });
        assert_eq!(forced, n >= 5);
    }
}

#[test]
fn ramsey_budget_inconclusive() {
    let p4 = RootedTree::path(4);
    let v = ramsey_check(&[p4.clone(), p4], 5, 3).unwrap();
    assert!(matches!(v, RamseyVerdict::Inconclusive { .. }));
}

#[test]
fn scan_k4_half_n6_exhaustive() {
    let rep = conjecture_scan(4, &q(1, 2), 6, &ScanMode::Exhaustive).unwrap();
    assert_eq!(rep.hosts_tried, 156);
    assert!(rep.hosts_skipped > 0 && rep.hosts_checked > 0);
    assert_eq!(rep.hosts_skipped + rep.hosts_checked, rep.hosts_tried);
    assert!(rep.counterexamples.is_empty());
    assert_eq!((rep.inconclusive, rep.disagreements), (0, 0));
    assert_eq!(rep.subscans.len(), 2);
}

#[test]
fn scan_random_is_reproducible() {
    let mode = ScanMode::Random { seed: 7, trials: 300 };
    let a = conjecture_scan(6, &q(1, 3), 9, &mode).unwrap();
    let b = conjecture_scan(6, &q(1, 3), 9, &mode).unwrap();
    assert!(a.counterexamples.is_empty());
    assert_eq!((a.hosts_checked, a.hosts_skipped), (b.hosts_checked, b.hosts_skipped));
    assert!(a.hosts_checked > 100);
}

#[test]
fn scan_rejects_large_exhaustive() {
    assert!(conjecture_scan(4, &q(1, 2), 11, &ScanMode::Exhaustive).is_err());
}

#[test]
fn hypothesis_counts_heavy_vertices() {
    // K_{1,4}: one vertex of degree 4 out of 5.
    let star = Graph::complete_bipartite(1, 4);
    assert!(meets_hypothesis(&star, 4, &q(1, 5)));
    assert!(!meets_hypothesis(&star, 4, &q(1, 4)));
}

#[test]
fn scan_trees_respect_class_cap() {
    let ts = scan_trees(4, &q(1, 2));
    assert!(ts.iter().all(|t| t.n() <= 5 && 2 * t.smaller_class_size() <= 5));
    // every tree on at most 5 vertices has smaller class at most 2
    assert_eq!(ts.len(), 1 + 1 + 1 + 2 + 3);
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(g.n(), &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_code_is_relabelling_invariant(seed in any::<u64>(), n in 1usize..9, p in 1i128..10) {
        let mut r = rng(seed);
        let g = gnp(n, &q(p, 10), &mut r);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        prop_assert_eq!(canonical_code(&g), canonical_code(&relabel(&g, &perm)));
    }

    #[test]
    fn tree_code_is_relabelling_invariant(seed in any::<u64>(), n in 1usize..12) {
        let mut r = rng(seed);
        let t = random_tree(n, &mut r);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let u = tree_from_graph(&relabel(&t.to_graph(), &perm));
        prop_assert_eq!(tree_code(&t), tree_code(&u));
    }

    #[test]
    fn searches_agree_on_random_pairs(seed in any::<u64>(), tn in 1usize..8, gn in 1usize..10, p in 1i128..10) {
        let mut r = rng(seed);
        let t = random_tree(tn, &mut r);
        let g = gnp(gn, &q(p, 10), &mut r);
        let a = brute_force_embed(&t, &g, DEFAULT_BUDGET).unwrap();
        let b = plain_embed(&t, &g, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(a.is_some(), b.is_some());
        if let Some(c) = a {
            prop_assert!(validate_embedding(&c, &t, &g));
        }
    }

    #[test]
    fn pigeonhole_holds(seed in any::<u64>(), ks in proptest::collection::vec(1usize..5, 1..4)) {
        use rand::Rng;
        let n = ks.iter().map(|k| k - 1).sum::<usize>() + 2;
        let mut r = rng(seed);
        let m = ks.len() as u8;
        let col = Colouring { n, colour: (0..pairs(n).len()).map(|_| r.gen_range(0..m)).collect() };
        let step = pigeonhole_step(&col, &ks).unwrap();
        prop_assert!(step.vertices.len() * ks.len() >= n);
        for &v in &step.vertices {
            prop_assert!(col.degree(v, step.colour as u8) >= ks[step.colour]);
        }
    }
}
