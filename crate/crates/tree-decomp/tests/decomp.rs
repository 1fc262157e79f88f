use lks_core::gen::random_tree;
use lks_core::{rng, RootedTree};
use lks_tree_decomp::*;
use proptest::prelude::*;
use rand::Rng;
use std::collections::{BTreeSet, VecDeque};

/// BFS distance matrix from an edge list.
fn distances(t: &RootedTree) -> Vec<Vec<usize>> {
    let n = t.n();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in t.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if d[w] == usize::MAX {
                        d[w] = d[u] + 1;
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

/// Independent item checker working from distances only.
fn oracle_items(t: &RootedTree, fp: &FinePartition) -> BTreeSet<u8> {
    let d = distances(t);
    let n = t.n();
    let mut bad = BTreeSet::new();
    let seeds: Vec<usize> = fp.wa.iter().chain(&fp.wb).copied().collect();
    let trees: Vec<&Vec<usize>> = fp.da.iter().chain(&fp.db).collect();
    let mut cover = vec![0; n];
    for &v in seeds.iter().chain(trees.iter().flat_map(|x| x.iter())) {
        cover[v] += 1;
    }
    if cover.iter().any(|&c| c != 1) {
        bad.insert(1);
    }
    for tr in &trees {
        // connected iff |edges inside| = |vertices| − 1
        let inside = tr.iter().flat_map(|&a| tr.iter().map(move |&b| (a, b))).filter(|&(a, b)| a < b && d[a][b] == 1).count();
        if tr.is_empty() || inside + 1 != tr.len() {
            bad.insert(1);
        }
    }
    if !seeds.contains(&t.root()) {
        bad.insert(2);
    }
    if fp.wa.len().max(fp.wb.len()) * fp.ell > 336 * (n - 1) {
        bad.insert(3);
    }
    for &a in &seeds {
        for &b in &seeds {
            let cross = fp.wa.contains(&a) != fp.wa.contains(&b);
            if a != b && (d[a][b] % 2 == 1) != cross {
                bad.insert(4);
            }
        }
    }
    for (i, tr) in trees.iter().enumerate() {
        if tr.len() > fp.ell {
            bad.insert(5);
        }
        let nb: BTreeSet<usize> = (0..n).filter(|&u| !tr.contains(&u) && tr.iter().any(|&v| d[u][v] == 1)).collect();
        let other = if i < fp.da.len() { &fp.wb } else { &fp.wa };
        if nb.iter().any(|u| other.contains(u)) {
            bad.insert(6);
        }
        if nb.iter().any(|u| !seeds.contains(u)) {
            bad.insert(7);
        }
        let zs: Vec<usize> = nb.iter().copied().filter(|u| seeds.contains(u)).collect();
        if zs.len() > 2 {
            bad.insert(8);
        }
        if zs.iter().any(|&a| zs.iter().any(|&b| a != b && d[a][b] < 6)) {
            bad.insert(9);
        }
    }
    bad
}

fn p8_valid() -> FinePartition {
    FinePartition {
        wa: vec![],
        wb: vec![0, 6],
        da: vec![],
        db: vec![vec![1, 2, 3, 4, 5], vec![7]],
        ell: 5,
    }
}

#[test]
fn hand_built_p8() {
    let t = RootedTree::path(8);
    assert!(verify_fine_partition(&t, &p8_valid()).is_empty());
    let too_big = FinePartition { ell: 4, ..p8_valid() };
    assert_eq!(violated_items(&verify_fine_partition(&t, &too_big)), vec![5]);
    let close = FinePartition {
        wa: vec![],
        wb: vec![0, 2, 4, 6],
        da: vec![],
        db: vec![vec![1], vec![3], vec![5], vec![7]],
        ell: 5,
    };
    let v = verify_fine_partition(&t, &close);
    assert_eq!(violated_items(&v), vec![9]);
    assert!(v[0].witness.contains("distance 2"));
}

#[test]
fn json_keys() {
    let s = p8_valid().to_json();
    assert_eq!(s, r#"{"WA":[],"WB":[0,6],"DA":[],"DB":[[1,2,3,4,5],[7]],"ell":5}"#);
    assert_eq!(FinePartition::from_json(&s).unwrap(), p8_valid());
}

#[test]
fn path_partition() {
    for k in [7usize, 20, 99] {
        let t = RootedTree::path(k + 1);
        let ell = k.div_ceil(4);
        let fp = fine_partition(&t, ell).unwrap();
        assert!(verify_fine_partition(&t, &fp).is_empty());
        assert!(fp.wa.len().max(fp.wb.len()) * ell <= 336 * k);
        assert!(fp.da.iter().chain(&fp.db).all(|c| c.len() <= ell));
    }
}

#[test]
fn star_partition() {
    let t = RootedTree::star(10);
    for ell in 1..9 {
        let fp = fine_partition(&t, ell).unwrap();
        assert!(fp.seeds().any(|v| v == 0));
        assert!(fp.da.iter().chain(&fp.db).all(|c| c.len() == 1 && c[0] != 0));
    }
}

#[test]
fn bad_ell() {
    let t = RootedTree::path(5);
    assert!(fine_partition(&t, 0).is_err());
    assert!(fine_partition(&t, 4).is_err());
}

#[test]
fn sweep_random_trees() {
    let mut r = rng(2024);
    for _ in 0..100 {
        let n = r.gen_range(3..=200);
        let t = random_tree(n, &mut r);
        for ell in [4usize, 16, 64] {
            if ell >= t.k() {
                continue;
            }
            let fp = fine_partition(&t, ell).unwrap();
            assert!(verify_fine_partition(&t, &fp).is_empty());
            assert!(oracle_items(&t, &fp).is_empty());
            let total: usize = fp.da.iter().chain(&fp.db).map(Vec::len).sum();
            assert_eq!(total + fp.wa.len() + fp.wb.len(), n);
        }
    }
}

#[test]
fn p8_forests() {
    let t = RootedTree::path(8);
    let fp = fine_partition(&t, 3).unwrap();
    let f = to_anchored_forests(&fp, &t).unwrap();
    assert_eq!(f.fa.vertex_count() + f.fb.vertex_count(), 8 - f.wa.len() - f.wb.len());
    let hand = to_anchored_forests(&p8_valid(), &t).unwrap();
    // Colour 1 holds the root of P₈, so W_B = {0,6} already sits in class 1.
    assert!(!hand.swapped);
    assert_eq!(hand.fb.components.len(), 1);
    assert_eq!(hand.fb.deferred, vec![Deferred { vertex: 7, anchors: vec![6] }]);
    assert_eq!(hand.fb.components[0].anchors, vec![0, 6]);
}

#[test]
fn single_subtree_under_one_seed() {
    // Root 0 with one child 1 carrying a path 1-2-3.
    let t = RootedTree::path(4);
    let fp = FinePartition {
        wa: vec![],
        wb: vec![0],
        da: vec![],
        db: vec![vec![1, 2, 3]],
        ell: 3,
    };
    assert!(verify_fine_partition(&t, &fp).is_empty());
    let f = to_anchored_forests(&fp, &t).unwrap();
    let all: Vec<&Component> = f.fa.components.iter().chain(&f.fb.components).collect();
    assert_eq!(all.len(), 1);
    assert_eq!(all[0].anchors, vec![0]);
}

#[test]
fn swapped_sides() {
    let t = RootedTree::path(8);
    let fp = FinePartition {
        wa: vec![0, 6],
        wb: vec![],
        da: vec![vec![1, 2, 3, 4, 5], vec![7]],
        db: vec![],
        ell: 5,
    };
    let f = to_anchored_forests(&fp, &t).unwrap();
    assert!(f.swapped);
    assert_eq!(f.wb, vec![0, 6]);
}

#[test]
fn class_counts_two_ways() {
    let t = random_tree(100, &mut rng(9));
    let fp = fine_partition(&t, 10).unwrap();
    let f = to_anchored_forests(&fp, &t).unwrap();
    // Independent count: class-1 vertices that are not W_B seeds.
    let wb: BTreeSet<usize> = f.wb.iter().copied().collect();
    let d = distances(&t);
    let root_class = if t.colour(t.root()) == 1 { 0 } else { 1 };
    let in_t1 = |v: usize| d[t.root()][v] % 2 == root_class;
    let direct = (0..100).filter(|&v| in_t1(v) && !wb.contains(&v)).count();
    assert_eq!(f.counts.a2 + f.counts.b1, direct);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_partitions_verify(seed in any::<u64>(), n in 3usize..120, ell in 1usize..40) {
        let t = random_tree(n, &mut rng(seed));
        prop_assume!(ell < t.k());
        let fp = fine_partition(&t, ell).unwrap();
        prop_assert!(verify_fine_partition(&t, &fp).is_empty());
        let total: usize = fp.da.iter().chain(&fp.db).map(Vec::len).sum();
        prop_assert_eq!(total + fp.wa.len() + fp.wb.len(), n);
        prop_assert!(fp.wa.len().max(fp.wb.len()) * ell <= 336 * t.k());
        prop_assert!(fp.wa.iter().all(|&v| t.colour(v) == 2));
        prop_assert!(fp.wb.iter().all(|&v| t.colour(v) == 1));
        let f = to_anchored_forests(&fp, &t).unwrap();
        prop_assert!(f.fa.violations(&t).is_empty() && f.fb.violations(&t).is_empty());
        let t1_minus_wb = t.class(1).len() - f.wb.len();
        prop_assert_eq!(f.counts.a2 + f.counts.b1, t1_minus_wb);
    }

    #[test]
    fn verifier_agrees_with_oracle(seed in any::<u64>(), n in 3usize..40, ell in 1usize..10, moves in 0usize..4) {
        let mut r = rng(seed);
        let t = random_tree(n, &mut r);
        prop_assume!(ell < t.k());
        let mut fp = fine_partition(&t, ell).unwrap();
        // Corrupt: move random vertices between seeds and subtrees.
        for _ in 0..moves {
            match r.gen_range(0..4) {
                0 if !fp.wb.is_empty() => { let v = fp.wb.remove(0); fp.wa.push(v); }
                1 if !fp.da.is_empty() => { let c = fp.da.remove(0); fp.db.push(c); }
                2 => { fp.ell = r.gen_range(1..=ell); }
                _ => { let v = r.gen_range(0..n); fp.wa.retain(|&x| x != v); fp.wb.retain(|&x| x != v); }
            }
        }
        let mine: BTreeSet<u8> = violated_items(&verify_fine_partition(&t, &fp)).into_iter().collect();
        prop_assert_eq!(mine, oracle_items(&t, &fp));
    }
}
