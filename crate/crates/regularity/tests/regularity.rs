use lks_core::gen::{add_random_bipartite, random_tree};
use lks_core::rational::{ceil_usize, sqrt_upper};
use lks_core::{q, qu, rng, validate_embedding, Graph, RootedTree, Q};
use lks_regularity::*;
use num_traits::Signed;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

fn random_pair_graph(a: usize, b: usize, p: Q, seed: u64) -> (Graph, Vec<usize>, Vec<usize>) {
    let mut g = Graph::empty(a + b);
    let xs: Vec<usize> = (0..a).collect();
    let ys: Vec<usize> = (a..a + b).collect();
    add_random_bipartite(&mut g, &xs, &ys, &p, &mut rng(seed));
    (g, xs, ys)
}

/// Largest `|d(X′,Y′) − d(X,Y)|` over all admissible subset pairs, by brute force.
fn brute_max_gap(g: &Graph, xs: &[usize], ys: &[usize], eps: &Q) -> Q {
    let d = Q::new(
        xs.iter().map(|&x| ys.iter().filter(|&&y| g.has_edge(x, y)).count()).sum::<usize>() as i128,
        (xs.len() * ys.len()) as i128,
    );
    let mut best = Q::from_integer(0);
    for mx in 1u32..1 << xs.len() {
        for my in 1u32..1 << ys.len() {
            let a: Vec<usize> = (0..xs.len()).filter(|i| mx >> i & 1 == 1).map(|i| xs[i]).collect();
            let b: Vec<usize> = (0..ys.len()).filter(|i| my >> i & 1 == 1).map(|i| ys[i]).collect();
            if qu(a.len()) < eps * qu(xs.len()) || qu(b.len()) < eps * qu(ys.len()) {
                continue;
            }
            let e = a.iter().map(|&x| b.iter().filter(|&&y| g.has_edge(x, y)).count()).sum::<usize>();
            let gap = (Q::new(e as i128, (a.len() * b.len()) as i128) - d).abs();
            best = best.max(gap);
        }
    }
    best
}

#[test]
fn density_examples() {
    let g = Graph::complete_bipartite(3, 4);
    let p = Pair::new(&g, vec![0, 1, 2], vec![3, 4, 5, 6]).unwrap();
    assert_eq!(p.density(), q(1, 1));
    let e = Graph::empty(4);
    assert_eq!(Pair::new(&e, vec![0, 1], vec![2, 3]).unwrap().density(), q(0, 1));
    let one = Graph::from_edges(4, &[(0, 2)]).unwrap();
    assert_eq!(Pair::new(&one, vec![0, 1], vec![2, 3]).unwrap().density(), q(1, 4));
    assert_eq!(density_of(&one, &[], &[2]), Err(RegularityError::EmptySide));
    assert!(matches!(Pair::new(&one, vec![0, 1], vec![1, 2]), Err(RegularityError::Overlap(1))));
}

#[test]
fn complete_pair_is_regular() {
    let g = Graph::complete_bipartite(5, 7);
    let p = Pair::new(&g, (0..5).collect(), (5..12).collect()).unwrap();
    for eps in [q(1, 10), q(1, 3), q(9, 10)] {
        let v = is_regular(&p, &eps, Method::Exhaustive).unwrap();
        assert!(v.regular && v.witness.is_none());
    }
}

#[test]
fn half_graph_blocks() {
    // X₁ = {0,1}, X₂ = {2,3}, Y₁ = {4,5}, Y₂ = {6,7}; only X₁–Y₁ complete.
    let mut g = Graph::empty(8);
    for x in 0..2 {
        for y in 4..6 {
            g.add_edge(x, y).unwrap();
        }
    }
    let p = Pair::new(&g, (0..4).collect(), (4..8).collect()).unwrap();
    assert_eq!(p.density(), q(1, 4));
    let eps = q(1, 4);
    let v = is_regular(&p, &eps, Method::Exhaustive).unwrap();
    assert!(!v.regular);
    let w = v.witness.unwrap();
    assert_eq!(w.gap, q(3, 4));
    // (X₂,Y₂) deviates by exactly ε, which is not strictly more.
    assert_eq!(density_of(&g, &[2, 3], &[6, 7]).unwrap() - p.density(), -eps);
    assert!(witness_is_valid(&p, &eps, &w));
    assert_eq!(brute_max_gap(&g, p.x(), p.y(), &eps), q(3, 4));
}

#[test]
fn exhaustive_budget() {
    let (g, xs, ys) = random_pair_graph(17, 17, q(1, 2), 0);
    let p = Pair::new(&g, xs, ys).unwrap();
    assert_eq!(
        is_regular(&p, &q(1, 4), Method::Exhaustive),
        Err(RegularityError::BudgetExceeded { side: 17, limit: 16 })
    );
    assert_eq!(is_regular(&p, &q(0, 1), Method::Exhaustive), Err(RegularityError::BadEpsilon));
}

#[test]
fn random_64_pair_passes_sampling() {
    let (g, xs, ys) = random_pair_graph(64, 64, q(1, 2), 7);
    let p = Pair::new(&g, xs, ys).unwrap();
    let v = is_regular(&p, &q(1, 4), Method::Sampled { seed: 1, trials: 2000 }).unwrap();
    assert!(v.regular, "{:?}", v.witness);
}

#[test]
fn slicing_examples() {
    let (g, xs, ys) = random_pair_graph(64, 64, q(1, 2), 11);
    let p = Pair::new(&g, xs.clone(), ys.clone()).unwrap();
    let eps = q(1, 4);
    let m = Method::Sampled { seed: 3, trials: 300 };
    assert!(check_slicing(&p, &xs, &ys, &q(1, 1), &eps, m).unwrap());
    let mut r = rng(5);
    let all_ok = (0..200).all(|_| {
        let mut a = xs.clone();
        let mut b = ys.clone();
        a.shuffle(&mut r);
        b.shuffle(&mut r);
        let sa = r.gen_range(32..=64);
        let sb = r.gen_range(32..=64);
        check_slicing(&p, &a[..sa], &b[..sb], &q(1, 2), &eps, m).unwrap()
    });
    assert!(all_ok);
    let k = Graph::complete_bipartite(6, 6);
    let pk = Pair::new(&k, (0..6).collect(), (6..12).collect()).unwrap();
    assert!(check_slicing(&pk, &[0, 1, 2], &[6, 7, 8, 9], &q(1, 2), &q(1, 5), Method::Exhaustive).unwrap());
    assert!(matches!(
        check_slicing(&pk, &[0], &[6], &q(1, 2), &q(1, 5), Method::Exhaustive),
        Err(RegularityError::Precondition(_))
    ));
}

#[test]
fn typical_examples() {
    let k = Graph::complete_bipartite(4, 4);
    let p = Pair::new(&k, (0..4).collect(), (4..8).collect()).unwrap();
    assert_eq!(typical_vertices(&p, &[4, 5], &q(1, 10)), vec![0, 1, 2, 3]);
    let mut g = Graph::complete_bipartite(4, 4);
    for y in 4..8 {
        g.remove_edge(0, y);
    }
    let p = Pair::new(&g, (0..4).collect(), (4..8).collect()).unwrap();
    assert_eq!(typical_vertices(&p, &[4, 5, 6, 7], &q(1, 10)), vec![1, 2, 3]);
}

#[test]
fn ultratypical_examples() {
    let g = Graph::complete(12);
    let clusters: Vec<Vec<usize>> = (0..4).map(|i| (3 * i..3 * i + 3).collect()).collect();
    assert_eq!(ultratypical_vertices(&g, &clusters, 2, &q(1, 10)), vec![6, 7, 8]);
    let e = Graph::empty(5);
    assert_eq!(ultratypical_vertices(&e, &[vec![0, 1, 2]], 0, &q(1, 10)), vec![0, 1, 2]);
}

#[test]
fn ultratypical_on_six_random_clusters() {
    let size = 400;
    let mut g = Graph::empty(6 * size);
    let clusters: Vec<Vec<usize>> = (0..6).map(|i| (i * size..(i + 1) * size).collect()).collect();
    let mut r = rng(21);
    for i in 0..6 {
        for j in i + 1..6 {
            add_random_bipartite(&mut g, &clusters[i], &clusters[j], &q(1, 2), &mut r);
        }
    }
    let eps = q(1, 25);
    for j in 0..6 {
        let u = ultratypical_vertices(&g, &clusters, j, &eps);
        assert!(qu(u.len()) >= q(4, 5) * qu(size), "cluster {j}: {}", u.len());
    }
}

#[test]
fn embed_path_into_complete_pair() {
    let g = Graph::complete_bipartite(20, 20);
    let p = Pair::new(&g, (0..20).collect(), (20..40).collect()).unwrap();
    let t = RootedTree::path(4);
    let xp: Vec<usize> = (0..20).collect();
    let yp: Vec<usize> = (20..40).collect();
    let req = PairEmbedRequest {
        tree: &t,
        f1_colour: t.colour(0),
        pair: &p,
        xp: &xp,
        yp: &yp,
        prescribed: &[],
        epsilon: q(1, 10),
        alpha: q(1, 4),
        d: q(1, 1),
    };
    let cert = embed_in_pair(&req).unwrap();
    assert!(validate_embedding(&cert, &t, &g));
}

#[test]
fn embed_star_with_prescribed_centre() {
    let g = Graph::complete_bipartite(20, 50);
    let p = Pair::new(&g, (0..20).collect(), (20..70).collect()).unwrap();
    let t = RootedTree::star(6);
    let xp: Vec<usize> = (0..20).collect();
    let yp: Vec<usize> = (20..70).collect();
    let req = PairEmbedRequest {
        tree: &t,
        f1_colour: t.colour(0),
        pair: &p,
        xp: &xp,
        yp: &yp,
        prescribed: &[(0, 3)],
        epsilon: q(1, 10),
        alpha: q(1, 4),
        d: q(1, 1),
    };
    let cert = embed_in_pair(&req).unwrap();
    assert_eq!(cert.map[0], 3);
    assert_eq!(cert.provenance[0], "prescribed");
    assert!(validate_embedding(&cert, &t, &g));
    let bad = PairEmbedRequest { alpha: q(1, 2), ..req };
    match embed_in_pair(&bad) {
        Err(RegularityError::Precondition(v)) => assert!(v.contains(&"d > 3α".to_string())),
        other => panic!("{other:?}"),
    }
}

/// Two vertices of the same class at distance 4, if any.
fn far_pair(t: &RootedTree) -> Option<(usize, usize)> {
    (0..t.n())
        .flat_map(|u| (u + 1..t.n()).map(move |v| (u, v)))
        .find(|&(u, v)| t.distance(u, v) == 4)
}

fn two_root_trial(seed: u64) -> bool {
    let (g, xs, ys) = random_pair_graph(200, 200, q(1, 2), seed);
    let p = Pair::new(&g, xs.clone(), ys.clone()).unwrap();
    let mut r = rng(seed ^ 0x5eed);
    let (t, (u, v)) = loop {
        let n = r.gen_range(5..=8);
        let t = random_tree(n, &mut r);
        if let Some(uv) = far_pair(&t) {
            break (t, uv);
        }
    };
    let mut imgs = xs.clone();
    imgs.shuffle(&mut r);
    let prescribed = [(u, imgs[0]), (v, imgs[1])];
    let req = PairEmbedRequest {
        tree: &t,
        f1_colour: t.colour(u),
        pair: &p,
        xp: &xs,
        yp: &ys,
        prescribed: &prescribed,
        epsilon: q(1, 25),
        alpha: q(1, 10),
        d: p.density(),
    };
    match embed_in_pair(&req) {
        Ok(cert) => {
            validate_embedding(&cert, &t, &g)
                && cert.map[u] == imgs[0]
                && cert.map[v] == imgs[1]
                && (0..t.n()).all(|w| (t.colour(w) == t.colour(u)) == (cert.map[w] < 200))
        }
        Err(_) => false,
    }
}

#[test]
fn two_prescribed_roots_in_random_pairs() {
    let wins = (0..100u64).into_par_iter().filter(|&s| two_root_trial(s)).count();
    assert!(wins >= 99, "{wins}/100");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exhaustive_matches_brute_force(a in 1usize..6, b in 1usize..6, seed in any::<u64>(), num in 1i128..10) {
        let (g, xs, ys) = random_pair_graph(a, b, q(1, 2), seed);
        let eps = q(num, 10);
        let p = Pair::new(&g, xs.clone(), ys.clone()).unwrap();
        let v = is_regular(&p, &eps, Method::Exhaustive).unwrap();
        let gap = brute_max_gap(&g, &xs, &ys, &eps);
        prop_assert_eq!(v.regular, gap <= eps);
        if let Some(w) = v.witness {
            prop_assert!(witness_is_valid(&p, &eps, &w));
            prop_assert_eq!(w.gap.abs(), gap);
        }
    }

    #[test]
    fn sampled_witnesses_are_sound(a in 4usize..30, b in 4usize..30, seed in any::<u64>(), num in 1i128..5) {
        let (g, xs, ys) = random_pair_graph(a, b, q(1, 3), seed);
        let eps = q(num, 10);
        let p = Pair::new(&g, xs, ys).unwrap();
        let v = is_regular(&p, &eps, Method::Sampled { seed, trials: 50 }).unwrap();
        prop_assert_eq!(v.regular, v.witness.is_none());
        if let Some(w) = v.witness {
            prop_assert!(witness_is_valid(&p, &eps, &w));
        }
    }

    #[test]
    fn density_is_a_weighted_average(a in 2usize..20, b in 1usize..20, split in 1usize..19, seed in any::<u64>()) {
        let split = split.min(a - 1);
        let (g, xs, ys) = random_pair_graph(a, b, q(2, 5), seed);
        let d = density_of(&g, &xs, &ys).unwrap();
        let d1 = density_of(&g, &xs[..split], &ys).unwrap();
        let d2 = density_of(&g, &xs[split..], &ys).unwrap();
        prop_assert!(d >= q(0, 1) && d <= q(1, 1));
        prop_assert_eq!(d * qu(a), d1 * qu(split) + d2 * qu(a - split));
    }

    #[test]
    fn few_atypical_in_regular_pairs(a in 4usize..10, b in 4usize..10, seed in any::<u64>(), ysz in 1usize..10) {
        let eps = q(2, 5);
        let (g, xs, ys) = random_pair_graph(a, b, q(1, 2), seed);
        let p = Pair::new(&g, xs.clone(), ys.clone()).unwrap();
        if is_regular(&p, &eps, Method::Exhaustive).unwrap().regular {
            let t = ysz.clamp(ceil_usize(&(eps * qu(b))), b);
            let yp = &ys[..t];
            let typical = typical_vertices(&p, yp, &eps);
            prop_assert!(qu(a - typical.len()) <= eps * qu(a));
        }
    }

    #[test]
    fn ultratypical_counting(size in 5usize..9, nc in 2usize..5, seed in any::<u64>()) {
        let eps = q(2, 5);
        let mut g = Graph::empty(size * nc);
        let clusters: Vec<Vec<usize>> = (0..nc).map(|i| (i * size..(i + 1) * size).collect()).collect();
        let mut r = rng(seed);
        for i in 0..nc {
            for j in i + 1..nc {
                add_random_bipartite(&mut g, &clusters[i], &clusters[j], &q(1, 2), &mut r);
            }
        }
        let all_regular = (0..nc).all(|i| (i + 1..nc).all(|j| {
            let p = Pair::new(&g, clusters[i].clone(), clusters[j].clone()).unwrap();
            is_regular(&p, &eps, Method::Exhaustive).unwrap().regular
        }));
        if all_regular {
            for j in 0..nc {
                let u = ultratypical_vertices(&g, &clusters, j, &eps);
                prop_assert!(qu(size - u.len()) <= sqrt_upper(&eps) * qu(size));
            }
        }
    }

    #[test]
    fn pair_embedding_contract(seed in any::<u64>(), n in 2usize..7, keep in 42usize..=50) {
        let (g, xs, ys) = random_pair_graph(50, 50, q(4, 5), seed);
        let p = Pair::new(&g, xs.clone(), ys.clone()).unwrap();
        let mut r = rng(seed);
        let t = random_tree(n, &mut r);
        let mut xp = xs.clone();
        let mut yp = ys.clone();
        xp.shuffle(&mut r);
        yp.shuffle(&mut r);
        xp.truncate(keep);
        yp.truncate(keep);
        let req = PairEmbedRequest {
            tree: &t,
            f1_colour: 1,
            pair: &p,
            xp: &xp,
            yp: &yp,
            prescribed: &[],
            epsilon: q(1, 10),
            alpha: q(6, 25),
            d: p.density().min(q(3, 4)),
        };
        if let Ok(cert) = embed_in_pair(&req) {
            prop_assert!(validate_embedding(&cert, &t, &g));
            for v in 0..n {
                let side = if t.colour(v) == 1 { &xp } else { &yp };
                prop_assert!(side.contains(&cert.map[v]));
            }
        } else {
            prop_assert!(!pair_embed_violations(&req).is_empty());
        }
    }
}
