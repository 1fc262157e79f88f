use lks_cluster::{ClusterGraph, Family, LksParams};
use lks_config::*;
use lks_core::{q, qu, rng, Q};
use proptest::prelude::*;
use rand::Rng;

fn params(k: usize, r: Q) -> LksParams {
    LksParams { k, eta: q(1, 10), epsilon: q(1, 4), d: q(1, 5), r }
}

/// Cluster graph from L/S counts, sizes and an edge list with densities.
fn graph(m_l: usize, m_s: usize, l_size: usize, s_size: usize, edges: &[(usize, usize, Q)], k: usize, r: Q) -> ClusterGraph {
    let m = m_l + m_s;
    let mut dens = vec![vec![Q::from_integer(0); m]; m];
    for &(a, b, d) in edges {
        dens[a][b] = d;
        dens[b][a] = d;
    }
    let fam = (0..m).map(|i| if i < m_l { Family::L } else { Family::S }).collect();
    let sizes = (0..m).map(|i| if i < m_l { l_size } else { s_size }).collect();
    ClusterGraph::from_parts(fam, sizes, dens, params(k, r)).unwrap()
}

/// Random L/S cluster graph without the degree hypothesis, for matching tests.
fn loose_graph(seed: u64, m: usize) -> ClusterGraph {
    let mut r = rng(seed);
    let m_s = r.gen_range(1..m);
    let m_l = m - m_s;
    let mut edges = Vec::new();
    for i in 0..m_l {
        for j in i + 1..m {
            if r.gen_bool(0.35) {
                edges.push((i, j, q(r.gen_range(1..=4), 4)));
            }
        }
    }
    graph(m_l, m_s, 4, 4, &edges, 4, q(1, 2))
}

/// Fewest uncovered low S-clusters over every matching of `𝐇[𝓛,𝒮]`.
fn brute_min_uncovered(cg: &ClusterGraph, low: &[usize]) -> usize {
    let edges: Vec<(usize, usize)> = cg
        .l_ids()
        .into_iter()
        .flat_map(|l| cg.s_ids().into_iter().filter(move |&s| cg.adjacent(l, s)).map(move |s| (l, s)))
        .collect();
    fn rec(i: usize, edges: &[(usize, usize)], used: &mut Vec<bool>, low: &[usize], best: &mut usize) {
        if i == edges.len() {
            let unc = low.iter().filter(|&&s| !used[s]).count();
            *best = (*best).min(unc);
            return;
        }
        rec(i + 1, edges, used, low, best);
        let (l, s) = edges[i];
        if !used[l] && !used[s] {
            used[l] = true;
            used[s] = true;
            rec(i + 1, edges, used, low, best);
            used[l] = false;
            used[s] = false;
        }
    }
    let mut best = usize::MAX;
    rec(0, &edges, &mut vec![false; cg.len()], low, &mut best);
    best
}

/// Matched clusters on some alternating path of at most `max_len` vertices
/// starting in `s0`, by explicit path enumeration.
fn path_oracle(cg: &ClusterGraph, m: &[(usize, usize)], s0: &[usize], max_len: usize) -> Vec<usize> {
    let mut mate = vec![None; cg.len()];
    for &(l, s) in m {
        mate[l] = Some(s);
        mate[s] = Some(l);
    }
    let mut found = vec![false; cg.len()];
    fn walk(cg: &ClusterGraph, path: &mut Vec<usize>, mate: &[Option<usize>], found: &mut [bool], max_len: usize) {
        let last = *path.last().unwrap();
        if path.len() > 1 && mate[last].is_some() {
            found[last] = true;
        }
        if path.len() == max_len {
            return;
        }
        // odd positions (1-based) are S-clusters, even positions L-clusters
        let next: Vec<usize> = if path.len() % 2 == 1 {
            (0..cg.len()).filter(|&l| cg.is_l(l) && cg.adjacent(last, l) && mate[l].is_some()).collect()
        } else {
            mate[last].into_iter().collect()
        };
        for x in next {
            if !path.contains(&x) {
                path.push(x);
                walk(cg, path, mate, found, max_len);
                path.pop();
            }
        }
    }
    for &s in s0 {
        walk(cg, &mut vec![s], &mate, &mut found, max_len);
    }
    (0..cg.len()).filter(|&x| found[x]).collect()
}

fn is_matching(cg: &ClusterGraph, m: &[(usize, usize)]) -> bool {
    let mut used = vec![false; cg.len()];
    m.iter().all(|&(l, s)| {
        let ok = cg.is_l(l) && !cg.is_l(s) && cg.adjacent(l, s) && !used[l] && !used[s];
        used[l] = true;
        used[s] = true;
        ok
    })
}

#[test]
fn matching_examples() {
    let cg = graph(3, 2, 4, 4, &[(0, 1, q(1, 2))], 1, q(1, 2));
    assert!(matching_max_cover(&cg, &q(5, 1)).is_empty());
    let cg = graph(3, 2, 4, 4, &[(0, 1, q(1, 2)), (2, 4, q(1, 4))], 1, q(1, 2));
    assert_eq!(matching_max_cover(&cg, &q(5, 1)), vec![(2, 4)]);
}

#[test]
fn reachability_examples() {
    // L0–S3 matched, S4 unmatched and low, S4–L0 edge: S4 L0 S3 is alternating
    let cg = graph(3, 2, 4, 4, &[(0, 3, q(1, 2)), (0, 4, q(1, 2)), (1, 2, q(1, 2))], 1, q(1, 2));
    let m = vec![(0, 3)];
    let r = alternating_reachability(&cg, &m, &[]);
    assert!(r.b_side.is_empty());
    assert_eq!(r.a_side, vec![0, 3]);
    let r = alternating_reachability(&cg, &m, &[4]);
    assert_eq!(r.b_side, vec![0, 3]);
    assert_eq!((r.l_b.clone(), r.s_b.clone()), (vec![0], vec![3]));
    assert_eq!(r.l_a, vec![1, 2]);
    assert!(r.a_side.is_empty() && r.s_a.is_empty());
}

#[test]
fn matching_is_optimal_on_small_instances() {
    for seed in 0..60 {
        let cg = loose_graph(seed, 12);
        let thr = q(3, 1);
        let m = matching_max_cover(&cg, &thr);
        assert!(is_matching(&cg, &m));
        let low = low_s(&cg, &thr);
        let unc = low.iter().filter(|s| !m.iter().any(|e| e.1 == **s)).count();
        assert_eq!(unc, brute_min_uncovered(&cg, &low), "seed {seed}");
    }
}

#[test]
fn reachability_matches_path_enumeration() {
    for seed in 0..100 {
        let cg = loose_graph(1000 + seed, 8);
        let thr = q(3, 1);
        let m = matching_max_cover(&cg, &thr);
        let s0: Vec<usize> = low_s(&cg, &thr).into_iter().filter(|s| !m.iter().any(|e| e.1 == *s)).collect();
        let r = alternating_reachability(&cg, &m, &s0);
        assert_eq!(r.b_side, path_oracle(&cg, &m, &s0, 8), "seed {seed}");
    }
}

#[test]
fn all_l_graph_gives_c() {
    // four L-clusters of size 10, complete pairs: deḡ(L_i) = 30 ≥ (1+1/10)·27
    let edges: Vec<(usize, usize, Q)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, q(1, 1)))).collect();
    let cg = graph(4, 0, 10, 10, &edges, 27, q(1, 3));
    let stats = TreeStats { a1: 0, a2: 0, b1: 9, b2: 18, r_tilde: q(1, 3) };
    let w = find_configuration(&cg, &stats, &q(1, 10)).unwrap();
    assert_eq!((w.config, w.x, w.y), (Config::C, 0, 1));
    // C.degY: deḡ(L1, 𝓛) = 30 against b₁ + ηr′k/4 = 9 + 9/40
    let deg_y = w.inequalities.iter().find(|i| i.name == "C.degY").unwrap();
    assert_eq!((deg_y.lhs, deg_y.rhs), (q(30, 1), q(369, 40)));
    assert!(verify_witness(&cg, &stats, &w, &q(1, 10)));
}

#[test]
fn high_degree_matching_gives_a() {
    // L0..L3 complete among themselves, L0 joined to both S-clusters, L1–S4, L2–S5
    let one = q(1, 1);
    let mut edges: Vec<(usize, usize, Q)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, one))).collect();
    edges.extend([(0, 4, one), (0, 5, one), (1, 4, one), (2, 5, one)]);
    let cg = graph(4, 2, 10, 10, &edges, 27, q(1, 2));
    let stats = TreeStats { a1: 10, a2: 9, b1: 0, b2: 8, r_tilde: q(1, 3) };
    let w = find_configuration(&cg, &stats, &q(1, 10)).unwrap();
    assert_eq!((w.config, w.x, w.y), (Config::A, 0, 1));
    assert_eq!(w.s_m, vec![4, 5]);
    // A.degX: deḡ(L0, S_M) = 20 against a₂(1−r̃)/r̃ + ηk/4 = 18 + 27/40
    let deg_x = &w.inequalities[0];
    assert_eq!((deg_x.name.as_str(), deg_x.lhs, deg_x.rhs), ("A.degX", q(20, 1), q(747, 40)));
    assert!(verify_witness(&cg, &stats, &w, &q(1, 10)));
    let json = w.to_json();
    assert!(json.contains("\"lhs\": \"20/1\""));
    assert_eq!(serde_json::from_str::<ConfigWitness>(&json).unwrap(), w);
}

#[test]
fn verify_rejects_non_adjacent_pair() {
    let edges: Vec<(usize, usize, Q)> = vec![(0, 1, q(1, 1)), (1, 2, q(1, 1)), (0, 3, q(1, 1))];
    let cg = graph(4, 0, 10, 10, &edges, 8, q(1, 2));
    let stats = TreeStats { a1: 0, a2: 0, b1: 4, b2: 4, r_tilde: q(1, 2) };
    let mut w = find_configuration(&cg, &stats, &q(1, 10)).unwrap();
    assert!(verify_witness(&cg, &stats, &w, &q(1, 10)));
    w.y = 2;
    w.x = 0;
    assert!(!verify_witness(&cg, &stats, &w, &q(1, 10)));
}

#[test]
fn verify_rejects_d_with_matching_edge_in_neighbourhood() {
    let one = q(1, 1);
    let edges = [(0, 1, one), (0, 2, one), (1, 2, one), (1, 3, one), (0, 3, one)];
    let cg = graph(3, 1, 10, 10, &edges, 18, q(1, 2));
    let stats = TreeStats { a1: 17, a2: 1, b1: 0, b2: 0, r_tilde: q(1, 18) };
    let eta = q(1, 10);
    let ineq = |name: &str, lhs: Q, rhs: Q| Inequality { name: name.into(), lhs, rhs, strict: false };
    let common = |deg_x: Q, inside: usize| {
        vec![
            ineq("D.side", q(17, 18), q(17, 18)),
            ineq("D.b1", q(1, 17), q(0, 1)),
            ineq("D.degX", deg_x, q(369, 20)),
            ineq("D.degY", q(20, 1), q(9, 20)),
            ineq("D.matchingEdgesInNX", q(0, 1), qu(inside)),
        ]
    };
    let meta = WitnessMeta { matching: "given".into(), band: vec![] };
    let bad = ConfigWitness {
        config: Config::D,
        x: 0,
        y: 2,
        m: vec![(1, 3)],
        s_m: vec![3],
        s_1: vec![],
        s_0: vec![],
        inequalities: common(q(30, 1), 1),
        meta: meta.clone(),
    };
    assert!(!verify_witness(&cg, &stats, &bad, &eta));
    let good = ConfigWitness { m: vec![], s_m: vec![], s_1: vec![3], inequalities: common(q(20, 1), 0), ..bad };
    assert!(verify_witness(&cg, &stats, &good, &eta));
}

#[test]
fn invalid_input_rejected() {
    let cg = graph(3, 1, 10, 10, &[(0, 1, q(1, 1))], 5, q(1, 2));
    let bad_stats = TreeStats { a1: 0, a2: 1, b1: 1, b2: 0, r_tilde: q(1, 5) };
    assert!(matches!(find_configuration(&cg, &bad_stats, &q(1, 10)), Err(ConfigError::InvalidStats(_))));
    let stats = TreeStats { a1: 0, a2: 1, b1: 0, b2: 0, r_tilde: q(1, 5) };
    assert!(matches!(find_configuration(&cg, &stats, &q(1, 10)), Err(ConfigError::NotLks(_))));
}

#[test]
fn random_sweep_finds_verified_witnesses() {
    for seed in 0..200 {
        let inst = random_instance(seed, 6 + (seed as usize % 19));
        let w = find_configuration(&inst.cg, &inst.stats, &inst.eta).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(verify_witness(&inst.cg, &inst.stats, &w, &inst.eta), "seed {seed}");
        let again = find_configuration(&inst.cg, &inst.stats, &inst.eta).unwrap();
        assert_eq!(again.to_json(), w.to_json());
    }
}

#[test]
fn la_edges_to_high_l_imply_b_or_c() {
    // Conditional form of the L_A corollary: with no band clusters, any edge
    // from L_A to L* ∪ S_1 carries configuration B or C.
    let mut checked = 0;
    for seed in 0..200 {
        let inst = random_instance(seed, 6 + (seed as usize % 19));
        let ps = proof_sets(&inst.cg, &inst.stats, &inst.eta);
        if !ps.band.is_empty() {
            continue;
        }
        for &x in &ps.reach.l_a {
            for &y in ps.l_star.iter().chain(&ps.s_1) {
                if inst.cg.adjacent(x, y) {
                    let b = inequalities_at(&inst.cg, &inst.stats, &inst.eta, &ps, Config::B, x, y);
                    let c = inequalities_at(&inst.cg, &inst.stats, &inst.eta, &ps, Config::C, x, y);
                    assert!(b.iter().all(Inequality::holds) || c.iter().all(Inequality::holds), "seed {seed} ({x},{y})");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basic_props_hold(seed in 0u64..100_000, m in 6usize..25) {
        let inst = random_instance(seed, m);
        let ps = proof_sets(&inst.cg, &inst.stats, &inst.eta);
        prop_assert!(basic_props_violations(&inst.cg, &ps).is_empty());
        // S₁ and S₀ never overlap S_M, and the band is exactly the rest of the S-clusters
        let mut all: Vec<usize> = ps.s_m.iter().chain(&ps.s_0).chain(&ps.s_1).chain(&ps.band).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, inst.cg.s_ids());
    }

    #[test]
    fn witness_round_trip(seed in 0u64..100_000, m in 6usize..25) {
        let inst = random_instance(seed, m);
        let w = find_configuration(&inst.cg, &inst.stats, &inst.eta).unwrap();
        prop_assert!(verify_witness(&inst.cg, &inst.stats, &w, &inst.eta));
        prop_assert!(w.inequalities.iter().all(Inequality::holds));
    }
}
