//! The four-case embedding procedure.

use crate::context::{ineq, EmbedContext, TraceStep};
use crate::prop11::embed_anchored_matching;
use crate::prop12::{embed_anchored_degrees_cfg2, embed_anchored_degrees_complete, embed_anchored_degrees_reserve, Reservation};
use crate::split::{split_fgh, SplitFGH, SplitMode, SplitOrder};
use crate::EmbedError;
use lks_cluster::SkewLksGraph;
use lks_config::{verify_witness, Config, ConfigWitness, Inequality, TreeStats};
use lks_core::rational::{qu, sqrt_upper, Q};
use lks_core::{validate_embedding, EmbeddingCertificate, FixedBitSet, RootedTree};
use lks_regularity::GreedyState;
use lks_tree_decomp::{oriented_forests, verify_fine_partition, Component, FinePartition, Forests};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// A validated embedding together with the step ledger that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedOutcome {
    pub case: Config,
    pub certificate: EmbeddingCertificate,
    pub stats: TreeStats,
    pub trace: Vec<TraceStep>,
    pub reports: Vec<String>,
}

/// Tree statistics with `W_A` in class 1: `a1`/`a2` are the near/far counts of
/// `𝓓_A`, `b1`/`b2` those of `𝓓_B`, and `r̃ = (a2+b1)/k`.
pub fn engine_stats(forests: &Forests, k: usize) -> TreeStats {
    let c = forests.counts;
    TreeStats {
        a1: c.a1,
        a2: c.a2,
        b1: c.b1,
        b2: c.b2,
        r_tilde: Q::new((c.a2 + c.b1) as i128, k as i128),
    }
}

/// The side conditions of the chosen case, evaluated with margin `delta`.
pub fn case_hypotheses(g: &SkewLksGraph, stats: &TreeStats, w: &ConfigWitness, delta: &Q) -> Vec<Inequality> {
    let cg = g.cluster_graph();
    let k = qu(g.params.k);
    let rt = stats.r_tilde;
    let one = Q::one();
    let (a1, a2, b1) = (qu(stats.a1), qu(stats.a2), qu(stats.b1));
    let l = cg.l_ids();
    let (x, y) = (w.x, w.y);
    let sm1: Vec<usize> = w.s_m.iter().chain(&w.s_1).copied().collect();
    let sm1l: Vec<usize> = sm1.iter().chain(&l).copied().collect();
    let sml: Vec<usize> = w.s_m.iter().chain(&l).copied().collect();
    let deg_y = cg.degbar_to(y, &l);
    let adjacent = ineq("adjacent(A,B)", cg.density(x, y), Q::zero());
    let mut out = vec![Inequality { strict: true, ..adjacent }];
    match w.config {
        Config::A => {
            let base = if a2.is_zero() { Q::zero() } else { a2 * (one - rt) / rt };
            out.push(ineq("A.degA", cg.degbar_to(x, &sm1), base + delta * k));
            out.push(ineq("A.degB", deg_y, (rt + delta) * k));
        }
        Config::B => {
            out.push(ineq("B.side", rt * a1, (one - rt) * a2));
            out.push(ineq("B.degA", cg.degbar_to(x, &sm1l), (one + delta) * k));
            out.push(ineq("B.degB", deg_y, (rt + delta) * k));
        }
        Config::C => {
            out.push(ineq("C.side", (one - rt) * a2, rt * a1));
            out.push(ineq("C.degA", cg.degbar_to(x, &sm1l), (one + delta) * k));
            out.push(ineq("C.degB", deg_y, b1 + delta * k));
        }
        Config::D => {
            out.push(ineq("D.side", rt * a1, (one - rt) * a2));
            let cap = if rt == one { Q::zero() } else { rt * rt / (one - rt) * k };
            out.push(ineq("D.b1", cap, b1));
            out.push(ineq("D.degA", cg.degbar_to(x, &sml), (one + delta) * k));
            out.push(ineq("D.degB", deg_y, b1 + delta * k));
            let both = w
                .m
                .iter()
                .filter(|&&(l, s)| cg.adjacent(x, l) && cg.adjacent(x, s))
                .count();
            out.push(ineq("D.matchingEdgesInN(A)", Q::zero(), qu(both)));
        }
    }
    out
}

fn wrap(case: Config, step: &str) -> impl Fn(EmbedError) -> EmbedError + '_ {
    move |e| EmbedError::Step {
        case,
        step: step.to_string(),
        source: Box::new(e),
    }
}

type SeedTree = (Vec<usize>, Vec<(usize, usize)>);

/// A spanning tree on `W_A ∪ W_B` that contains every tree edge among them
/// and only joins `W_A` to `W_B`. Returns `None` when one side is empty and
/// there is more than one vertex.
fn seed_tree(tree: &RootedTree, wa: &[usize], wb: &[usize]) -> Option<SeedTree> {
    let verts: Vec<usize> = wa.iter().chain(wb).copied().collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut edges = Vec::new();
    for (i, &u) in verts.iter().enumerate() {
        for v in tree.neighbors(u) {
            if let Some(j) = verts.iter().position(|&x| x == v) {
                if i < j {
                    edges.push((i, j));
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    if verts.len() > 1 && (wa.is_empty() || wb.is_empty()) {
        return None;
    }
    let is_a = |i: usize| i < wa.len();
    loop {
        let root0 = find(&mut parent, 0);
        let joined: Vec<usize> = (0..verts.len()).filter(|&i| find(&mut parent, i) == root0).collect();
        if joined.len() == verts.len() {
            break;
        }
        let mut link = None;
        'outer: for i in 0..verts.len() {
            if find(&mut parent, i) == root0 {
                continue;
            }
            for &j in &joined {
                if is_a(i) != is_a(j) {
                    link = Some((i, j));
                    break 'outer;
                }
            }
        }
        let (i, j) = link?;
        edges.push((i.min(j), i.max(j)));
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a] = b;
    }
    Some((verts, edges))
}

/// Places `W_A` on ultratypical vertices of `a` and `W_B` on those of `b`.
fn seed(ctx: &mut EmbedContext, wa: &[usize], wb: &[usize], a: usize, b: usize) -> Result<(), EmbedError> {
    ctx.begin("seed");
    let none = FixedBitSet::with_capacity(ctx.g.host.n());
    let pa = ctx.ultratypical_in(&ctx.avail(a, &none));
    let pb = ctx.ultratypical_in(&ctx.avail(b, &none));
    let wav = wa.to_vec();
    let op = "seed";
    match seed_tree(ctx.tree, wa, wb) {
        Some((verts, edges)) => {
            let aux = RootedTree::from_edges(verts.len(), &edges, 0).map_err(|e| EmbedError::Invalid(e.to_string()))?;
            let x_class = if wa.is_empty() { 3 - aux.colour(0) } else { aux.colour(0) };
            let mut phi = vec![None; verts.len()];
            let mut used = ctx.occupied.clone();
            let mut st = GreedyState::new(&ctx.g.host, &aux, x_class, pa.clone(), pb.clone());
            let all: Vec<usize> = (0..verts.len()).collect();
            st.embed(&all, &mut phi, &mut used).map_err(|e| EmbedError::Stuck {
                op: op.into(),
                component: verts.clone(),
                detail: e.to_string(),
            })?;
            for (i, &t) in verts.iter().enumerate() {
                let tag = if i < wav.len() { "seed:W_A" } else { "seed:W_B" };
                ctx.assign(t, phi[i].expect("seeded"), tag);
            }
            ctx.note(format!("auxiliary tree with {} edges", edges.len()));
        }
        None => {
            let (list, pool, tag) = if wb.is_empty() { (wa, pa, "seed:W_A") } else { (wb, pb, "seed:W_B") };
            let mut free = pool.ones();
            for &t in list {
                let h = free.next().ok_or_else(|| EmbedError::Stuck {
                    op: op.into(),
                    component: list.to_vec(),
                    detail: "too few ultratypical vertices".into(),
                })?;
                ctx.assign(t, h, tag);
            }
        }
    }
    Ok(())
}

/// Components of `𝓓_B` plus its singletons, each with a single attach pair.
fn db_components(f: &Forests) -> Vec<Component> {
    let mut out = f.fb.components.clone();
    for d in &f.fb.deferred {
        out.push(Component {
            vertices: vec![d.vertex],
            anchors: d.anchors.clone(),
            attach: d.anchors.iter().map(|&a| (a, d.vertex)).collect(),
            near: 1,
            far: 0,
        });
    }
    out
}

fn comps_of(f: &Forests, ids: &[usize]) -> Vec<Component> {
    ids.iter().map(|&i| f.fa.components[i].clone()).collect()
}

fn vertices_of(comps: &[Component]) -> Vec<usize> {
    comps.iter().flat_map(|c| c.vertices.iter().copied()).collect()
}

fn far_vertices(tree: &RootedTree, comps: &[Component]) -> Vec<usize> {
    comps
        .iter()
        .flat_map(|c| {
            let anchor = tree.colour(c.anchors[0]);
            c.vertices.iter().copied().filter(move |&v| tree.colour(v) == anchor)
        })
        .collect()
}

fn union(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut s = a.clone();
    s.union_with(b);
    s
}

/// Embeds each `(leaf, parent)` greedily next to the image of its parent.
fn greedy_leaves(ctx: &mut EmbedContext, leaves: &[(usize, usize)]) -> Result<(), EmbedError> {
    let op = "leaves";
    ctx.begin(op);
    let eps = ctx.g.params.epsilon;
    let loss = Q::from_integer(2) * sqrt_upper(&eps) * qu(ctx.n()) / ctx.r();
    let k = qu(ctx.g.params.k);
    let mut parents: Vec<usize> = leaves.iter().map(|&(_, p)| p).collect();
    parents.sort_unstable();
    parents.dedup();
    let mut taken = union(&ctx.occupied, &ctx.reserved);
    let mut need_list = Vec::new();
    for &p in &parents {
        let h = ctx.phi[p].expect("parent mapped");
        let c = ctx.cluster_of[h].expect("clustered");
        ctx.bound(ineq(format!("leaves.ultratypicalDeg[{p}]"), ctx.cg.degbar_total(c) - loss, k));
        let pending = leaves.iter().filter(|&&(_, q)| q == p).count();
        let free = ctx.g.host.neighbors(h).iter().filter(|&&y| !taken.contains(y)).count();
        need_list.push(ineq(format!("leaves.free[{p}]"), qu(free), qu(pending)));
    }
    ctx.require(op, need_list)?;
    let parent_imgs: Vec<usize> = parents.iter().map(|&p| ctx.phi[p].expect("mapped")).collect();
    let mut remaining: Vec<usize> = leaves.iter().map(|&(_, p)| p).collect();
    for &(leaf, p) in leaves {
        let h = ctx.phi[p].expect("parent mapped");
        let pos = remaining.iter().position(|&x| x == p).expect("pending");
        remaining.swap_remove(pos);
        let pressure = |y: usize| {
            parent_imgs
                .iter()
                .zip(&parents)
                .filter(|&(&ph, q)| remaining.contains(q) && ctx.g.host.has_edge(ph, y))
                .count()
        };
        let best = ctx
            .g
            .host
            .neighbors(h)
            .iter()
            .copied()
            .filter(|&y| !taken.contains(y))
            .min_by_key(|&y| (!ctx.index.is_ultratypical(y), pressure(y), y));
        let Some(y) = best else {
            return Err(EmbedError::Stuck {
                op: op.into(),
                component: vec![leaf],
                detail: format!("parent {p} has no free neighbour"),
            });
        };
        ctx.assign(leaf, y, "greedy-leaf");
        taken.insert(y);
    }
    Ok(())
}

/// Runs the case script of `w` and returns a validated certificate.
///
/// `W_A` is taken in colour class 1; the partition sides are exchanged if needed.
pub fn master_embed(
    g: &SkewLksGraph,
    tree: &RootedTree,
    fp: &FinePartition,
    w: &ConfigWitness,
    delta: &Q,
) -> Result<EmbedOutcome, EmbedError> {
    let bad = verify_fine_partition(tree, fp);
    if let Some(v) = bad.first() {
        return Err(EmbedError::Invalid(format!("fine partition: {v}")));
    }
    if *delta <= Q::zero() {
        return Err(EmbedError::Invalid("δ must be positive".into()));
    }
    let forests = oriented_forests(fp, tree, 1).map_err(|e| EmbedError::Invalid(e.to_string()))?;
    let k = g.params.k;
    let stats = engine_stats(&forests, k);
    let cg = g.cluster_graph();
    if !verify_witness(&cg, &stats, w, &g.params.eta) {
        return Err(EmbedError::Invalid("witness does not verify".into()));
    }
    let mut ctx = EmbedContext::new(g, tree);
    ctx.begin("hypotheses");
    ctx.note(format!("stats a1={} a2={} b1={} b2={} r̃={}", stats.a1, stats.a2, stats.b1, stats.b2, stats.r_tilde));
    ctx.require("hypotheses", case_hypotheses(g, &stats, w, delta))?;
    let case = w.config;
    let (a, b) = (w.x, w.y);
    seed(&mut ctx, &forests.wa, &forests.wb, a, b).map_err(wrap(case, "seed"))?;
    let n = qu(ctx.n());
    let q = qu(k) / n;
    let rp = g.params.r;
    let rr = rp / (Q::one() - rp);
    let s_m = w.s_m.clone();
    let s_1 = w.s_1.clone();
    let l_ids = cg.l_ids();
    let deg_sm = cg.degbar_to(a, &s_m);
    let deg_s1 = cg.degbar_to(a, &s_1);
    let dk = delta * qu(k);
    let seeds: Vec<usize> = forests.wa.iter().chain(&forests.wb).copied().collect();
    let w_img = ctx.image_set(seeds.iter().copied());
    let db = db_components(&forests);
    let comps = &forests.fa.components;
    let mut leaves: Vec<(usize, usize)> = forests
        .fa
        .deferred
        .iter()
        .map(|d| (d.vertex, d.anchors[0]))
        .collect();
    let eta = |den: i128| q * delta / Q::from_integer(den);
    let three = Q::from_integer(3);
    match case {
        Config::A => {
            let cap_f = rr * (deg_sm - dk / Q::from_integer(2));
            let sp = split(&mut ctx, tree, comps, SplitMode::ByMatching { cap_f }, SplitOrder::Index);
            leaves.extend(&sp.trimmed);
            let step = "A.1:prop11(F')";
            embed_anchored_matching(&mut ctx, &sp.f_prime, a, &w.m, &w_img, &eta(4), step).map_err(wrap(case, step))?;
            let step = "A.1:cfg2(G')";
            let u = union(&w_img, &ctx.image_set(far_vertices(tree, &sp.f_prime)));
            embed_anchored_degrees_cfg2(&mut ctx, &sp.g_prime, a, &s_1, &u, &eta(4), step).map_err(wrap(case, step))?;
            let step = "A.2:cfg1-reserve(D_B)";
            let placed = vertices_of(&sp.f_prime).into_iter().chain(vertices_of(&sp.g_prime));
            let u = union(&w_img, &ctx.image_set(placed));
            let res = embed_anchored_degrees_reserve(&mut ctx, &db, b, &l_ids, &u, &eta(2), step).map_err(wrap(case, step))?;
            let step = "A.2:cfg1-complete(D_B)";
            complete(&mut ctx, &res, &[], step).map_err(wrap(case, step))?;
        }
        Config::B => {
            let cap_f = rr * (deg_sm - dk / three);
            let cap_g = rr * (deg_s1 - dk / three);
            let sp = split(&mut ctx, tree, comps, SplitMode::ByMatchingThenS1 { cap_f, cap_g }, SplitOrder::SkewDesc);
            leaves.extend(&sp.trimmed);
            let step = "B.1:prop11(F')";
            embed_anchored_matching(&mut ctx, &sp.f_prime, a, &w.m, &w_img, &eta(4), step).map_err(wrap(case, step))?;
            let step = "B.1:cfg2(G')";
            let u = union(&w_img, &ctx.image_set(far_vertices(tree, &sp.f_prime)));
            embed_anchored_degrees_cfg2(&mut ctx, &sp.g_prime, a, &s_1, &u, &eta(4), step).map_err(wrap(case, step))?;
            let step = "B.2:cfg1-reserve(D_B)";
            let fg2 = far_vertices(tree, &sp.f_prime).into_iter().chain(far_vertices(tree, &sp.g_prime));
            let u = union(&w_img, &ctx.image_set(fg2));
            let res = embed_anchored_degrees_reserve(&mut ctx, &db, b, &l_ids, &u, &eta(20), step).map_err(wrap(case, step))?;
            let step = "B.3:cfg1(H)";
            let h = comps_of(&forests, &sp.h);
            let placed = vertices_of(&sp.f_prime).into_iter().chain(vertices_of(&sp.g_prime));
            let u3 = union(&union(&w_img, &ctx.image_set(placed)), &res.u_prime(&ctx));
            let res_h = embed_anchored_degrees_reserve(&mut ctx, &h, a, &l_ids, &u3, &eta(4), step).map_err(wrap(case, step))?;
            complete(&mut ctx, &res_h, &[], &format!("{step}-complete")).map_err(wrap(case, step))?;
            let step = "B.4:cfg1-complete(D_B)";
            let h_img = ctx.image_set(vertices_of(&h));
            complete_with(&mut ctx, &res, &h_img, step).map_err(wrap(case, step))?;
        }
        Config::C | Config::D => {
            let step = if case == Config::C { "C.1:cfg1-reserve(D_B)" } else { "D.1:cfg1-reserve(D_B)" };
            let res = embed_anchored_degrees_reserve(&mut ctx, &db, b, &l_ids, &w_img, &eta(20), step).map_err(wrap(case, step))?;
            let u_prime = res.u_prime(&ctx);
            let u_size = qu(u_prime.count_ones(..));
            if case == Config::C {
                let cap_f = rr * deg_sm - u_size - rr * dk / three;
                let cap_g = rr * (deg_s1 - dk / three);
                let sp = split(&mut ctx, tree, comps, SplitMode::ByMatchingThenS1 { cap_f, cap_g }, SplitOrder::SkewDesc);
                leaves.extend(&sp.trimmed);
                let step = "C.2:prop11(F')";
                let u = union(&w_img, &u_prime);
                embed_anchored_matching(&mut ctx, &sp.f_prime, a, &w.m, &u, &eta(4), step).map_err(wrap(case, step))?;
                let step = "C.2:cfg2(G')";
                let u = union(&u, &ctx.image_set(far_vertices(tree, &sp.f_prime)));
                embed_anchored_degrees_cfg2(&mut ctx, &sp.g_prime, a, &s_1, &u, &eta(4), step).map_err(wrap(case, step))?;
                let step = "C.3:cfg1(H)";
                let h = comps_of(&forests, &sp.h);
                let placed = vertices_of(&sp.f_prime).into_iter().chain(vertices_of(&sp.g_prime));
                let u3 = union(&union(&w_img, &ctx.image_set(placed)), &u_prime);
                let res_h = embed_anchored_degrees_reserve(&mut ctx, &h, a, &l_ids, &u3, &eta(8), step).map_err(wrap(case, step))?;
                complete(&mut ctx, &res_h, &[], &format!("{step}-complete")).map_err(wrap(case, step))?;
                let step = "C.4:cfg1-complete(D_B)";
                let placed = vertices_of(&sp.f_prime)
                    .into_iter()
                    .chain(vertices_of(&sp.g_prime))
                    .chain(vertices_of(&h));
                let tilde = ctx.image_set(placed);
                complete_with(&mut ctx, &res, &tilde, step).map_err(wrap(case, step))?;
            } else {
                let mut u1 = FixedBitSet::with_capacity(g.host.n());
                let mut u2 = FixedBitSet::with_capacity(g.host.n());
                for v in u_prime.ones() {
                    let c = ctx.cluster_of[v].expect("clustered");
                    if cg.adjacent(a, c) {
                        u1.insert(v);
                    } else {
                        u2.insert(v);
                    }
                }
                let cap_f = rr * deg_sm - qu(u2.count_ones(..)) - rr * dk / Q::from_integer(2);
                let sp = split(&mut ctx, tree, comps, SplitMode::ByMatching { cap_f }, SplitOrder::SkewDesc);
                leaves.extend(sp.trimmed.iter().filter(|(v, _)| sp.f.iter().any(|&i| comps[i].vertices.contains(v))));
                let step = "D.2:prop11(F')";
                let m_a: Vec<(usize, usize)> = w.m.iter().copied().filter(|&(_, s)| cg.adjacent(a, s)).collect();
                let u = union(&w_img, &u2);
                embed_anchored_matching(&mut ctx, &sp.f_prime, a, &m_a, &u, &eta(3), step).map_err(wrap(case, step))?;
                let step = "D.3:cfg1(G)";
                let gc = comps_of(&forests, &sp.g);
                let b_set: Vec<usize> = l_ids.iter().copied().filter(|&c| cg.adjacent(a, c)).collect();
                let u3 = union(&union(&w_img, &ctx.image_set(vertices_of(&sp.f_prime))), &u_prime);
                let res_g = embed_anchored_degrees_reserve(&mut ctx, &gc, a, &b_set, &u3, &eta(4), step).map_err(wrap(case, step))?;
                complete(&mut ctx, &res_g, &[], &format!("{step}-complete")).map_err(wrap(case, step))?;
                let step = "D.4:cfg1-complete(D_B)";
                let placed = vertices_of(&sp.f_prime).into_iter().chain(vertices_of(&gc));
                let tilde = ctx.image_set(placed);
                complete_with(&mut ctx, &res, &tilde, step).map_err(wrap(case, step))?;
            }
        }
    }
    greedy_leaves(&mut ctx, &leaves).map_err(wrap(case, "leaves"))?;
    let cert = ctx
        .certificate()
        .ok_or_else(|| EmbedError::Invalid("some tree vertex was left unmapped".into()))?;
    if !validate_embedding(&cert, tree, &g.host) {
        return Err(EmbedError::Invalid("certificate fails validation".into()));
    }
    Ok(EmbedOutcome {
        case,
        certificate: cert,
        stats,
        trace: ctx.trace,
        reports: ctx.reports,
    })
}

fn split(ctx: &mut EmbedContext, tree: &RootedTree, comps: &[Component], mode: SplitMode, order: SplitOrder) -> SplitFGH {
    let sp = split_fgh(tree, comps, mode, order);
    ctx.begin("split");
    let caps = match mode {
        SplitMode::ByMatching { cap_f } => format!("cap_F={cap_f}"),
        SplitMode::ByMatchingThenS1 { cap_f, cap_g } => format!("cap_F={cap_f} cap_G={cap_g}"),
    };
    ctx.note(format!(
        "{caps}; |F|={} |G|={} |H|={} components; F₂={} G₂={} H₂={}",
        sp.f.len(),
        sp.g.len(),
        sp.h.len(),
        sp.f_counts.far,
        sp.g_counts.far,
        sp.h_counts.far
    ));
    sp
}

fn complete(ctx: &mut EmbedContext, res: &Reservation, tilde: &[usize], step: &str) -> Result<(), EmbedError> {
    let t = ctx.set_of(tilde);
    embed_anchored_degrees_complete(ctx, res, &t, step)
}

fn complete_with(ctx: &mut EmbedContext, res: &Reservation, tilde: &FixedBitSet, step: &str) -> Result<(), EmbedError> {
    embed_anchored_degrees_complete(ctx, res, tilde, step)
}
