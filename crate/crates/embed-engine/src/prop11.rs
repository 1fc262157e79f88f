//! Anchored forests into the edges of an L–S matching.

use crate::context::{ineq, EmbedContext};
use crate::EmbedError;
use lks_core::rational::{qu, Q};
use lks_core::FixedBitSet;
use lks_tree_decomp::Component;

/// `Σ_{(D,C)∈M} max{|X∩C|, (1−r)/r·|X∩D|}`.
fn matching_load(ctx: &EmbedContext, m: &[(usize, usize)], x: &FixedBitSet) -> Q {
    m.iter()
        .map(|&(l, s)| qu(ctx.count_in(x, s)).max(ctx.ratio() * qu(ctx.count_in(x, l))))
        .sum()
}

/// Targets handed to the greedy embedder: both anchors are included when
/// there are two, so the path between them is closed first.
pub(crate) fn targets(c: &Component) -> Vec<usize> {
    let mut t = c.vertices.clone();
    if c.anchors.len() == 2 {
        t.extend(&c.anchors);
    }
    t
}

/// Embeds every component with its near class in the S-cluster and its far
/// class in the L-cluster of one edge of `m`.
///
/// Anchors must already be mapped into cluster `a`. `u` is the declared
/// forbidden set of the degree condition; the embedding also avoids every
/// used or reserved vertex.
pub fn embed_anchored_matching(
    ctx: &mut EmbedContext,
    comps: &[Component],
    a: usize,
    m: &[(usize, usize)],
    u: &FixedBitSet,
    eta: &Q,
    step: &str,
) -> Result<(), EmbedError> {
    ctx.begin(step);
    if comps.is_empty() {
        ctx.note("empty forest");
        return Ok(());
    }
    let ratio = ctx.ratio();
    let s_m: Vec<usize> = m.iter().map(|&(_, s)| s).collect();
    let lhs = ctx.cg.degbar_to(a, &s_m);
    let eta_n = eta * qu(ctx.n());
    let far_total: usize = comps.iter().map(|c| c.far).sum();
    ctx.require(step, vec![ineq("prop11.deg", lhs, ratio * qu(far_total) + matching_load(ctx, m, u) + eta_n)])?;
    for (i, c) in comps.iter().enumerate() {
        if c.near > c.far {
            ctx.note(format!("component {i}: near {} > far {}", c.near, c.far));
        }
    }
    check_anchors(ctx, comps, a, step);
    let slack = |ctx: &EmbedContext, c: usize| ctx.r() * eta / Q::from_integer(8) * qu(ctx.clusters[c].len());
    let mut tilde = FixedBitSet::with_capacity(ctx.g.host.n());
    let mut far_done = 0;
    let mut touched = Vec::new();
    for (i, comp) in comps.iter().enumerate() {
        let anchor_imgs: Vec<usize> = comp.anchors.iter().map(|&x| ctx.phi[x].expect("anchor mapped")).collect();
        let mut cands: Vec<(bool, usize, usize, usize)> = Vec::new();
        for &(l, s) in m {
            let cx = ctx.avail(s, u);
            let dy = ctx.avail(l, u);
            if qu(cx.count_ones(..)) - qu(comp.near) < slack(ctx, s) || qu(dy.count_ones(..)) - qu(comp.far) < slack(ctx, l) {
                continue;
            }
            let score = anchor_imgs.iter().map(|&h| ctx.g.host.deg_into(h, &cx)).min().unwrap_or(0);
            if score == 0 {
                continue;
            }
            let typical = anchor_imgs.iter().all(|&h| ctx.typical_to(h, s));
            cands.push((typical, score, s, l));
        }
        cands.sort_by(|x, y| y.0.cmp(&x.0).then(y.1.cmp(&x.1)).then(x.2.cmp(&y.2)));
        let near_colour = 3 - ctx.tree.colour(comp.anchors[0]);
        let mut last = String::from("no matching edge has room");
        let mut placed = None;
        for &(typical, _, s, l) in &cands {
            let (px, py) = (ctx.avail(s, u), ctx.avail(l, u));
            match ctx.try_pair(&targets(comp), near_colour, &px, &py, step) {
                Ok(fresh) => {
                    if !typical {
                        ctx.note(format!("component {i}: anchors not typical to cluster {s}"));
                    }
                    placed = Some((s, l, fresh));
                    break;
                }
                Err(e) => last = e.to_string(),
            }
        }
        let Some((s, l, fresh)) = placed else {
            return Err(EmbedError::Stuck {
                op: step.to_string(),
                component: comp.vertices.clone(),
                detail: last,
            });
        };
        touched.extend([s, l]);
        for &t in &fresh {
            let h = ctx.phi[t].expect("embedded");
            tilde.insert(h);
            if ctx.tree.colour(t) != near_colour && !ctx.index.is_ultratypical(h) {
                ctx.reports.push(format!("{step}: far vertex {t} mapped to non-ultratypical {h}"));
            }
        }
        far_done += comp.far;
        let mut both = u.clone();
        both.union_with(&tilde);
        let rhs = ratio * qu(far_total - far_done) + matching_load(ctx, m, &both) + eta_n;
        ctx.require(step, vec![ineq(format!("prop11.running[{i}]"), lhs, rhs)])?;
    }
    ctx.check_slack(step, &touched, u, eta)
}

/// Reports anchors outside `a` or not ultratypical.
pub(crate) fn check_anchors(ctx: &mut EmbedContext, comps: &[Component], a: usize, step: &str) {
    let mut anchors: Vec<usize> = comps.iter().flat_map(|c| c.anchors.iter().copied()).collect();
    anchors.sort_unstable();
    anchors.dedup();
    for x in anchors {
        let h = ctx.phi[x].expect("anchor mapped");
        if ctx.cluster_of[h] != Some(a) {
            ctx.reports.push(format!("{step}: anchor {x} is not in cluster {a}"));
        } else if !ctx.index.is_ultratypical(h) {
            ctx.reports.push(format!("{step}: anchor {x} image {h} is not ultratypical"));
        }
    }
}
