//! Anchored forests through sets of high-degree clusters: reservation and
//! completion (configuration 1) and the direct variant (configuration 2).

use crate::context::{ineq, EmbedContext};
use crate::prop11::{check_anchors, targets};
use crate::EmbedError;
use lks_core::rational::{qu, Q};
use lks_core::FixedBitSet;
use lks_tree_decomp::Component;
use serde::{Deserialize, Serialize};

/// Reserved vertices `W_i` for one component, in the cluster of its attach images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub component: usize,
    pub cluster: usize,
    pub vertices: Vec<usize>,
}

/// Output of [`embed_anchored_degrees_reserve`], consumed by the completion.
#[derive(Clone, Debug)]
pub struct Reservation {
    pub comps: Vec<Component>,
    pub blocks: Vec<Block>,
    pub b_set: Vec<usize>,
    pub u: FixedBitSet,
    pub eta: Q,
}

impl Reservation {
    pub fn reserved_count(&self) -> usize {
        self.blocks.iter().map(|b| b.vertices.len()).sum()
    }

    /// `U′ = φ(N(R)) ∪ W`.
    pub fn u_prime(&self, ctx: &EmbedContext) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(ctx.g.host.n());
        for c in &self.comps {
            for &(_, v) in &c.attach {
                if let Some(h) = ctx.phi[v] {
                    s.insert(h);
                }
            }
        }
        for b in &self.blocks {
            for &v in &b.vertices {
                s.insert(v);
            }
        }
        s
    }
}

fn near_count(comps: &[Component]) -> usize {
    comps.iter().map(|c| c.near).sum()
}

fn far_count(comps: &[Component]) -> usize {
    comps.iter().map(|c| c.far).sum()
}

fn union_of(ctx: &EmbedContext, set: &[usize]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(ctx.g.host.n());
    for &c in set {
        for &v in &ctx.clusters[c] {
            s.insert(v);
        }
    }
    s
}

fn slack(ctx: &EmbedContext, eta: &Q, c: usize) -> Q {
    ctx.r() * eta / Q::from_integer(8) * qu(ctx.clusters[c].len())
}

/// Maps `N(R)` into ultratypical vertices of clusters in `b_set` and reserves,
/// next to them, one vertex for every other near-class vertex of the component.
pub fn embed_anchored_degrees_reserve(
    ctx: &mut EmbedContext,
    comps: &[Component],
    a: usize,
    b_set: &[usize],
    u: &FixedBitSet,
    eta: &Q,
    step: &str,
) -> Result<Reservation, EmbedError> {
    ctx.begin(step);
    let mut res = Reservation {
        comps: comps.to_vec(),
        blocks: Vec::new(),
        b_set: b_set.to_vec(),
        u: u.clone(),
        eta: *eta,
    };
    if comps.is_empty() {
        ctx.note("empty forest");
        return Ok(res);
    }
    let mut in_b = union_of(ctx, b_set);
    in_b.intersect_with(u);
    let lhs = ctx.cg.degbar_to(a, b_set);
    let rhs = qu(near_count(comps)) + qu(in_b.count_ones(..)) + eta * qu(ctx.n());
    ctx.require(step, vec![ineq("cfg1.degA", lhs, rhs)])?;
    check_anchors(ctx, comps, a, step);
    let mut touched = Vec::new();
    for (i, comp) in comps.iter().enumerate() {
        let anchor_imgs: Vec<usize> = comp.attach.iter().map(|&(x, _)| ctx.phi[x].expect("anchor mapped")).collect();
        let mut cands: Vec<(bool, usize, usize)> = Vec::new();
        for &b in b_set {
            let avail = ctx.avail(b, u);
            if qu(avail.count_ones(..)) - qu(comp.near) < slack(ctx, eta, b) {
                continue;
            }
            let ut = ctx.ultratypical_in(&avail);
            let score = anchor_imgs.iter().map(|&h| ctx.g.host.deg_into(h, &ut)).min().unwrap_or(0);
            if score < comp.attach.len() {
                continue;
            }
            let typical = anchor_imgs.iter().all(|&h| ctx.typical_to(h, b));
            cands.push((typical, score, b));
        }
        cands.sort_by(|x, y| y.0.cmp(&x.0).then(y.1.cmp(&x.1)).then(x.2.cmp(&y.2)));
        let Some(&(typical, _, b)) = cands.first() else {
            return Err(EmbedError::Stuck {
                op: step.to_string(),
                component: comp.vertices.clone(),
                detail: "no cluster of 𝓑 has room next to the anchors".into(),
            });
        };
        if !typical {
            ctx.note(format!("component {i}: anchors not typical to cluster {b}"));
        }
        let mut everything = ctx.occupied.clone();
        everything.union_with(&ctx.reserved);
        everything.union_with(u);
        everything.toggle_range(..);
        for &(x, v) in &comp.attach {
            let ut = ctx.ultratypical_in(&ctx.avail(b, u));
            let h = ctx.phi[x].expect("anchor mapped");
            let best = ut
                .ones()
                .filter(|&y| ctx.g.host.has_edge(h, y))
                .max_by_key(|&y| (ctx.g.host.deg_into(y, &everything), std::cmp::Reverse(y)));
            let Some(y) = best else {
                return Err(EmbedError::Stuck {
                    op: step.to_string(),
                    component: comp.vertices.clone(),
                    detail: format!("anchor {x} has no free ultratypical neighbour in cluster {b}"),
                });
            };
            ctx.assign(v, y, step);
            everything.set(y, false);
        }
        let need = comp.near - comp.attach.len();
        let avail = ctx.avail(b, u);
        let ut = ctx.ultratypical_in(&avail);
        let mut picks: Vec<usize> = ut.ones().take(need).collect();
        if picks.len() < need {
            picks.extend(avail.ones().filter(|v| !ut.contains(*v)).take(need - picks.len()));
        }
        if picks.len() < need {
            return Err(EmbedError::Stuck {
                op: step.to_string(),
                component: comp.vertices.clone(),
                detail: format!("cluster {b} cannot hold a reservation of {need}"),
            });
        }
        for &v in &picks {
            ctx.reserved.insert(v);
        }
        res.blocks.push(Block {
            component: i,
            cluster: b,
            vertices: picks,
        });
        touched.push(b);
    }
    ctx.note(format!("reserved {} vertices", res.reserved_count()));
    ctx.check_slack(step, &touched, u, eta)?;
    Ok(res)
}

/// Releases each block and embeds the rest of its component with the near
/// class in the block's cluster and the far class in one neighbouring cluster.
pub fn embed_anchored_degrees_complete(
    ctx: &mut EmbedContext,
    res: &Reservation,
    tilde_u: &FixedBitSet,
    step: &str,
) -> Result<(), EmbedError> {
    ctx.begin(step);
    if res.comps.is_empty() {
        ctx.note("empty forest");
        return Ok(());
    }
    let eta = res.eta;
    let mut both = res.u.clone();
    both.union_with(tilde_u);
    let size = qu(near_count(&res.comps) + far_count(&res.comps));
    let mut list = Vec::new();
    let mut hosts: Vec<usize> = res.blocks.iter().map(|b| b.cluster).collect();
    hosts.sort_unstable();
    hosts.dedup();
    for &b in &hosts {
        let rhs = size + qu(both.count_ones(..)) + eta * qu(ctx.n());
        list.push(ineq(format!("cfg1.complete.deg[{b}]"), ctx.cg.degbar_total(b), rhs));
    }
    let mut tilde_clusters: Vec<usize> = tilde_u.ones().filter_map(|v| ctx.cluster_of[v]).collect();
    tilde_clusters.sort_unstable();
    tilde_clusters.dedup();
    for &c in &tilde_clusters {
        let free = ctx.avail(c, &both).count_ones(..);
        list.push(ineq(format!("cfg1.complete.tildeSlack[{c}]"), qu(free), slack(ctx, &eta, c)));
    }
    ctx.require(step, list)?;
    let mut touched = Vec::new();
    for block in &res.blocks {
        let comp = &res.comps[block.component];
        for &v in &block.vertices {
            ctx.reserved.set(v, false);
        }
        if comp.vertices.len() == comp.attach.len() {
            continue;
        }
        let b = block.cluster;
        let starts: Vec<usize> = comp.attach.iter().map(|&(_, v)| ctx.phi[v].expect("attach mapped")).collect();
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for &d in ctx.cg.neighbors(b) {
            let avail = ctx.avail(d, &both);
            let score = starts.iter().map(|&h| ctx.g.host.deg_into(h, &avail)).min().unwrap_or(0);
            if qu(score) < qu(comp.far) + slack(ctx, &eta, d) || score == 0 {
                continue;
            }
            cands.push((score, d));
        }
        cands.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let near_colour = ctx.tree.colour(comp.attach[0].1);
        let px = ctx.avail(b, &both);
        let mut last = String::from("no neighbouring cluster has room");
        let mut done = None;
        for &(_, d) in &cands {
            let py = ctx.avail(d, &both);
            match ctx.try_pair(&comp.vertices, near_colour, &px, &py, step) {
                Ok(_) => {
                    done = Some(d);
                    break;
                }
                Err(e) => last = e.to_string(),
            }
        }
        let Some(d) = done else {
            return Err(EmbedError::Stuck {
                op: step.to_string(),
                component: comp.vertices.clone(),
                detail: last,
            });
        };
        touched.extend([b, d]);
    }
    ctx.check_slack(step, &touched, &both, &eta)
}

/// Near class into clusters of `b_set`, far class into ultratypical vertices
/// of their neighbours outside `b_set`.
pub fn embed_anchored_degrees_cfg2(
    ctx: &mut EmbedContext,
    comps: &[Component],
    a: usize,
    b_set: &[usize],
    u: &FixedBitSet,
    eta: &Q,
    step: &str,
) -> Result<(), EmbedError> {
    ctx.begin(step);
    if comps.is_empty() {
        ctx.note("empty forest");
        return Ok(());
    }
    let eta_n = eta * qu(ctx.n());
    let mut in_b = union_of(ctx, b_set);
    in_b.intersect_with(u);
    let mut list = vec![ineq(
        "cfg2.degA",
        ctx.cg.degbar_to(a, b_set),
        qu(near_count(comps)) + qu(in_b.count_ones(..)) + eta_n,
    )];
    let outside: Vec<usize> = (0..ctx.cg.len()).filter(|c| !b_set.contains(c)).collect();
    for &b in b_set {
        list.push(ineq(
            format!("cfg2.out[{b}]"),
            ctx.cg.degbar_to(b, &outside),
            qu(far_count(comps)) + qu(u.count_ones(..)) + eta_n,
        ));
    }
    ctx.require(step, list)?;
    check_anchors(ctx, comps, a, step);
    let mut touched = Vec::new();
    for (i, comp) in comps.iter().enumerate() {
        let anchor_imgs: Vec<usize> = comp.anchors.iter().map(|&x| ctx.phi[x].expect("anchor mapped")).collect();
        let mut cands: Vec<(bool, usize, usize, usize, usize)> = Vec::new();
        for &b in b_set {
            let bx = ctx.avail(b, u);
            if qu(bx.count_ones(..)) - qu(comp.near) < slack(ctx, eta, b) {
                continue;
            }
            let score = anchor_imgs.iter().map(|&h| ctx.g.host.deg_into(h, &bx)).min().unwrap_or(0);
            if score == 0 {
                continue;
            }
            let typical = anchor_imgs.iter().all(|&h| ctx.typical_to(h, b));
            for &d in ctx.cg.neighbors(b) {
                if b_set.contains(&d) {
                    continue;
                }
                let dy = ctx.ultratypical_in(&ctx.avail(d, u));
                if qu(dy.count_ones(..)) - qu(comp.far) < slack(ctx, eta, d) {
                    continue;
                }
                cands.push((typical, score, dy.count_ones(..), b, d));
            }
        }
        cands.sort_by(|x, y| {
            y.0.cmp(&x.0)
                .then(y.1.cmp(&x.1))
                .then(y.2.cmp(&x.2))
                .then((x.3, x.4).cmp(&(y.3, y.4)))
        });
        let near_colour = 3 - ctx.tree.colour(comp.anchors[0]);
        let mut last = String::from("no cluster pair has room");
        let mut placed = None;
        for &(typical, _, _, b, d) in &cands {
            let px = ctx.avail(b, u);
            let py = ctx.ultratypical_in(&ctx.avail(d, u));
            match ctx.try_pair(&targets(comp), near_colour, &px, &py, step) {
                Ok(_) => {
                    if !typical {
                        ctx.note(format!("component {i}: anchors not typical to cluster {b}"));
                    }
                    placed = Some((b, d));
                    break;
                }
                Err(e) => last = e.to_string(),
            }
        }
        let Some((b, d)) = placed else {
            return Err(EmbedError::Stuck {
                op: step.to_string(),
                component: comp.vertices.clone(),
                detail: last,
            });
        };
        touched.extend([b, d]);
    }
    ctx.check_slack(step, &touched, u, eta)
}
