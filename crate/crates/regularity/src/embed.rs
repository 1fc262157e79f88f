//! Greedy embedding of trees into (subsets of) a regular pair.

use crate::pair::Pair;
use crate::typical::typical_vertices;
use crate::RegularityError;
use lks_core::rational::{qu, Q};
use lks_core::{EmbeddingCertificate, FixedBitSet, Graph, RootedTree};
use std::collections::VecDeque;

/// Working state for greedy embedding of tree vertices into two host pools.
///
/// Side 0 receives the tree colour class `x_class`, side 1 the other class.
/// Candidates for a tree vertex are the available vertices of its side adjacent
/// to the images of all its already-mapped tree neighbours; among them the
/// vertex with most available neighbours on the opposite side wins, ties by id.
#[derive(Clone, Debug)]
pub struct GreedyState<'a> {
    host: &'a Graph,
    tree: &'a RootedTree,
    x_class: u8,
    avail: [FixedBitSet; 2],
    preferred: Option<[FixedBitSet; 2]>,
    /// Images chosen outside the preferred sets.
    pub atypical: usize,
}

impl<'a> GreedyState<'a> {
    pub fn new(host: &'a Graph, tree: &'a RootedTree, x_class: u8, pool_x: FixedBitSet, pool_y: FixedBitSet) -> Self {
        GreedyState {
            host,
            tree,
            x_class,
            avail: [pool_x, pool_y],
            preferred: None,
            atypical: 0,
        }
    }

    /// Images are taken from these sets whenever possible.
    pub fn with_preferred(mut self, px: FixedBitSet, py: FixedBitSet) -> Self {
        self.preferred = Some([px, py]);
        self
    }

    pub fn side(&self, t: usize) -> usize {
        usize::from(self.tree.colour(t) != self.x_class)
    }

    pub fn available(&self, side: usize) -> &FixedBitSet {
        &self.avail[side]
    }

    fn score(&self, h: usize, side: usize) -> usize {
        self.host.deg_into(h, &self.avail[1 - side])
    }

    fn take(&mut self, t: usize, h: usize, phi: &mut [Option<usize>], used: &mut FixedBitSet) {
        phi[t] = Some(h);
        used.insert(h);
        self.avail[0].set(h, false);
        self.avail[1].set(h, false);
    }

    fn candidates(&self, t: usize, phi: &[Option<usize>]) -> (FixedBitSet, Vec<usize>) {
        let side = self.side(t);
        let mut c = self.avail[side].clone();
        let mut mapped = Vec::new();
        for nb in self.tree.neighbors(t) {
            if let Some(h) = phi[nb] {
                c.intersect_with(self.host.row(h));
                mapped.push(nb);
            }
        }
        (c, mapped)
    }

    fn stuck(&self, t: usize, mapped: Vec<usize>) -> RegularityError {
        let side = self.side(t);
        RegularityError::Stuck {
            vertex: t,
            mapped_neighbours: mapped,
            pool: self.avail[side].count_ones(..),
            opposite_pool: self.avail[1 - side].count_ones(..),
        }
    }

    /// Best candidate, preferring the preferred set; `None` if there is none.
    fn pick(&mut self, side: usize, cand: &FixedBitSet) -> Option<usize> {
        let best_in = |s: &Self, set: &mut dyn Iterator<Item = usize>| {
            set.map(|h| (s.score(h, side), h))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .map(|(_, h)| h)
        };
        if let Some(pref) = &self.preferred {
            let mut good = cand.clone();
            good.intersect_with(&pref[side]);
            if let Some(h) = best_in(self, &mut good.ones()) {
                return Some(h);
            }
        }
        let h = best_in(self, &mut cand.ones())?;
        if self.preferred.is_some() {
            self.atypical += 1;
        }
        Some(h)
    }

    fn place(&mut self, t: usize, phi: &mut [Option<usize>], used: &mut FixedBitSet) -> Result<(), RegularityError> {
        let (cand, mapped) = self.candidates(t, phi);
        let side = self.side(t);
        match self.pick(side, &cand) {
            Some(h) => {
                self.take(t, h, phi, used);
                Ok(())
            }
            None => Err(self.stuck(t, mapped)),
        }
    }

    /// Maps the path between two mapped vertices `u` and `v`.
    ///
    /// All but the last two internal vertices go greedily from `u`; the final
    /// two are an edge between the candidates of the one next to `u′` and the
    /// candidates of the one next to `v`.
    pub fn close_path(
        &mut self,
        u: usize,
        v: usize,
        phi: &mut [Option<usize>],
        used: &mut FixedBitSet,
    ) -> Result<(), RegularityError> {
        let path = self.tree.path_between(u, v);
        let internal = &path[1..path.len() - 1];
        match internal.len() {
            0 => {
                let (a, b) = (phi[u].expect("mapped"), phi[v].expect("mapped"));
                if self.host.has_edge(a, b) {
                    Ok(())
                } else {
                    Err(self.stuck(v, vec![u]))
                }
            }
            1 => self.place(internal[0], phi, used),
            len => {
                for &t in &internal[..len - 2] {
                    self.place(t, phi, used)?;
                }
                let (a, b) = (internal[len - 2], internal[len - 1]);
                let (ca, ma) = self.candidates(a, phi);
                let (cb, _) = self.candidates(b, phi);
                let (sa, sb) = (self.side(a), self.side(b));
                let pair = self.pick_edge(&ca, &cb, sa, sb, true).or_else(|| self.pick_edge(&ca, &cb, sa, sb, false));
                match pair {
                    Some((x, y, typical)) => {
                        if !typical {
                            self.atypical += 1;
                        }
                        self.take(a, x, phi, used);
                        self.take(b, y, phi, used);
                        Ok(())
                    }
                    None => Err(self.stuck(a, ma)),
                }
            }
        }
    }

    fn pick_edge(
        &self,
        ca: &FixedBitSet,
        cb: &FixedBitSet,
        sa: usize,
        sb: usize,
        typical_only: bool,
    ) -> Option<(usize, usize, bool)> {
        let (mut ca, mut cb) = (ca.clone(), cb.clone());
        if typical_only {
            let pref = self.preferred.as_ref()?;
            ca.intersect_with(&pref[sa]);
            cb.intersect_with(&pref[sb]);
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for x in ca.ones() {
            let mut ys = cb.clone();
            ys.intersect_with(self.host.row(x));
            for y in ys.ones() {
                if x == y {
                    continue;
                }
                let s = self.score(x, sa) + self.score(y, sb);
                if best.is_none_or(|(b, _, _)| s > b) {
                    best = Some((s, x, y));
                }
            }
        }
        best.map(|(_, x, y)| (x, y, typical_only || self.preferred.is_none()))
    }

    /// Embeds every unmapped vertex of `targets`.
    ///
    /// If exactly two targets are already mapped, the path between them is
    /// closed first. The rest is embedded in BFS order from the mapped
    /// vertices; a part with no mapped vertex starts at its smallest id.
    /// Returns the newly embedded tree vertices, sorted.
    pub fn embed(
        &mut self,
        targets: &[usize],
        phi: &mut [Option<usize>],
        used: &mut FixedBitSet,
    ) -> Result<Vec<usize>, RegularityError> {
        for s in 0..2 {
            self.avail[s].difference_with(used);
        }
        let mut in_target = FixedBitSet::with_capacity(self.tree.n());
        for &t in targets {
            in_target.insert(t);
        }
        let before: Vec<bool> = phi.iter().map(Option::is_some).collect();
        let pre: Vec<usize> = targets.iter().copied().filter(|&t| phi[t].is_some()).collect();
        if let [u, v] = pre[..] {
            self.close_path(u, v, phi, used)?;
        }
        let mut seeds: Vec<usize> = targets.iter().copied().filter(|&t| phi[t].is_some()).collect();
        for &t in targets {
            for nb in self.tree.neighbors(t) {
                if phi[nb].is_some() && !in_target.contains(nb) {
                    seeds.push(nb);
                }
            }
        }
        seeds.sort_unstable();
        seeds.dedup();
        let mut queue: VecDeque<usize> = seeds.into();
        let mut remaining: Vec<usize> = targets.to_vec();
        remaining.sort_unstable();
        let mut next_root = 0;
        loop {
            while let Some(m) = queue.pop_front() {
                for c in self.tree.neighbors(m) {
                    if in_target.contains(c) && phi[c].is_none() {
                        self.place(c, phi, used)?;
                        queue.push_back(c);
                    }
                }
            }
            while next_root < remaining.len() && phi[remaining[next_root]].is_some() {
                next_root += 1;
            }
            if next_root == remaining.len() {
                break;
            }
            let r = remaining[next_root];
            self.place(r, phi, used)?;
            queue.push_back(r);
        }
        let mut order: Vec<usize> = targets.iter().copied().filter(|&t| !before[t]).collect();
        order.sort_unstable();
        Ok(order)
    }
}

/// Input of [`embed_in_pair`].
#[derive(Clone, Debug)]
pub struct PairEmbedRequest<'a> {
    pub tree: &'a RootedTree,
    /// Colour of `F₁`, the class sent to `X′`.
    pub f1_colour: u8,
    pub pair: &'a Pair<'a>,
    pub xp: &'a [usize],
    pub yp: &'a [usize],
    /// Prescribed `(tree vertex, host vertex)` pairs, `|R| ≤ 2`, `R ⊆ F₁`.
    pub prescribed: &'a [(usize, usize)],
    pub epsilon: Q,
    pub alpha: Q,
    pub d: Q,
}

/// Named inequalities of the tree-into-pair lemma that fail for `req`.
pub fn pair_embed_violations(req: &PairEmbedRequest) -> Vec<String> {
    let mut bad = Vec::new();
    let host = req.pair.host();
    let (x, y) = (req.pair.x(), req.pair.y());
    let (eps, alpha, d) = (req.epsilon, req.alpha, req.d);
    let mut check = |ok: bool, name: &str| {
        if !ok {
            bad.push(name.to_string());
        }
    };
    let r = req.prescribed;
    check(r.len() <= 2, "|R| ≤ 2");
    check(r.iter().all(|&(t, _)| t < req.tree.n() && req.tree.colour(t) == req.f1_colour), "R ⊆ F₁");
    if let [(a, _), (b, _)] = r {
        check(a != b && req.tree.distance(*a, *b) != 2, "R has no common neighbour");
    }
    check(req.pair.density() >= d, "d(X,Y) ≥ d");
    check(d > alpha * Q::from_integer(3), "d > 3α");
    check(alpha > eps * Q::from_integer(2), "α > 2ε");
    let f1 = req.tree.class(req.f1_colour).len();
    let f2 = req.tree.n() - f1;
    check(qu(f1) <= eps * qu(x.len()), "|F₁| ≤ ε|X|");
    check(qu(f2) <= eps * qu(y.len()), "|F₂| ≤ ε|Y|");
    let two = Q::from_integer(2);
    check(qu(req.xp.len()) > two * eps / alpha * qu(x.len()), "|X′| > 2(ε/α)|X|");
    check(qu(req.yp.len()) > two * eps / alpha * qu(y.len()), "|Y′| > 2(ε/α)|Y|");
    let xs = host.set_of(x);
    let ys = host.set_of(y);
    check(req.xp.iter().all(|&v| xs.contains(v)), "X′ ⊆ X");
    check(req.yp.iter().all(|&v| ys.contains(v)), "Y′ ⊆ Y");
    let xps = host.set_of(req.xp);
    let yps = host.set_of(req.yp);
    check(r.iter().all(|&(_, h)| xps.contains(h)), "φ(R) ⊆ X′");
    let mut imgs: Vec<usize> = r.iter().map(|&(_, h)| h).collect();
    imgs.sort_unstable();
    imgs.dedup();
    check(imgs.len() == r.len(), "φ|R injective");
    check(
        r.iter().all(|&(_, h)| qu(host.deg_into(h, &yps)) > Q::from_integer(3) * eps * qu(y.len())),
        "deg(φ(r),Y′) > 3ε|Y|",
    );
    bad
}

/// Extends the prescribed map to an embedding with `φ(F₁) ⊆ X′`, `φ(F₂) ⊆ Y′`.
///
/// Non-prescribed vertices go to vertices typical with respect to the opposite
/// working set whenever one is available.
pub fn embed_in_pair(req: &PairEmbedRequest) -> Result<EmbeddingCertificate, RegularityError> {
    let bad = pair_embed_violations(req);
    if !bad.is_empty() {
        return Err(RegularityError::Precondition(bad));
    }
    let host = req.pair.host();
    let tree = req.tree;
    let typ_x = typical_vertices(req.pair, req.yp, &req.epsilon);
    let swapped = Pair::new(host, req.pair.y().to_vec(), req.pair.x().to_vec())?;
    let typ_y = typical_vertices(&swapped, req.xp, &req.epsilon);
    let mut used = FixedBitSet::with_capacity(host.n());
    let mut phi = vec![None; tree.n()];
    let mut state = GreedyState::new(host, tree, req.f1_colour, host.set_of(req.xp), host.set_of(req.yp))
        .with_preferred(host.set_of(&typ_x), host.set_of(&typ_y));
    for &(t, h) in req.prescribed {
        phi[t] = Some(h);
        used.insert(h);
    }
    let all: Vec<usize> = (0..tree.n()).collect();
    state.embed(&all, &mut phi, &mut used)?;
    let map: Vec<usize> = phi.into_iter().map(|h| h.expect("all embedded")).collect();
    let mut cert = EmbeddingCertificate::new(map, "pair");
    for &(t, _) in req.prescribed {
        cert.provenance[t] = "prescribed".into();
    }
    Ok(cert)
}
