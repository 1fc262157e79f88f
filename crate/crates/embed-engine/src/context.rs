//! Embedding state, the step trace and the shared pair-embedding helper.

use crate::EmbedError;
use lks_cluster::{ClusterGraph, SkewLksGraph};
use lks_config::Inequality;
use lks_core::rational::{qu, Q};
use lks_core::{EmbeddingCertificate, FixedBitSet, RootedTree};
use lks_regularity::{GreedyState, RegularityError, UltratypicalIndex};
use serde::{Deserialize, Serialize};

/// One operation of a run: the inequalities it checked and anything worth reporting.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: String,
    /// Checked exactly; a failing entry aborts the run.
    pub inequalities: Vec<Inequality>,
    /// Recorded for information only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<Inequality>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub(crate) fn ineq(name: impl Into<String>, lhs: Q, rhs: Q) -> Inequality {
    Inequality {
        name: name.into(),
        lhs,
        rhs,
        strict: false,
    }
}

/// A partial embedding of `tree` into `g.host` with its bookkeeping.
///
/// `occupied` is the image of `phi`; `reserved` is the union of live
/// reservation blocks. The two are disjoint.
#[derive(Clone, Debug)]
pub struct EmbedContext<'a> {
    pub g: &'a SkewLksGraph,
    pub cg: ClusterGraph,
    pub tree: &'a RootedTree,
    pub index: UltratypicalIndex,
    pub clusters: Vec<Vec<usize>>,
    pub cluster_of: Vec<Option<usize>>,
    pub phi: Vec<Option<usize>>,
    pub provenance: Vec<String>,
    pub occupied: FixedBitSet,
    pub reserved: FixedBitSet,
    pub trace: Vec<TraceStep>,
    /// Non-fatal findings, such as a class-2 image that is typical but not ultratypical.
    pub reports: Vec<String>,
}

impl<'a> EmbedContext<'a> {
    pub fn new(g: &'a SkewLksGraph, tree: &'a RootedTree) -> Self {
        let clusters = g.clusters();
        let index = UltratypicalIndex::new(&g.host, &clusters, &g.params.epsilon);
        EmbedContext {
            g,
            cg: g.cluster_graph(),
            tree,
            index,
            cluster_of: g.cluster_of(),
            clusters,
            phi: vec![None; tree.n()],
            provenance: vec![String::new(); tree.n()],
            occupied: FixedBitSet::with_capacity(g.host.n()),
            reserved: FixedBitSet::with_capacity(g.host.n()),
            trace: Vec::new(),
            reports: Vec::new(),
        }
    }

    /// Order of the LKS graph.
    pub fn n(&self) -> usize {
        self.g.order()
    }

    pub fn r(&self) -> Q {
        self.g.params.r
    }

    /// `(1−r)/r`.
    pub fn ratio(&self) -> Q {
        (Q::from_integer(1) - self.r()) / self.r()
    }

    pub fn set_of(&self, vs: &[usize]) -> FixedBitSet {
        self.g.host.set_of(vs)
    }

    /// Vertices of cluster `c` that are neither used, reserved nor in `u`.
    pub fn avail(&self, c: usize, u: &FixedBitSet) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.g.host.n());
        for &v in &self.clusters[c] {
            if !self.occupied.contains(v) && !self.reserved.contains(v) && !u.contains(v) {
                s.insert(v);
            }
        }
        s
    }

    pub fn ultratypical_in(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut s = set.clone();
        for v in set.ones() {
            if !self.index.is_ultratypical(v) {
                s.set(v, false);
            }
        }
        s
    }

    /// `φ` of the mapped vertices among `tv`.
    pub fn images<I: IntoIterator<Item = usize>>(&self, tv: I) -> Vec<usize> {
        tv.into_iter().filter_map(|t| self.phi[t]).collect()
    }

    pub fn image_set<I: IntoIterator<Item = usize>>(&self, tv: I) -> FixedBitSet {
        let imgs = self.images(tv);
        self.set_of(&imgs)
    }

    /// `|set ∩ C|`.
    pub fn count_in(&self, set: &FixedBitSet, c: usize) -> usize {
        self.clusters[c].iter().filter(|&&v| set.contains(v)).count()
    }

    /// `deg(v, C) ≥ (d(cluster(v), C) − ε)|C|`.
    pub fn typical_to(&self, v: usize, c: usize) -> bool {
        let Some(j) = self.cluster_of[v] else {
            return false;
        };
        let set = self.set_of(&self.clusters[c]);
        let need = (self.index.density(j, c) - self.g.params.epsilon) * qu(self.clusters[c].len());
        qu(self.g.host.deg_into(v, &set)) >= need
    }

    pub fn begin(&mut self, step: &str) {
        self.trace.push(TraceStep {
            step: step.to_string(),
            ..TraceStep::default()
        });
    }

    fn last(&mut self) -> &mut TraceStep {
        if self.trace.is_empty() {
            self.begin("unnamed");
        }
        self.trace.last_mut().expect("non-empty")
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.last().notes.push(s.into());
    }

    pub fn bound(&mut self, i: Inequality) {
        self.last().bounds.push(i);
    }

    /// Records every inequality and fails if any does not hold.
    pub fn require(&mut self, op: &str, list: Vec<Inequality>) -> Result<(), EmbedError> {
        let failed: Vec<Inequality> = list.iter().filter(|i| !i.holds()).cloned().collect();
        self.last().inequalities.extend(list);
        if failed.is_empty() {
            Ok(())
        } else {
            Err(EmbedError::Precondition { op: op.to_string(), failed })
        }
    }

    /// `|C ∖ (φ ∪ W ∪ U)| ≥ rη/8·|C|` for every cluster in `touched`.
    pub fn check_slack(&mut self, op: &str, touched: &[usize], u: &FixedBitSet, eta: &Q) -> Result<(), EmbedError> {
        let mut touched = touched.to_vec();
        touched.sort_unstable();
        touched.dedup();
        let list: Vec<Inequality> = touched
            .iter()
            .map(|&c| {
                let free = self.avail(c, u).count_ones(..);
                let need = self.r() * eta / Q::from_integer(8) * qu(self.clusters[c].len());
                ineq(format!("{op}.slack[{c}]"), qu(free), need)
            })
            .collect();
        if let Some(bad) = list.iter().find(|i| !i.holds()) {
            let e = EmbedError::Slack {
                op: op.to_string(),
                cluster: touched[list.iter().position(|i| i == bad).expect("present")],
                detail: format!("{} < {}", bad.lhs, bad.rhs),
            };
            self.last().inequalities.extend(list);
            return Err(e);
        }
        self.last().inequalities.extend(list);
        debug_assert!(self.occupied.count_ones(..) + self.reserved.count_ones(..) <= self.g.host.n());
        Ok(())
    }

    pub fn assign(&mut self, t: usize, h: usize, tag: &str) {
        debug_assert!(!self.occupied.contains(h) && !self.reserved.contains(h));
        self.phi[t] = Some(h);
        self.provenance[t] = tag.to_string();
        self.occupied.insert(h);
    }

    /// Embeds `targets` with class `near_colour` into `pool_x` and the other
    /// class into `pool_y`, preferring ultratypical vertices.
    ///
    /// Commits on success and leaves the state untouched on failure. Returns
    /// the newly embedded tree vertices.
    pub fn try_pair(
        &mut self,
        targets: &[usize],
        near_colour: u8,
        pool_x: &FixedBitSet,
        pool_y: &FixedBitSet,
        tag: &str,
    ) -> Result<Vec<usize>, RegularityError> {
        let mut phi = self.phi.clone();
        let mut used = self.occupied.clone();
        used.union_with(&self.reserved);
        let (ux, uy) = (self.ultratypical_in(pool_x), self.ultratypical_in(pool_y));
        let mut state = GreedyState::new(&self.g.host, self.tree, near_colour, pool_x.clone(), pool_y.clone()).with_preferred(ux, uy);
        let fresh = state.embed(targets, &mut phi, &mut used)?;
        for &t in &fresh {
            let h = phi[t].expect("embedded");
            self.assign(t, h, tag);
        }
        Ok(fresh)
    }

    /// The finished certificate, if every tree vertex is mapped.
    pub fn certificate(&self) -> Option<EmbeddingCertificate> {
        let map: Option<Vec<usize>> = self.phi.iter().copied().collect();
        map.map(|map| EmbeddingCertificate {
            map,
            provenance: self.provenance.clone(),
        })
    }
}
