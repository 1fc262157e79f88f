//! Vertex-set pairs, densities and ε-regularity verdicts.

use crate::RegularityError;
use lks_core::rational::{ceil_usize, qu, Q};
use lks_core::{rng, FixedBitSet, Graph};
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Two disjoint nonempty vertex sets of one host graph.
#[derive(Clone, Debug)]
pub struct Pair<'g> {
    host: &'g Graph,
    x: Vec<usize>,
    y: Vec<usize>,
}

impl<'g> Pair<'g> {
    pub fn new(host: &'g Graph, x: Vec<usize>, y: Vec<usize>) -> Result<Self, RegularityError> {
        if x.is_empty() || y.is_empty() {
            return Err(RegularityError::EmptySide);
        }
        let xs = host.set_of(&x);
        for &v in x.iter().chain(&y) {
            if v >= host.n() {
                return Err(RegularityError::VertexOutOfRange(v));
            }
        }
        if let Some(&v) = y.iter().find(|&&v| xs.contains(v)) {
            return Err(RegularityError::Overlap(v));
        }
        Ok(Pair { host, x, y })
    }

    pub fn host(&self) -> &'g Graph {
        self.host
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn edge_count(&self) -> usize {
        edges_between(self.host, &self.x, &self.y)
    }

    /// `d(X,Y) = |E(X,Y)| / (|X||Y|)`.
    pub fn density(&self) -> Q {
        Q::new(self.edge_count() as i128, (self.x.len() * self.y.len()) as i128)
    }
}

/// `|E(X,Y)|` for disjoint sets.
pub fn edges_between(host: &Graph, xs: &[usize], ys: &[usize]) -> usize {
    let yset = host.set_of(ys);
    xs.iter().map(|&x| host.deg_into(x, &yset)).sum()
}

/// Density of two sets; errors on an empty side.
pub fn density_of(host: &Graph, xs: &[usize], ys: &[usize]) -> Result<Q, RegularityError> {
    if xs.is_empty() || ys.is_empty() {
        return Err(RegularityError::EmptySide);
    }
    Ok(Q::new(
        edges_between(host, xs, ys) as i128,
        (xs.len() * ys.len()) as i128,
    ))
}

/// Largest side for which exhaustive checking is permitted.
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Method {
    /// Exact; requires `min(|X|,|Y|) ≤ 16`.
    Exhaustive,
    /// Randomized witness search.
    Sampled { seed: u64, trials: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    #[serde(with = "lks_core::rational::serde_q")]
    pub density: Q,
    /// `d(X′,Y′) − d(X,Y)`.
    #[serde(with = "lks_core::rational::serde_q")]
    pub gap: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    #[serde(with = "lks_core::rational::serde_q")]
    pub epsilon: Q,
    pub regular: bool,
    pub witness: Option<Witness>,
    pub method: Method,
}

/// ε-regularity test for `p`.
///
/// The exhaustive method enumerates every subset of the smaller side; for each
/// one the extreme subsets of the other side of every admissible size are the
/// top or bottom vertices by degree, so the search is exact. The sampled method
/// draws subsets of size `⌈ε|·|⌉` or the full side and answers with the best
/// opposite subset of those two sizes; it only ever reports real witnesses.
/// For `ε ≥ 1` every pair is regular.
pub fn is_regular(p: &Pair, epsilon: &Q, method: Method) -> Result<RegularityVerdict, RegularityError> {
    if !epsilon.is_positive() {
        return Err(RegularityError::BadEpsilon);
    }
    let verdict = |witness: Option<Witness>| RegularityVerdict {
        epsilon: *epsilon,
        regular: witness.is_none(),
        witness,
        method,
    };
    if epsilon >= &Q::one() {
        return Ok(verdict(None));
    }
    let swap = p.x.len() > p.y.len();
    let (small, other) = if swap { (&p.y, &p.x) } else { (&p.x, &p.y) };
    let search = Search::new(p.host, small, other, epsilon);
    let found = match method {
        Method::Exhaustive => {
            if small.len() > EXHAUSTIVE_LIMIT {
                return Err(RegularityError::BudgetExceeded {
                    side: small.len(),
                    limit: EXHAUSTIVE_LIMIT,
                });
            }
            search.exhaustive()
        }
        Method::Sampled { seed, trials } => search.sampled(seed, trials),
    };
    Ok(verdict(found.map(|(a, b, density, gap)| {
        if swap {
            Witness { x: b, y: a, density, gap }
        } else {
            Witness { x: a, y: b, density, gap }
        }
    })))
}

/// Checks a claimed witness from scratch.
pub fn witness_is_valid(p: &Pair, epsilon: &Q, w: &Witness) -> bool {
    let xs: std::collections::BTreeSet<usize> = p.x.iter().copied().collect();
    let ys: std::collections::BTreeSet<usize> = p.y.iter().copied().collect();
    let distinct = |v: &[usize]| v.iter().collect::<std::collections::BTreeSet<_>>().len() == v.len();
    if !distinct(&w.x) || !distinct(&w.y) {
        return false;
    }
    if !w.x.iter().all(|v| xs.contains(v)) || !w.y.iter().all(|v| ys.contains(v)) {
        return false;
    }
    if qu(w.x.len()) < epsilon * qu(p.x.len()) || qu(w.y.len()) < epsilon * qu(p.y.len()) {
        return false;
    }
    let Ok(d) = density_of(p.host, &w.x, &w.y) else {
        return false;
    };
    let gap = d - p.density();
    d == w.density && gap == w.gap && gap.abs() > *epsilon
}

/// Witness search over (`small`, `other`) in index space.
struct Search<'a> {
    small: &'a [usize],
    other: &'a [usize],
    /// Neighbours in `small` of each `other` vertex, as index bitsets.
    nb: Vec<FixedBitSet>,
    edges: i128,
    epsilon: Q,
    min_small: usize,
    min_other: usize,
}

type Found = (Vec<usize>, Vec<usize>, Q, Q);

impl<'a> Search<'a> {
    fn new(host: &Graph, small: &'a [usize], other: &'a [usize], epsilon: &Q) -> Self {
        let nb: Vec<FixedBitSet> = other
            .iter()
            .map(|&o| {
                let mut s = FixedBitSet::with_capacity(small.len());
                for (i, &v) in small.iter().enumerate() {
                    if host.has_edge(o, v) {
                        s.insert(i);
                    }
                }
                s
            })
            .collect();
        let edges = nb.iter().map(|s| s.count_ones(..) as i128).sum();
        Search {
            small,
            other,
            nb,
            edges,
            epsilon: *epsilon,
            min_small: ceil_usize(&(epsilon * qu(small.len()))).max(1),
            min_other: ceil_usize(&(epsilon * qu(other.len()))).max(1),
        }
    }

    /// Gap numerator over common denominator `s·t·|S||O|`, for comparisons.
    fn gap(&self, sum: usize, s: usize, t: usize) -> Q {
        let total = (self.small.len() * self.other.len()) as i128;
        Q::new(sum as i128, (s * t) as i128) - Q::new(self.edges, total)
    }

    /// Degrees of `other` vertices into the chosen small subset.
    fn degrees(&self, chosen: &FixedBitSet) -> Vec<usize> {
        self.nb.iter().map(|s| s.intersection_count(chosen)).collect()
    }

    /// Best opposite subset among sizes in `sizes`, top or bottom by degree.
    fn best_response(&self, chosen: &FixedBitSet, sizes: &[usize]) -> Option<(Vec<usize>, Q)> {
        let s = chosen.count_ones(..);
        let deg = self.degrees(chosen);
        let mut order: Vec<usize> = (0..self.other.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(deg[i]), i));
        let mut best: Option<(Vec<usize>, Q)> = None;
        for &t in sizes {
            let top: usize = order[..t].iter().map(|&i| deg[i]).sum();
            let bottom: usize = order[order.len() - t..].iter().map(|&i| deg[i]).sum();
            for (sum, pick) in [(top, &order[..t]), (bottom, &order[order.len() - t..])] {
                let g = self.gap(sum, s, t);
                if g.abs() > self.epsilon && best.as_ref().is_none_or(|(_, b)| g.abs() > b.abs()) {
                    let mut ids: Vec<usize> = pick.iter().map(|&i| self.other[i]).collect();
                    ids.sort_unstable();
                    best = Some((ids, g));
                }
            }
        }
        best
    }

    fn finish(&self, chosen: &FixedBitSet, ys: Vec<usize>, gap: Q) -> Found {
        let xs: Vec<usize> = chosen.ones().map(|i| self.small[i]).collect();
        let total = (self.small.len() * self.other.len()) as i128;
        let density = gap + Q::new(self.edges, total);
        (xs, ys, density, gap)
    }

    /// Exact search; returns the witness of largest `|gap|` (first in mask order on ties).
    fn exhaustive(&self) -> Option<Found> {
        let s_len = self.small.len();
        let o_len = self.other.len();
        let total = (s_len * o_len) as i128;
        let (ea, eb) = (*self.epsilon.numer(), *self.epsilon.denom());
        let mut best: Option<(u32, usize, bool, Q)> = None;
        let mut hist = vec![0usize; s_len + 1];
        for mask in 1u32..(1u32 << s_len) {
            let s = mask.count_ones() as usize;
            if s < self.min_small {
                continue;
            }
            hist.iter_mut().for_each(|h| *h = 0);
            for set in &self.nb {
                let m = set.as_slice().first().copied().unwrap_or(0) as u32 & mask;
                hist[m.count_ones() as usize] += 1;
            }
            // Walk degrees from high to low (top) and low to high (bottom).
            for top in [true, false] {
                let mut sum = 0i128;
                let mut t = 0usize;
                let degs: Box<dyn Iterator<Item = usize>> = if top {
                    Box::new((0..=s).rev())
                } else {
                    Box::new(0..=s)
                };
                for dgr in degs {
                    for _ in 0..hist[dgr] {
                        sum += dgr as i128;
                        t += 1;
                        if t < self.min_other {
                            continue;
                        }
                        // |sum/(s t) − E/total| > a/b  ⇔  b·|sum·total − E·s·t| > a·s·t·total
                        let st = (s * t) as i128;
                        let diff = sum * total - self.edges * st;
                        if eb * diff.abs() > ea * st * total {
                            let g = Q::new(diff, st * total);
                            if best.as_ref().is_none_or(|b| g.abs() > b.3.abs()) {
                                best = Some((mask, t, top, g));
                            }
                        }
                    }
                }
            }
        }
        let (mask, t, top, gap) = best?;
        let mut chosen = FixedBitSet::with_capacity(s_len);
        for i in 0..s_len {
            if mask >> i & 1 == 1 {
                chosen.insert(i);
            }
        }
        let deg = self.degrees(&chosen);
        let mut order: Vec<usize> = (0..o_len).collect();
        if top {
            order.sort_by_key(|&i| (std::cmp::Reverse(deg[i]), i));
        } else {
            order.sort_by_key(|&i| (deg[i], i));
        }
        let mut ys: Vec<usize> = order[..t].iter().map(|&i| self.other[i]).collect();
        ys.sort_unstable();
        Some(self.finish(&chosen, ys, gap))
    }

    fn sampled(&self, seed: u64, trials: usize) -> Option<Found> {
        let mut r = rng(seed);
        let s_len = self.small.len();
        let sizes_other = dedup(vec![self.min_other, self.other.len()]);
        let sizes_small = dedup(vec![self.min_small, s_len]);
        let mut idx: Vec<usize> = (0..s_len).collect();
        for _ in 0..trials {
            let s = sizes_small[r.gen_range(0..sizes_small.len())];
            idx.shuffle(&mut r);
            let mut chosen = FixedBitSet::with_capacity(s_len);
            for &i in &idx[..s] {
                chosen.insert(i);
            }
            if let Some((ys, gap)) = self.best_response(&chosen, &sizes_other) {
                return Some(self.finish(&chosen, ys, gap));
            }
        }
        None
    }
}

fn dedup(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}
