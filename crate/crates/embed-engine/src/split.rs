//! Cutting the components of `𝓓_A` into `𝓕`, `𝓖`, `𝓗` and trimming near-class leaves.

use lks_core::rational::{qu, Q};
use lks_core::RootedTree;
use lks_tree_decomp::Component;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMode {
    /// `𝓕` takes a maximal prefix with `|𝓕₂| ≤ cap_f`; the rest is `𝓖`.
    ByMatching { cap_f: Q },
    /// As above for `𝓕`, then `𝓖` is the next maximal run with `|𝓖₂| ≤ cap_g`; the rest is `𝓗`.
    ByMatchingThenS1 { cap_f: Q, cap_g: Q },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitOrder {
    Index,
    /// `near/far` descending, ties by index.
    SkewDesc,
}

/// Near (anchor-neighbour class) and far (anchor class) vertex counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartCounts {
    pub near: usize,
    pub far: usize,
}

impl PartCounts {
    fn of<'c, I: IntoIterator<Item = &'c Component>>(it: I) -> Self {
        it.into_iter().fold(PartCounts::default(), |a, c| PartCounts {
            near: a.near + c.near,
            far: a.far + c.far,
        })
    }
}

/// Component indices of each part, the trimmed copies `𝓕′`, `𝓖′` and the removed leaves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitFGH {
    pub order: Vec<usize>,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub h: Vec<usize>,
    pub f_prime: Vec<Component>,
    pub g_prime: Vec<Component>,
    pub f_counts: PartCounts,
    pub g_counts: PartCounts,
    pub h_counts: PartCounts,
    pub f_prime_counts: PartCounts,
    pub g_prime_counts: PartCounts,
    /// `(leaf, parent)` for every near-class leaf removed from `𝓕 ∪ 𝓖`.
    pub trimmed: Vec<(usize, usize)>,
}

pub fn skew_cmp(a: &Component, b: &Component) -> Ordering {
    (b.near * a.far).cmp(&(a.near * b.far))
}

pub fn component_order(comps: &[Component], order: SplitOrder) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..comps.len()).collect();
    if order == SplitOrder::SkewDesc {
        idx.sort_by(|&i, &j| skew_cmp(&comps[i], &comps[j]).then(i.cmp(&j)));
    }
    idx
}

/// End of the maximal run `order[start..end]` whose far counts sum to at most `cap`.
pub fn max_prefix(comps: &[Component], order: &[usize], start: usize, cap: &Q) -> usize {
    let mut sum = 0;
    let mut end = start;
    while end < order.len() && qu(sum + comps[order[end]].far) <= *cap {
        sum += comps[order[end]].far;
        end += 1;
    }
    end
}

/// Removes the near-class vertices of `c` that are leaves of the tree.
pub fn trim_near_leaves(tree: &RootedTree, c: &Component) -> (Component, Vec<(usize, usize)>) {
    let Some(&(anchor, _)) = c.attach.first() else {
        return (c.clone(), Vec::new());
    };
    let near = 3 - tree.colour(anchor);
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for &v in &c.vertices {
        if tree.colour(v) == near && tree.is_leaf(v) && c.vertices.len() > 1 {
            removed.push((v, tree.neighbors(v)[0]));
        } else {
            kept.push(v);
        }
    }
    let far = kept.iter().filter(|&&v| tree.colour(v) != near).count();
    let out = Component {
        near: kept.len() - far,
        far,
        vertices: kept,
        anchors: c.anchors.clone(),
        attach: c.attach.clone(),
    };
    (out, removed)
}

pub fn split_fgh(tree: &RootedTree, comps: &[Component], mode: SplitMode, order: SplitOrder) -> SplitFGH {
    let order = component_order(comps, order);
    let (cap_f, cap_g) = match mode {
        SplitMode::ByMatching { cap_f } => (cap_f, None),
        SplitMode::ByMatchingThenS1 { cap_f, cap_g } => (cap_f, Some(cap_g)),
    };
    let end_f = max_prefix(comps, &order, 0, &cap_f);
    let end_g = match cap_g {
        Some(cap) => max_prefix(comps, &order, end_f, &cap),
        None => order.len(),
    };
    let f: Vec<usize> = order[..end_f].to_vec();
    let g: Vec<usize> = order[end_f..end_g].to_vec();
    let h: Vec<usize> = order[end_g..].to_vec();
    let mut trimmed = Vec::new();
    let mut prime = |ids: &[usize]| -> Vec<Component> {
        ids.iter()
            .map(|&i| {
                let (c, rem) = trim_near_leaves(tree, &comps[i]);
                trimmed.extend(rem);
                c
            })
            .collect()
    };
    let f_prime = prime(&f);
    let g_prime = prime(&g);
    SplitFGH {
        f_counts: PartCounts::of(f.iter().map(|&i| &comps[i])),
        g_counts: PartCounts::of(g.iter().map(|&i| &comps[i])),
        h_counts: PartCounts::of(h.iter().map(|&i| &comps[i])),
        f_prime_counts: PartCounts::of(&f_prime),
        g_prime_counts: PartCounts::of(&g_prime),
        order,
        f,
        g,
        h,
        f_prime,
        g_prime,
        trimmed,
    }
}
