//! ℓ-fine partitions: construction by peeling and a nine-item verifier.

use crate::DecompError;
use lks_core::RootedTree;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinePartition {
    #[serde(rename = "WA")]
    pub wa: Vec<usize>,
    #[serde(rename = "WB")]
    pub wb: Vec<usize>,
    #[serde(rename = "DA")]
    pub da: Vec<Vec<usize>>,
    #[serde(rename = "DB")]
    pub db: Vec<Vec<usize>>,
    pub ell: usize,
}

impl FinePartition {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }

    pub fn seeds(&self) -> impl Iterator<Item = usize> + '_ {
        self.wa.iter().chain(&self.wb).copied()
    }
}

/// A failed item of the fine-partition definition with a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub item: u8,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "item {}: {}", self.item, self.witness)
    }
}

/// Sorted, deduplicated item numbers of `violations`.
pub fn violated_items(violations: &[Violation]) -> Vec<u8> {
    let s: BTreeSet<u8> = violations.iter().map(|v| v.item).collect();
    s.into_iter().collect()
}

/// Checks the nine items; an empty result means `fp` is an ℓ-fine partition.
///
/// Distance parity in a tree equals colour difference, so item 4 is checked
/// on colours. Subtrees are required to be connected.
pub fn verify_fine_partition(tree: &RootedTree, fp: &FinePartition) -> Vec<Violation> {
    let n = tree.n();
    let k = tree.k();
    let mut out = Vec::new();
    let mut push = |item: u8, witness: String| out.push(Violation { item, witness });

    // 1: partition into seeds and connected subtrees.
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let trees: Vec<&Vec<usize>> = fp.da.iter().chain(&fp.db).collect();
    let mut seen = vec![0usize; n];
    for v in fp.seeds().chain(trees.iter().flat_map(|t| t.iter().copied())) {
        if v >= n {
            push(1, format!("vertex {v} out of range"));
            continue;
        }
        seen[v] += 1;
    }
    for (v, &c) in seen.iter().enumerate() {
        if c != 1 {
            push(1, format!("vertex {v} covered {c} times"));
        }
    }
    for (i, t) in trees.iter().enumerate() {
        for &v in t.iter().filter(|&&v| v < n) {
            owner[v] = Some(i);
        }
        if t.is_empty() || !connected(tree, t) {
            push(1, format!("subtree {t:?} is not a nonempty connected subtree"));
        }
    }
    let seed_set: BTreeSet<usize> = fp.seeds().collect();
    // 2
    if !seed_set.contains(&tree.root()) {
        push(2, format!("root {} is not a seed", tree.root()));
    }
    // 3
    let big = fp.wa.len().max(fp.wb.len());
    if big * fp.ell > 336 * k {
        push(3, format!("max(|WA|,|WB|) = {big} > 336·{k}/{}", fp.ell));
    }
    // 4
    for (set, name) in [(&fp.wa, "WA"), (&fp.wb, "WB")] {
        if let Some(&w) = set.first() {
            if let Some(&z) = set.iter().find(|&&z| z < n && w < n && tree.colour(z) != tree.colour(w)) {
                push(4, format!("{name} seeds {w},{z} at odd distance {}", tree.distance(w, z)));
            }
        }
    }
    if let (Some(&a), Some(&b)) = (fp.wa.first(), fp.wb.first()) {
        if a < n && b < n && tree.colour(a) == tree.colour(b) {
            push(4, format!("WA seed {a} and WB seed {b} at even distance {}", tree.distance(a, b)));
        }
    }
    for (i, t) in trees.iter().enumerate() {
        let t: Vec<usize> = t.iter().copied().filter(|&v| v < n).collect();
        // 5
        if t.len() > fp.ell {
            push(5, format!("subtree {t:?} has {} > ℓ = {} vertices", t.len(), fp.ell));
        }
        let outside: BTreeSet<usize> = t
            .iter()
            .flat_map(|&v| tree.neighbors(v))
            .filter(|&u| owner[u] != Some(i))
            .collect();
        // 6
        let in_a = i < fp.da.len();
        let (other, other_name) = if in_a { (&fp.wb, "WB") } else { (&fp.wa, "WA") };
        if let Some(&z) = outside.iter().find(|z| other.contains(z)) {
            push(6, format!("subtree {t:?} touches {other_name} seed {z}"));
        }
        // 7
        if let Some(&u) = outside.iter().find(|u| !seed_set.contains(u)) {
            push(7, format!("subtree {t:?} has non-seed outside neighbour {u}"));
        }
        let zs: Vec<usize> = outside.iter().copied().filter(|u| seed_set.contains(u)).collect();
        // 8
        if zs.len() > 2 {
            push(8, format!("subtree {t:?} touches seeds {zs:?}"));
        }
        // 9
        for a in 0..zs.len() {
            for b in a + 1..zs.len() {
                let d = tree.distance(zs[a], zs[b]);
                if d < 6 {
                    push(9, format!("seeds {},{} of subtree {t:?} at distance {d}", zs[a], zs[b]));
                }
            }
        }
    }
    out
}

fn connected(tree: &RootedTree, vs: &[usize]) -> bool {
    let set: BTreeSet<usize> = vs.iter().copied().filter(|&v| v < tree.n()).collect();
    if set.len() != vs.len() {
        return false;
    }
    let Some(&start) = set.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for u in tree.neighbors(v) {
            if set.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == set.len()
}

/// Builds an ℓ-fine partition of `tree`.
///
/// Peeling: bottom-up (children by id), a vertex whose remaining subtree has
/// more than ℓ vertices becomes a seed and its remaining children subtrees are
/// cut off; the root is always a seed. Promotion then restores items 8, 9 and
/// 6 in that order: branch vertices of the Steiner tree of a component's
/// seeds, the interior of short seed-to-seed paths, and the seed-side end of
/// paths joining seeds of different colours. Seeds in colour class 2 form
/// `W_A`, those in class 1 form `W_B`.
pub fn fine_partition(tree: &RootedTree, ell: usize) -> Result<FinePartition, DecompError> {
    let k = tree.k();
    if ell < 1 || ell >= k {
        return Err(DecompError::BadEll { ell, k });
    }
    let n = tree.n();
    let mut seed = vec![false; n];
    seed[tree.root()] = true;
    let mut rem = vec![0usize; n];
    for &v in tree.bfs_order().iter().rev() {
        let mut kids = tree.children(v).to_vec();
        kids.sort_unstable();
        let size = 1 + kids.iter().map(|&c| rem[c]).sum::<usize>();
        if size > ell {
            seed[v] = true;
        }
        rem[v] = if seed[v] { 0 } else { size };
    }
    promote_branch_points(tree, &mut seed);
    promote_short_paths(tree, &mut seed);
    promote_mixed_paths(tree, &mut seed);
    let fp = assemble(tree, &seed, ell);
    let bad = verify_fine_partition(tree, &fp);
    if let Some(v) = bad.first() {
        return Err(DecompError::Contract { item: v.item, witness: v.witness.clone() });
    }
    Ok(fp)
}

/// Components of `T − seeds`, each sorted, ordered by smallest vertex.
pub(crate) fn components(tree: &RootedTree, seed: &[bool]) -> Vec<Vec<usize>> {
    let n = tree.n();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if seed[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut vs = Vec::new();
        while let Some(v) = stack.pop() {
            vs.push(v);
            for u in tree.neighbors(v) {
                if !seed[u] && comp[u] == usize::MAX {
                    comp[u] = id;
                    stack.push(u);
                }
            }
        }
        vs.sort_unstable();
        out.push(vs);
    }
    out
}

fn boundary(tree: &RootedTree, seed: &[bool], comp: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = comp
        .iter()
        .flat_map(|&v| tree.neighbors(v))
        .filter(|&u| seed[u])
        .collect();
    set.into_iter().collect()
}

fn promote_branch_points(tree: &RootedTree, seed: &mut [bool]) {
    for comp in components(tree, seed) {
        let zs = boundary(tree, seed, &comp);
        if zs.len() <= 2 {
            continue;
        }
        // Steiner tree of the boundary seeds: union of paths from the first one.
        let mut count = vec![0usize; tree.n()];
        let mut steiner = BTreeSet::new();
        for &z in &zs[1..] {
            steiner.extend(tree.path_between(zs[0], z));
        }
        for &v in &steiner {
            count[v] = tree.neighbors(v).into_iter().filter(|u| steiner.contains(u)).count();
        }
        for &v in &comp {
            if steiner.contains(&v) && count[v] >= 3 {
                seed[v] = true;
            }
        }
    }
}

fn promote_short_paths(tree: &RootedTree, seed: &mut [bool]) {
    for comp in components(tree, seed) {
        if let [a, b] = boundary(tree, seed, &comp)[..] {
            if tree.distance(a, b) < 6 {
                for v in tree.path_between(a, b) {
                    seed[v] = true;
                }
            }
        }
    }
}

fn promote_mixed_paths(tree: &RootedTree, seed: &mut [bool]) {
    for comp in components(tree, seed) {
        if let [a, b] = boundary(tree, seed, &comp)[..] {
            if tree.colour(a) != tree.colour(b) {
                seed[tree.path_between(a, b)[1]] = true;
            }
        }
    }
}

fn assemble(tree: &RootedTree, seed: &[bool], ell: usize) -> FinePartition {
    let n = tree.n();
    let wa: Vec<usize> = (0..n).filter(|&v| seed[v] && tree.colour(v) == 2).collect();
    let wb: Vec<usize> = (0..n).filter(|&v| seed[v] && tree.colour(v) == 1).collect();
    let (mut da, mut db) = (Vec::new(), Vec::new());
    for comp in components(tree, seed) {
        let zs = boundary(tree, seed, &comp);
        if zs.iter().any(|&z| tree.colour(z) == 2) {
            da.push(comp);
        } else {
            db.push(comp);
        }
    }
    FinePartition { wa, wb, da, db, ell }
}
