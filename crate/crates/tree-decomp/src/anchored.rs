//! Anchored forests derived from a fine partition.

use crate::fine::FinePartition;
use crate::DecompError;
use lks_core::RootedTree;
use serde::{Deserialize, Serialize};

/// One component `K` of `F − R` with its anchors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: Vec<usize>,
    /// Adjacent anchors, one or two, sorted.
    pub anchors: Vec<usize>,
    /// `(anchor, its unique neighbour in K)`.
    pub attach: Vec<(usize, usize)>,
    /// Vertices of `K` outside the anchor class (the anchor-neighbour class).
    pub near: usize,
    /// Vertices of `K` in the anchor class.
    pub far: usize,
}

/// A singleton subtree, embedded last as a leaf of its anchors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deferred {
    pub vertex: usize,
    pub anchors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredForest {
    pub anchors: Vec<usize>,
    pub anchor_colour: u8,
    pub components: Vec<Component>,
    pub deferred: Vec<Deferred>,
    pub tau: usize,
}

impl AnchoredForest {
    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.vertices.len()).sum::<usize>() + self.deferred.len()
    }

    /// Anchored-forest contract failures, as readable strings.
    pub fn violations(&self, tree: &RootedTree) -> Vec<String> {
        let mut bad = Vec::new();
        if let Some(&a) = self.anchors.iter().find(|&&a| tree.colour(a) != self.anchor_colour) {
            bad.push(format!("anchor {a} outside the anchor class"));
        }
        for c in &self.components {
            if c.vertices.len() < 2 || c.vertices.len() > self.tau {
                bad.push(format!("component {:?} size outside [2, {}]", c.vertices, self.tau));
            }
            if c.anchors.is_empty() || c.anchors.len() > 2 {
                bad.push(format!("component {:?} has {} anchors", c.vertices, c.anchors.len()));
            }
            if let [a, b] = c.anchors[..] {
                if tree.distance(a, b) < 4 {
                    bad.push(format!("anchors {a},{b} at distance {}", tree.distance(a, b)));
                }
            }
        }
        bad
    }
}

/// Colour-class counts of the two forests.
///
/// With `W_A` in class 2 and `W_B` in class 1: `a1 = |D_A ∩ T₂|`,
/// `a2 = |D_A ∩ T₁|`, `b1 = |D_B ∩ T₁|`, `b2 = |D_B ∩ T₂|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forests {
    pub fa: AnchoredForest,
    pub fb: AnchoredForest,
    pub counts: ClassCounts,
    /// The input sides were exchanged to meet the requested orientation.
    pub swapped: bool,
    pub wa: Vec<usize>,
    pub wb: Vec<usize>,
}

/// Splits `fp` into the anchored forests on `D_A` (anchors `W_A`) and `D_B`
/// (anchors `W_B`), with sides arranged so that `W_A` lies in class 2.
/// Singleton subtrees become deferred leaves.
pub fn to_anchored_forests(fp: &FinePartition, tree: &RootedTree) -> Result<Forests, DecompError> {
    oriented_forests(fp, tree, 2)
}

/// As [`to_anchored_forests`], with `W_A` placed in class `a_colour`.
///
/// The counts keep their literal meaning (`a1 = |D_A ∩ T₂|` and so on), so
/// for `a_colour = 1` they read `a1` = near, `a2` = far for `D_A` and
/// `b1` = near, `b2` = far for `D_B`.
pub fn oriented_forests(fp: &FinePartition, tree: &RootedTree, a_colour: u8) -> Result<Forests, DecompError> {
    if a_colour != 1 && a_colour != 2 {
        return Err(DecompError::Forest(format!("colour {a_colour} is not 1 or 2")));
    }
    let class_of = |set: &[usize]| -> Result<Option<u8>, DecompError> {
        let Some(&first) = set.first() else {
            return Ok(None);
        };
        let c = tree.colour(first);
        if set.iter().any(|&v| tree.colour(v) != c) {
            return Err(DecompError::Forest(format!("seed set {set:?} spans both classes")));
        }
        Ok(Some(c))
    };
    let b_colour = 3 - a_colour;
    let (ca, cb) = (class_of(&fp.wa)?, class_of(&fp.wb)?);
    let swapped = ca == Some(b_colour) || (ca.is_none() && cb == Some(a_colour));
    let (wa, wb, da, db) = if swapped {
        (&fp.wb, &fp.wa, &fp.db, &fp.da)
    } else {
        (&fp.wa, &fp.wb, &fp.da, &fp.db)
    };
    let fa = forest(tree, wa, da, a_colour, fp.ell)?;
    let fb = forest(tree, wb, db, b_colour, fp.ell)?;
    let count = |ts: &Vec<Vec<usize>>, c: u8| ts.iter().flatten().filter(|&&v| tree.colour(v) == c).count();
    let counts = ClassCounts {
        a1: count(da, 2),
        a2: count(da, 1),
        b1: count(db, 1),
        b2: count(db, 2),
    };
    Ok(Forests {
        fa,
        fb,
        counts,
        swapped,
        wa: wa.clone(),
        wb: wb.clone(),
    })
}

fn forest(
    tree: &RootedTree,
    anchors: &[usize],
    trees: &[Vec<usize>],
    anchor_colour: u8,
    tau: usize,
) -> Result<AnchoredForest, DecompError> {
    let anchor_set: std::collections::BTreeSet<usize> = anchors.iter().copied().collect();
    let mut components = Vec::new();
    let mut deferred = Vec::new();
    for t in trees {
        let members: std::collections::BTreeSet<usize> = t.iter().copied().collect();
        let mut attach: Vec<(usize, usize)> = t
            .iter()
            .flat_map(|&v| tree.neighbors(v).into_iter().map(move |u| (u, v)))
            .filter(|(u, _)| !members.contains(u))
            .collect();
        attach.sort_unstable();
        if let Some(&(u, _)) = attach.iter().find(|(u, _)| !anchor_set.contains(u)) {
            return Err(DecompError::Forest(format!("subtree {t:?} touches non-anchor {u}")));
        }
        let anchors: Vec<usize> = attach.iter().map(|&(a, _)| a).collect();
        if anchors.is_empty() || anchors.len() > 2 {
            return Err(DecompError::Forest(format!("subtree {t:?} has {} anchors", anchors.len())));
        }
        if t.len() == 1 {
            deferred.push(Deferred { vertex: t[0], anchors });
            continue;
        }
        let far = t.iter().filter(|&&v| tree.colour(v) == anchor_colour).count();
        components.push(Component {
            vertices: t.clone(),
            anchors,
            attach,
            near: t.len() - far,
            far,
        });
    }
    let f = AnchoredForest {
        anchors: anchors.to_vec(),
        anchor_colour,
        components,
        deferred,
        tau,
    };
    let bad = f.violations(tree);
    if let Some(b) = bad.into_iter().next() {
        return Err(DecompError::Forest(b));
    }
    Ok(f)
}
