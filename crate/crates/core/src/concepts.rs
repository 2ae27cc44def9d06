//! Formal concepts (maximal rectangles) of a relation.
//!
//! [`enumerate_concepts`] runs Ganter's NextClosure over extents, with objects
//! ordered by label; [`brute_force_concepts`] closes every subset of objects
//! and is kept as an independent oracle.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::Relation;

/// A pair `(U, V)` with `U = V'` and `V = U'`. Both sides are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormalConcept {
    pub extent: Vec<String>,
    pub intent: Vec<String>,
}

impl FormalConcept {
    /// Both sides non-empty, i.e. a facet of the rectangle complex.
    pub fn is_proper(&self) -> bool {
        !self.extent.is_empty() && !self.intent.is_empty()
    }
}

impl PartialOrd for FormalConcept {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by extent, then intent.
impl Ord for FormalConcept {
    fn cmp(&self, other: &Self) -> Ordering {
        self.extent
            .cmp(&other.extent)
            .then_with(|| self.intent.cmp(&other.intent))
    }
}

pub(crate) fn up_bits(relation: &Relation, objects: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(relation.y_labels().len());
    out.insert_range(..);
    for i in objects.ones() {
        out.intersect_with(relation.row(i));
    }
    out
}

pub(crate) fn down_bits(relation: &Relation, attributes: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(relation.x_labels().len());
    out.insert_range(..);
    for j in attributes.ones() {
        out.intersect_with(relation.column(j));
    }
    out
}

fn labels_to_bits<S: AsRef<str>>(
    labels: &[S],
    universe: usize,
    pos: impl Fn(&str) -> Result<usize>,
) -> Result<FixedBitSet> {
    let mut bits = FixedBitSet::with_capacity(universe);
    for l in labels {
        bits.insert(pos(l.as_ref())?);
    }
    Ok(bits)
}

fn sorted_labels(bits: &FixedBitSet, labels: &[String]) -> Vec<String> {
    let mut out: Vec<String> = bits.ones().map(|i| labels[i].clone()).collect();
    out.sort_unstable();
    out
}

/// `U' = {y | ∀x ∈ U: (x, y) ∈ R}`; `∅' = Y`.
pub fn derive_up<S: AsRef<str>>(relation: &Relation, objects: &[S]) -> Result<Vec<String>> {
    let bits = labels_to_bits(objects, relation.x_labels().len(), |l| relation.x_pos(l))?;
    Ok(sorted_labels(&up_bits(relation, &bits), relation.y_labels()))
}

/// `V' = {x | ∀y ∈ V: (x, y) ∈ R}`; `∅' = X`.
pub fn derive_down<S: AsRef<str>>(relation: &Relation, attributes: &[S]) -> Result<Vec<String>> {
    let bits = labels_to_bits(attributes, relation.y_labels().len(), |l| relation.y_pos(l))?;
    Ok(sorted_labels(&down_bits(relation, &bits), relation.x_labels()))
}

fn concept_from_bits(relation: &Relation, extent: &FixedBitSet, intent: &FixedBitSet) -> FormalConcept {
    FormalConcept {
        extent: sorted_labels(extent, relation.x_labels()),
        intent: sorted_labels(intent, relation.y_labels()),
    }
}

/// All formal concepts, including `(∅, Y)` / `(X, ∅)` when they are closed,
/// sorted canonically.
pub fn enumerate_concepts(relation: &Relation) -> Vec<FormalConcept> {
    let x = relation.x_labels();
    let n = x.len();
    // Objects in lectic order are label-sorted positions.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].cmp(&x[b]));

    let closure = |set: &FixedBitSet| down_bits(relation, &up_bits(relation, set));
    let mut out = Vec::new();
    let mut extent = closure(&FixedBitSet::with_capacity(n));
    loop {
        out.push(concept_from_bits(relation, &extent, &up_bits(relation, &extent)));
        if extent.count_ones(..) == n {
            break;
        }
        // Lectically next closed set after `extent`.
        let mut current = extent.clone();
        let mut next = None;
        for rank in (0..n).rev() {
            let obj = order[rank];
            if current.contains(obj) {
                current.set(obj, false);
                continue;
            }
            let mut candidate = current.clone();
            candidate.insert(obj);
            let closed = closure(&candidate);
            let adds_smaller = order[..rank]
                .iter()
                .any(|&o| closed.contains(o) && !current.contains(o));
            if !adds_smaller {
                next = Some(closed);
                break;
            }
        }
        match next {
            Some(e) => extent = e,
            None => break,
        }
    }
    out.sort_unstable();
    out
}

pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Closes every subset of `X`; exhaustive, so only for `|X| ≤ 20`.
pub fn brute_force_concepts(relation: &Relation) -> Result<Vec<FormalConcept>> {
    let n = relation.x_labels().len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut seen = BTreeSet::new();
    for mask in 0u32..(1u32 << n) {
        let mut subset = FixedBitSet::with_capacity(n);
        for i in 0..n {
            if mask & (1 << i) != 0 {
                subset.insert(i);
            }
        }
        let intent = up_bits(relation, &subset);
        let extent = down_bits(relation, &intent);
        seen.insert(concept_from_bits(relation, &extent, &intent));
    }
    Ok(seen.into_iter().collect())
}

/// Concept-lattice order: `c1 ≤ c2` iff `extent(c1) ⊆ extent(c2)`.
pub fn lattice_leq(c1: &FormalConcept, c2: &FormalConcept) -> bool {
    c1.extent
        .iter()
        .all(|x| c2.extent.binary_search(x).is_ok())
}
