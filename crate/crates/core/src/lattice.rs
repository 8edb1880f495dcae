//! Concept enumeration (Close-by-One) and the lattice order.
//!
//! Enumeration walks closed intents depth-first. A child is generated from a
//! parent `(X, Y)` by adding an attribute `j > last` not already in `Y`; the
//! child survives only when closing it adds no attribute below `j` that `Y`
//! lacked, so each closed intent is reached from exactly one parent. Support
//! pruning happens before the closure is computed: every extent in a subtree
//! is contained in the subtree root's extent.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::ContextError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalConcept {
    pub extent: BitSet,
    pub intent: BitSet,
    pub support: usize,
}

impl FormalConcept {
    pub fn new(extent: BitSet, intent: BitSet) -> Self {
        let support = extent.count();
        FormalConcept {
            extent,
            intent,
            support,
        }
    }

    /// Lattice order: `self ≤ other` iff `extent(self) ⊆ extent(other)`.
    pub fn leq(&self, other: &FormalConcept) -> bool {
        self.extent.is_subset(&other.extent)
    }

    /// Canonical order: ascending attribute ids of the intent, compared
    /// lexicographically.
    pub fn canonical_cmp(&self, other: &FormalConcept) -> Ordering {
        self.intent.cmp_members(&other.intent)
    }

    pub fn to_record(&self, ctx: &FormalContext) -> ConceptRecord {
        ConceptRecord {
            intent: ctx.attribute_labels(&self.intent),
            extent: ctx.object_labels(&self.extent),
            support: self.support,
        }
    }
}

/// `leq(c1, c2)`, free-function form.
pub fn leq(c1: &FormalConcept, c2: &FormalConcept) -> bool {
    c1.leq(c2)
}

/// Label-level view of a concept, used for serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptRecord {
    pub intent: Vec<String>,
    pub extent: Vec<String>,
    pub support: usize,
}

/// Concepts in canonical order, indexed by intent.
#[derive(Debug, Clone, Default)]
pub struct ConceptSet {
    concepts: Vec<FormalConcept>,
    by_intent: HashMap<BitSet, usize>,
}

impl ConceptSet {
    pub fn from_concepts(mut concepts: Vec<FormalConcept>) -> Self {
        concepts.sort_by(FormalConcept::canonical_cmp);
        let by_intent = concepts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.intent.clone(), i))
            .collect();
        ConceptSet {
            concepts,
            by_intent,
        }
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FormalConcept> {
        self.concepts.iter()
    }

    pub fn as_slice(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn get(&self, i: usize) -> Option<&FormalConcept> {
        self.concepts.get(i)
    }

    pub fn position_of(&self, intent: &BitSet) -> Option<usize> {
        self.by_intent.get(intent).copied()
    }

    pub fn by_intent(&self, intent: &BitSet) -> Option<&FormalConcept> {
        self.position_of(intent).map(|i| &self.concepts[i])
    }

    /// The concept with the largest extent; for any non-empty set produced
    /// by enumeration this is the top concept `(O, O')`.
    pub fn top(&self) -> Option<&FormalConcept> {
        self.concepts.iter().max_by_key(|c| c.support)
    }

    pub fn filter<F>(&self, keep: F) -> ConceptSet
    where
        F: Fn(&FormalConcept) -> bool,
    {
        let concepts = self.concepts.iter().filter(|c| keep(c)).cloned().collect();
        ConceptSet::from_concepts(concepts)
    }

    pub fn to_records(&self, ctx: &FormalContext) -> Vec<ConceptRecord> {
        self.concepts.iter().map(|c| c.to_record(ctx)).collect()
    }
}

impl<'a> IntoIterator for &'a ConceptSet {
    type Item = &'a FormalConcept;
    type IntoIter = std::slice::Iter<'a, FormalConcept>;

    fn into_iter(self) -> Self::IntoIter {
        self.concepts.iter()
    }
}

struct CloseByOne<'a> {
    ctx: &'a FormalContext,
    min_support: usize,
}

impl CloseByOne<'_> {
    /// Closed child of `(extent, intent)` through attribute `j`, if it passes
    /// the support bound and the canonicity test.
    fn child(&self, extent: &BitSet, intent: &BitSet, j: usize) -> Option<FormalConcept> {
        let column = self.ctx.column(j);
        if extent.intersection_count(column) < self.min_support {
            return None;
        }
        let child_extent = extent.intersection(column);
        let child_intent = self.ctx.common_attributes(&child_extent);
        if !child_intent.agrees_below(intent, j) {
            return None;
        }
        Some(FormalConcept::new(child_extent, child_intent))
    }

    fn expand(&self, parent: &FormalConcept, start: usize, out: &mut Vec<FormalConcept>) {
        for j in start..self.ctx.n_attributes() {
            if parent.intent.contains(j) {
                continue;
            }
            if let Some(c) = self.child(&parent.extent, &parent.intent, j) {
                out.push(c.clone());
                self.expand(&c, j + 1, out);
            }
        }
    }
}

/// All concepts with `support ≥ min_support`, in canonical order.
///
/// First-level subtrees of the search run on the current rayon pool; the
/// result is identical for any pool size.
pub fn enumerate_concepts(ctx: &FormalContext, min_support: usize) -> ConceptSet {
    let n = ctx.n_objects();
    if n < min_support {
        return ConceptSet::default();
    }
    let top_extent = BitSet::full(n);
    let top = FormalConcept::new(top_extent.clone(), ctx.common_attributes(&top_extent));
    let cbo = CloseByOne { ctx, min_support };

    let mut concepts: Vec<FormalConcept> = (0..ctx.n_attributes())
        .into_par_iter()
        .filter(|&j| !top.intent.contains(j))
        .flat_map_iter(|j| {
            let mut out = Vec::new();
            if let Some(c) = cbo.child(&top.extent, &top.intent, j) {
                cbo.expand(&c, j + 1, &mut out);
                out.push(c);
            }
            out
        })
        .collect();
    concepts.push(top);
    ConceptSet::from_concepts(concepts)
}

/// `X' = Y` and `Y' = X`.
pub fn is_concept(ctx: &FormalContext, extent: &BitSet, intent: &BitSet) -> Result<bool, ContextError> {
    let derived_intent = ctx.derive_objects(extent)?;
    let derived_extent = ctx.derive_attributes(intent)?;
    let same = |a: &BitSet, b: &BitSet| a.iter().eq(b.iter());
    Ok(same(&derived_intent, intent) && same(&derived_extent, extent))
}

/// Hasse diagram of `cs` as `(child, parent)` index pairs, sorted.
///
/// For each concept the strict upper bounds are scanned by increasing
/// support; a bound is a cover unless it lies above a cover already found.
pub fn covering_edges(cs: &ConceptSet) -> Vec<(usize, usize)> {
    let concepts = cs.as_slice();
    let mut by_support: Vec<usize> = (0..concepts.len()).collect();
    by_support.sort_by_key(|&i| (concepts[i].support, i));

    let mut edges: Vec<(usize, usize)> = (0..concepts.len())
        .into_par_iter()
        .flat_map_iter(|child| {
            let c = &concepts[child];
            let mut covers: Vec<usize> = Vec::new();
            for &p in &by_support {
                let d = &concepts[p];
                if d.support <= c.support || !c.extent.is_subset(&d.extent) {
                    continue;
                }
                if covers.iter().all(|&q| !concepts[q].extent.is_subset(&d.extent)) {
                    covers.push(p);
                }
            }
            covers.into_iter().map(move |p| (child, p))
        })
        .collect();
    edges.sort_unstable();
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{reference_fixture, CaseReport};

    fn fixture() -> FormalContext {
        FormalContext::ingest(&reference_fixture()).unwrap()
    }

    #[test]
    fn empty_context_has_single_concept() {
        let ctx = FormalContext::ingest(&[]).unwrap();
        let cs = enumerate_concepts(&ctx, 0);
        assert_eq!(cs.len(), 1);
        let c = &cs.as_slice()[0];
        assert!(c.extent.is_empty() && c.intent.is_empty());
        assert!(covering_edges(&cs).is_empty());
    }

    #[test]
    fn fixture_contains_d1_ae1() {
        let ctx = fixture();
        let cs = enumerate_concepts(&ctx, 0);
        let y = ctx.attributes_labelled(&["D1", "AE1"]).unwrap();
        let c = cs.by_intent(&y).expect("concept {D1, AE1}");
        assert_eq!(ctx.object_labels(&c.extent), ["P1", "P2", "P3", "P4"]);
    }

    #[test]
    fn fixture_support_three() {
        let ctx = fixture();
        let cs = enumerate_concepts(&ctx, 3);
        assert!(cs.iter().all(|c| c.support >= 3));
        let y = ctx.attributes_labelled(&["M", "D1", "D3", "AE1"]).unwrap();
        assert!(cs.by_intent(&y).is_some());
        let p78 = ctx.objects_named(&["P7", "P8"]).unwrap();
        assert!(cs.iter().all(|c| c.extent != p78));
    }

    #[test]
    fn min_support_above_object_count() {
        let ctx = fixture();
        assert!(enumerate_concepts(&ctx, 9).is_empty());
        assert_eq!(enumerate_concepts(&ctx, 8).len(), 1);
    }

    #[test]
    fn is_concept_examples() {
        let ctx = fixture();
        let f = ctx.attributes_labelled(&["F"]).unwrap();
        let p48 = ctx.objects_named(&["P4", "P5", "P6", "P7", "P8"]).unwrap();
        assert!(is_concept(&ctx, &p48, &f).unwrap());
        let p45 = ctx.objects_named(&["P4", "P5"]).unwrap();
        assert!(!is_concept(&ctx, &p45, &f).unwrap());
        let all = BitSet::full(8);
        let top_intent = ctx.derive_objects(&all).unwrap();
        assert!(is_concept(&ctx, &all, &top_intent).unwrap());
        assert!(is_concept(&ctx, &BitSet::from_indices(20, [15]), &f).is_err());
    }

    #[test]
    fn leq_examples() {
        let ctx = fixture();
        let cs = enumerate_concepts(&ctx, 0);
        let small = cs
            .by_intent(&ctx.attributes_labelled(&["M", "D1", "D3", "AE1"]).unwrap())
            .unwrap();
        let big = cs.by_intent(&ctx.attributes_labelled(&["D1", "AE1"]).unwrap()).unwrap();
        assert!(leq(small, big));
        assert!(!leq(big, small));
        let top = cs.top().unwrap();
        assert_eq!(top.support, 8);
        for c in &cs {
            assert!(leq(c, c));
            assert!(leq(c, top));
        }
    }

    #[test]
    fn chain_has_two_edges() {
        // a ⊂ ab ⊂ abc over three nested rows
        let recs = [
            CaseReport::new("1").with_drug("a"),
            CaseReport::new("2").with_drug("a").with_drug("b"),
            CaseReport::new("3").with_drug("a").with_drug("b").with_drug("c"),
        ];
        let ctx = FormalContext::ingest(&recs).unwrap();
        let cs = enumerate_concepts(&ctx, 0);
        assert_eq!(cs.len(), 3);
        assert_eq!(covering_edges(&cs).len(), 2);
    }

    #[test]
    fn single_concept_has_no_edges() {
        let ctx = fixture();
        let cs = enumerate_concepts(&ctx, 8);
        assert_eq!(cs.len(), 1);
        assert!(covering_edges(&cs).is_empty());
    }

    #[test]
    fn canonical_order_is_sorted() {
        let ctx = fixture();
        let cs = enumerate_concepts(&ctx, 0);
        for w in cs.as_slice().windows(2) {
            assert_eq!(w[0].canonical_cmp(&w[1]), Ordering::Less);
        }
    }
}
