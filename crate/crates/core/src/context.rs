//! Case reports encoded as a formal context (objects × typed attributes).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::ContextError;
use crate::lattice::FormalConcept;

/// Attribute family. The declaration order is the attribute-id order used
/// by an ingested context: demographics first, then drugs, then events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AttributeKind {
    Demographic,
    Drug,
    AdverseEvent,
}

impl fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AttributeKind::Demographic => "demographic",
            AttributeKind::Drug => "drug",
            AttributeKind::AdverseEvent => "event",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Attribute {
    pub kind: AttributeKind,
    pub label: String,
}

impl Attribute {
    pub fn new(kind: AttributeKind, label: impl Into<String>) -> Self {
        Attribute {
            kind,
            label: label.into(),
        }
    }
}

/// One spontaneous report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_id: String,
    pub demographics: BTreeSet<String>,
    pub drugs: BTreeSet<String>,
    pub events: BTreeSet<String>,
}

impl CaseReport {
    pub fn new(case_id: impl Into<String>) -> Self {
        CaseReport {
            case_id: case_id.into(),
            ..Default::default()
        }
    }

    pub fn with_demographic(mut self, label: impl Into<String>) -> Self {
        self.demographics.insert(label.into());
        self
    }

    pub fn with_drug(mut self, label: impl Into<String>) -> Self {
        self.drugs.insert(label.into());
        self
    }

    pub fn with_event(mut self, label: impl Into<String>) -> Self {
        self.events.insert(label.into());
        self
    }

    fn attributes(&self) -> impl Iterator<Item = (AttributeKind, &str)> {
        fn tagged(kind: AttributeKind, set: &BTreeSet<String>) -> impl Iterator<Item = (AttributeKind, &str)> {
            set.iter().map(move |s| (kind, s.as_str()))
        }
        tagged(AttributeKind::Demographic, &self.demographics)
            .chain(tagged(AttributeKind::Drug, &self.drugs))
            .chain(tagged(AttributeKind::AdverseEvent, &self.events))
    }
}

/// The incidence relation between cases and attributes, stored both as
/// bit-rows (per object) and bit-columns (per attribute). Immutable after
/// [`FormalContext::ingest`].
#[derive(Debug, Clone)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<Attribute>,
    rows: Vec<BitSet>,
    columns: Vec<BitSet>,
    attribute_index: HashMap<Attribute, usize>,
    object_index: HashMap<String, usize>,
    drug_mask: BitSet,
    event_mask: BitSet,
    demographic_mask: BitSet,
}

impl FormalContext {
    /// Objects are ordered by case id and attributes by (kind, label), so the
    /// resulting context does not depend on record order.
    pub fn ingest<'a, I>(records: I) -> Result<Self, ContextError>
    where
        I: IntoIterator<Item = &'a CaseReport>,
    {
        let mut seen = HashSet::new();
        let mut sorted: Vec<&CaseReport> = Vec::new();
        for (index, rec) in records.into_iter().enumerate() {
            if rec.case_id.trim().is_empty() {
                return Err(ContextError::EmptyCaseId { index });
            }
            if !seen.insert(rec.case_id.as_str()) {
                return Err(ContextError::DuplicateCaseId(rec.case_id.clone()));
            }
            if let Some((kind, _)) = rec.attributes().find(|(_, l)| l.trim().is_empty()) {
                return Err(ContextError::EmptyLabel {
                    case_id: rec.case_id.clone(),
                    kind,
                });
            }
            sorted.push(rec);
        }
        sorted.sort_by(|a, b| a.case_id.cmp(&b.case_id));

        let universe: BTreeSet<Attribute> = sorted
            .iter()
            .flat_map(|r| r.attributes())
            .map(|(k, l)| Attribute::new(k, l))
            .collect();
        let attributes: Vec<Attribute> = universe.into_iter().collect();
        let attribute_index: HashMap<Attribute, usize> = attributes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();

        let n = sorted.len();
        let m = attributes.len();
        let mut rows = Vec::with_capacity(n);
        let mut columns = vec![BitSet::new(n); m];
        for (o, rec) in sorted.iter().enumerate() {
            let mut row = BitSet::new(m);
            for (kind, label) in rec.attributes() {
                let a = attribute_index[&Attribute::new(kind, label)];
                row.insert(a);
                columns[a].insert(o);
            }
            rows.push(row);
        }

        let mask = |kind| BitSet::from_indices(m, (0..m).filter(|&i| attributes[i].kind == kind));
        let drug_mask = mask(AttributeKind::Drug);
        let event_mask = mask(AttributeKind::AdverseEvent);
        let demographic_mask = mask(AttributeKind::Demographic);
        let objects: Vec<String> = sorted.iter().map(|r| r.case_id.clone()).collect();
        let object_index = objects
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, o)| (o, i))
            .collect();

        Ok(FormalContext {
            objects,
            attributes,
            rows,
            columns,
            attribute_index,
            object_index,
            drug_mask,
            event_mask,
            demographic_mask,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, id: usize) -> &Attribute {
        &self.attributes[id]
    }

    pub fn attribute_id(&self, kind: AttributeKind, label: &str) -> Option<usize> {
        self.attribute_index.get(&Attribute::new(kind, label)).copied()
    }

    /// First attribute (in id order) with the given label, whatever its kind.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.label == label)
    }

    pub fn object_id(&self, case_id: &str) -> Option<usize> {
        self.object_index.get(case_id).copied()
    }

    pub fn incidence(&self, object: usize, attribute: usize) -> bool {
        self.rows[object].contains(attribute)
    }

    /// Attribute set of one object.
    pub fn row(&self, object: usize) -> &BitSet {
        &self.rows[object]
    }

    /// Object set holding one attribute.
    pub fn column(&self, attribute: usize) -> &BitSet {
        &self.columns[attribute]
    }

    pub fn drug_mask(&self) -> &BitSet {
        &self.drug_mask
    }

    pub fn event_mask(&self) -> &BitSet {
        &self.event_mask
    }

    pub fn demographic_mask(&self) -> &BitSet {
        &self.demographic_mask
    }

    /// Builds an object set from case ids.
    pub fn objects_named<S: AsRef<str>>(&self, ids: &[S]) -> Result<BitSet, ContextError> {
        let mut s = BitSet::new(self.n_objects());
        for id in ids {
            let o = self
                .object_id(id.as_ref())
                .ok_or_else(|| ContextError::UnknownCase(id.as_ref().to_string()))?;
            s.insert(o);
        }
        Ok(s)
    }

    /// Builds an attribute set from labels, resolving each with [`Self::find_label`].
    pub fn attributes_labelled<S: AsRef<str>>(&self, labels: &[S]) -> Result<BitSet, ContextError> {
        let mut s = BitSet::new(self.n_attributes());
        for l in labels {
            let a = self
                .find_label(l.as_ref())
                .ok_or_else(|| ContextError::UnknownLabel(l.as_ref().to_string()))?;
            s.insert(a);
        }
        Ok(s)
    }

    pub fn object_labels(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|o| self.objects[o].clone()).collect()
    }

    pub fn attribute_labels(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|a| self.attributes[a].label.clone()).collect()
    }

    fn check_objects(&self, x: &BitSet) -> Result<(), ContextError> {
        match x.max() {
            Some(o) if o >= self.n_objects() => Err(ContextError::UnknownObject(o)),
            _ => Ok(()),
        }
    }

    fn check_attributes(&self, y: &BitSet) -> Result<(), ContextError> {
        match y.max() {
            Some(a) if a >= self.n_attributes() => Err(ContextError::UnknownAttribute(a)),
            _ => Ok(()),
        }
    }

    fn resize(set: &BitSet, len: usize) -> BitSet {
        if set.universe() == len {
            set.clone()
        } else {
            BitSet::from_indices(len, set.iter())
        }
    }

    /// `X'`: attributes shared by every object of `x`. `∅' = A`.
    pub fn derive_objects(&self, x: &BitSet) -> Result<BitSet, ContextError> {
        self.check_objects(x)?;
        Ok(self.common_attributes(&Self::resize(x, self.n_objects())))
    }

    /// `Y'`: objects holding every attribute of `y`. `∅' = O`.
    pub fn derive_attributes(&self, y: &BitSet) -> Result<BitSet, ContextError> {
        self.check_attributes(y)?;
        Ok(self.common_objects(&Self::resize(y, self.n_attributes())))
    }

    /// `(Y', Y'')`, the concept generated by an attribute set.
    pub fn close_attributes(&self, y: &BitSet) -> Result<FormalConcept, ContextError> {
        let extent = self.derive_attributes(y)?;
        let intent = self.common_attributes(&extent);
        Ok(FormalConcept::new(extent, intent))
    }

    /// `(X'', X')`, the concept generated by an object set.
    pub fn close_objects(&self, x: &BitSet) -> Result<FormalConcept, ContextError> {
        let intent = self.derive_objects(x)?;
        let extent = self.common_objects(&intent);
        Ok(FormalConcept::new(extent, intent))
    }

    // Unchecked derivations; callers guarantee universe sizes match.

    pub(crate) fn common_attributes(&self, x: &BitSet) -> BitSet {
        let mut acc = BitSet::full(self.n_attributes());
        for o in x.iter() {
            acc.intersect_with(&self.rows[o]);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    pub(crate) fn common_objects(&self, y: &BitSet) -> BitSet {
        let mut acc = BitSet::full(self.n_objects());
        for a in y.iter() {
            acc.intersect_with(&self.columns[a]);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// Case reports reconstructed from the context, in object order.
    pub fn to_records(&self) -> Vec<CaseReport> {
        (0..self.n_objects())
            .map(|o| {
                let mut rec = CaseReport::new(self.objects[o].clone());
                for a in self.rows[o].iter() {
                    let attr = &self.attributes[a];
                    let label = attr.label.clone();
                    match attr.kind {
                        AttributeKind::Demographic => rec.demographics.insert(label),
                        AttributeKind::Drug => rec.drugs.insert(label),
                        AttributeKind::AdverseEvent => rec.events.insert(label),
                    };
                }
                rec
            })
            .collect()
    }

    /// Attribute counts by kind.
    pub fn kind_counts(&self) -> BTreeMap<AttributeKind, usize> {
        let mut out = BTreeMap::new();
        for a in &self.attributes {
            *out.entry(a.kind).or_insert(0) += 1;
        }
        out
    }
}

/// The eight-patient context used throughout the documentation and tests.
pub fn reference_fixture() -> Vec<CaseReport> {
    let case = |id: &str, sex: &str, drugs: &[&str], events: &[&str]| CaseReport {
        case_id: id.to_string(),
        demographics: [sex.to_string()].into(),
        drugs: drugs.iter().map(|s| s.to_string()).collect(),
        events: events.iter().map(|s| s.to_string()).collect(),
    };
    vec![
        case("P1", "M", &["D1", "D3"], &["AE1"]),
        case("P2", "M", &["D1", "D2", "D3"], &["AE1"]),
        case("P3", "M", &["D1", "D3"], &["AE1", "AE2"]),
        case("P4", "F", &["D1"], &["AE1"]),
        case("P5", "F", &["D2"], &["AE2"]),
        case("P6", "F", &["D2"], &["AE2"]),
        case("P7", "F", &["D4", "D5"], &["AE2"]),
        case("P8", "F", &["D4", "D5"], &["AE2"]),
    ]
}
