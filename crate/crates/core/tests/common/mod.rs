//! Brute-force reference implementations used by the integration tests.
//!
//! Nothing here touches the bitset representation or the enumeration code:
//! contexts are dense `Vec<Vec<bool>>` matrices rebuilt from labels.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use pvfca::CaseReport;
use rand::Rng;

/// (extent case ids, intent labels), both sorted.
pub type LabelConcept = (Vec<String>, Vec<String>);

pub struct Dense {
    pub objects: Vec<String>,
    pub attrs: Vec<String>,
    pub kinds: Vec<char>,
    pub rel: Vec<Vec<bool>>,
}

impl Dense {
    /// Attribute kind is recorded as 'g' (demographic), 'd' (drug), 'e' (event).
    pub fn from_records(records: &[CaseReport]) -> Self {
        let mut attrs: BTreeMap<String, char> = BTreeMap::new();
        for r in records {
            attrs.extend(r.demographics.iter().map(|l| (l.clone(), 'g')));
            attrs.extend(r.drugs.iter().map(|l| (l.clone(), 'd')));
            attrs.extend(r.events.iter().map(|l| (l.clone(), 'e')));
        }
        let (attrs, kinds): (Vec<String>, Vec<char>) = attrs.into_iter().unzip();
        let objects = records.iter().map(|r| r.case_id.clone()).collect();
        let rel = records
            .iter()
            .map(|r| {
                attrs
                    .iter()
                    .map(|a| r.demographics.contains(a) || r.drugs.contains(a) || r.events.contains(a))
                    .collect()
            })
            .collect();
        Dense {
            objects,
            attrs,
            kinds,
            rel,
        }
    }

    pub fn extent_of(&self, attrs: &[bool]) -> Vec<bool> {
        self.rel
            .iter()
            .map(|row| attrs.iter().zip(row).all(|(&want, &has)| !want || has))
            .collect()
    }

    pub fn intent_of(&self, objs: &[bool]) -> Vec<bool> {
        (0..self.attrs.len())
            .map(|a| self.rel.iter().zip(objs).all(|(row, &sel)| !sel || row[a]))
            .collect()
    }

    pub fn labels(&self, mask: &[bool], names: &[String]) -> Vec<String> {
        let mut v: Vec<String> = names
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(n, _)| n.clone())
            .collect();
        v.sort();
        v
    }

    /// Every distinct closure `Y''` over all `Y ⊆ A`, paired with `Y'`.
    pub fn powerset_concepts(&self) -> BTreeSet<LabelConcept> {
        let m = self.attrs.len();
        assert!(m <= 20, "powerset oracle limited to 20 attributes");
        let mut out = BTreeSet::new();
        for bits in 0u32..(1u32 << m) {
            let y: Vec<bool> = (0..m).map(|j| bits >> j & 1 == 1).collect();
            let ext = self.extent_of(&y);
            let int = self.intent_of(&ext);
            out.insert((self.labels(&ext, &self.objects), self.labels(&int, &self.attrs)));
        }
        out
    }

    pub fn count_with(&self, pred: impl Fn(&[bool]) -> bool) -> u64 {
        self.rel.iter().filter(|r| pred(r)).count() as u64
    }

    pub fn index_of(&self, label: &str) -> usize {
        self.attrs.iter().position(|a| a == label).unwrap()
    }
}

/// Random records with `n_obj` cases over `n_attr` potential attributes.
/// Attribute `j` is a demographic, drug or event according to `j % 3`.
pub fn random_records<R: Rng>(rng: &mut R, n_obj: usize, n_attr: usize, density: f64) -> Vec<CaseReport> {
    (0..n_obj)
        .map(|o| {
            let mut r = CaseReport::new(format!("o{o:02}"));
            for j in 0..n_attr {
                if rng.gen_bool(density) {
                    match j % 3 {
                        0 => r.demographics.insert(format!("g{j:02}")),
                        1 => r.drugs.insert(format!("d{j:02}")),
                        _ => r.events.insert(format!("e{j:02}")),
                    };
                }
            }
            r
        })
        .collect()
}

/// Yates-corrected χ² via the closed form
/// `n (max(|ad − bc| − n/2, 0))² / ((a+b)(c+d)(a+c)(b+d))`.
pub fn yates_oracle(a: u64, b: u64, c: u64, d: u64) -> f64 {
    let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
    let n = a + b + c + d;
    let denom = (a + b) * (c + d) * (a + c) * (b + d);
    if denom == 0.0 {
        return 0.0;
    }
    let dev = ((a * d - b * c).abs() - n / 2.0).max(0.0);
    n * dev * dev / denom
}

pub fn prr_oracle(a: u64, b: u64, c: u64, d: u64) -> f64 {
    if a == 0 {
        return 0.0;
    }
    if c == 0 {
        return f64::INFINITY;
    }
    (a as f64 * (c + d) as f64) / (c as f64 * (a + b) as f64)
}

/// Cover pairs `(child, parent)` of the inclusion order on `extents`, by
/// checking every triple.
pub fn transitive_reduction(extents: &[BTreeSet<String>]) -> BTreeSet<(usize, usize)> {
    let n = extents.len();
    let lt = |i: usize, j: usize| i != j && extents[i].is_subset(&extents[j]) && extents[i] != extents[j];
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Label-level view of an enumerated concept set.
pub fn label_concepts(ctx: &pvfca::FormalContext, cs: &pvfca::ConceptSet) -> BTreeSet<LabelConcept> {
    cs.iter()
        .map(|c| {
            let mut e = ctx.object_labels(&c.extent);
            let mut i = ctx.attribute_labels(&c.intent);
            e.sort();
            i.sort();
            (e, i)
        })
        .collect()
}
