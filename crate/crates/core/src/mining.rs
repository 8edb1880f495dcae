//! Strip selection, MHRA filtering and relationship classification.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::FormalContext;
use crate::error::StatsError;
use crate::lattice::{enumerate_concepts, ConceptRecord, ConceptSet, FormalConcept};
use crate::stats::{
    contingency_from_concept, ContingencyTable, DisproportionalityResult, MhraThresholds,
    StatsConfig,
};

/// Relationship taxonomy by drug count `nd` and event count `ne`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationshipKind {
    /// one drug, one event
    Signal,
    /// two drugs, one event
    DrugInteraction,
    /// one drug, several events
    Syndrome,
    /// three or more drugs, one event
    ComplexInteraction,
    /// several drugs, several events
    ComplexSyndrome,
}

impl RelationshipKind {
    pub const ALL: [RelationshipKind; 5] = [
        RelationshipKind::Signal,
        RelationshipKind::DrugInteraction,
        RelationshipKind::Syndrome,
        RelationshipKind::ComplexInteraction,
        RelationshipKind::ComplexSyndrome,
    ];

    /// `None` when either count is zero.
    pub fn from_counts(n_drugs: usize, n_events: usize) -> Option<Self> {
        use RelationshipKind::*;
        match (n_drugs, n_events) {
            (0, _) | (_, 0) => None,
            (1, 1) => Some(Signal),
            (2, 1) => Some(DrugInteraction),
            (_, 1) => Some(ComplexInteraction),
            (1, _) => Some(Syndrome),
            _ => Some(ComplexSyndrome),
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            RelationshipKind::Signal => "Potential signal",
            RelationshipKind::DrugInteraction => "Potential drug interaction",
            RelationshipKind::Syndrome => "Potential drug syndrome",
            RelationshipKind::ComplexInteraction => "Potential complex interaction",
            RelationshipKind::ComplexSyndrome => "Potential complex syndrome",
        }
    }
}

impl fmt::Display for RelationshipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A concept in the strip that passed the MHRA filter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relationship {
    pub concept: ConceptRecord,
    pub drugs: Vec<String>,
    pub events: Vec<String>,
    pub demographics: Vec<String>,
    pub kind: RelationshipKind,
    pub table: ContingencyTable,
    pub stats: DisproportionalityResult,
    pub population_restricted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningReport {
    pub total_concepts: usize,
    pub strip_concepts: usize,
    pub filtered_concepts: usize,
    pub per_kind: BTreeMap<RelationshipKind, usize>,
    pub relationships: Vec<Relationship>,
}

impl MiningReport {
    pub fn signals(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships
            .iter()
            .filter(|r| r.kind == RelationshipKind::Signal)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MiningConfig {
    pub thresholds: MhraThresholds,
    pub stats: StatsConfig,
}

fn has_drug_and_event(ctx: &FormalContext, c: &FormalConcept) -> bool {
    c.intent.intersection_count(ctx.drug_mask()) > 0
        && c.intent.intersection_count(ctx.event_mask()) > 0
}

/// Concepts whose intent holds at least one drug and one event and whose
/// support reaches `min_support`.
pub fn select_strip(ctx: &FormalContext, cs: &ConceptSet, min_support: usize) -> ConceptSet {
    cs.filter(|c| c.support >= min_support && has_drug_and_event(ctx, c))
}

/// Kind and population-restriction flag of a concept's intent.
pub fn classify_concept(
    ctx: &FormalContext,
    concept: &FormalConcept,
) -> Result<(RelationshipKind, bool), StatsError> {
    let nd = concept.intent.intersection_count(ctx.drug_mask());
    let ne = concept.intent.intersection_count(ctx.event_mask());
    let kind = RelationshipKind::from_counts(nd, ne).ok_or(if nd == 0 {
        StatsError::NoDrug
    } else {
        StatsError::NoEvent
    })?;
    let restricted = concept.intent.intersection_count(ctx.demographic_mask()) > 0;
    Ok((kind, restricted))
}

/// Statistics and classification for one strip concept, regardless of
/// whether it passes the filter.
pub fn assess_concept(
    ctx: &FormalContext,
    concept: &FormalConcept,
    config: &MiningConfig,
) -> Result<Relationship, StatsError> {
    let (kind, population_restricted) = classify_concept(ctx, concept)?;
    let table = contingency_from_concept(ctx, concept, config.stats.contingency_mode)?;
    let stats =
        DisproportionalityResult::evaluate(&table, concept.support, &config.stats, &config.thresholds)?;
    let labels = |mask| ctx.attribute_labels(&concept.intent.intersection(mask));
    Ok(Relationship {
        concept: concept.to_record(ctx),
        drugs: labels(ctx.drug_mask()),
        events: labels(ctx.event_mask()),
        demographics: labels(ctx.demographic_mask()),
        kind,
        table,
        stats,
        population_restricted,
    })
}

/// Full pipeline: iceberg enumeration, strip, MHRA filter, classification.
pub fn mine(ctx: &FormalContext, config: &MiningConfig) -> MiningReport {
    let concepts = enumerate_concepts(ctx, config.thresholds.min_support);
    mine_concepts(ctx, &concepts, config)
}

/// Pipeline over an already enumerated concept set.
pub fn mine_concepts(ctx: &FormalContext, concepts: &ConceptSet, config: &MiningConfig) -> MiningReport {
    let strip = select_strip(ctx, concepts, config.thresholds.min_support);
    let mut relationships: Vec<Relationship> = strip
        .as_slice()
        .par_iter()
        .filter_map(|c| assess_concept(ctx, c, config).ok())
        .filter(|r| r.stats.passes_mhra)
        .collect();
    relationships.sort_by(|x, y| {
        (x.kind, &x.drugs, &x.events, &x.demographics).cmp(&(y.kind, &y.drugs, &y.events, &y.demographics))
    });

    let mut per_kind: BTreeMap<RelationshipKind, usize> =
        RelationshipKind::ALL.iter().map(|&k| (k, 0)).collect();
    for r in &relationships {
        *per_kind.entry(r.kind).or_insert(0) += 1;
    }
    MiningReport {
        total_concepts: concepts.len(),
        strip_concepts: strip.len(),
        filtered_concepts: relationships.len(),
        per_kind,
        relationships,
    }
}
