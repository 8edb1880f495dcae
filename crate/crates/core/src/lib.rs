//! Formal concept analysis for adverse drug event mining.
//!
//! Case reports become a formal context (cases × demographics, drugs and
//! adverse events). Its concepts are enumerated with Close-by-One, those whose
//! intent mixes drugs and events are scored with PRR and χ², filtered by the
//! MHRA rule and sorted into signals, interactions and syndromes.
//!
//! ```
//! use pvfca::{context::{reference_fixture, FormalContext}, mining::{mine, MiningConfig}};
//!
//! let ctx = FormalContext::ingest(&reference_fixture()).unwrap();
//! let report = mine(&ctx, &MiningConfig::default());
//! assert_eq!(report.filtered_concepts, report.relationships.len());
//! ```

pub mod bitset;
pub mod cli;
pub mod context;
pub mod error;
pub mod io;
pub mod lattice;
pub mod mining;
pub mod reference_counts;
pub mod stats;
pub mod synth;

pub use bitset::BitSet;
pub use context::{Attribute, AttributeKind, CaseReport, FormalContext};
pub use error::{ContextError, GenerateError, InputError, StatsError};
pub use lattice::{covering_edges, enumerate_concepts, is_concept, leq, ConceptRecord, ConceptSet, FormalConcept};
pub use mining::{classify_concept, mine, select_strip, MiningConfig, MiningReport, Relationship, RelationshipKind};
pub use stats::{
    apply_mhra, chi_square, contingency_from_concept, prr, Chi2Correction, ContingencyMode, ContingencyTable,
    DisproportionalityResult, MhraThresholds, StatsConfig,
};
