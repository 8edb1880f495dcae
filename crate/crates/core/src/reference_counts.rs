//! Headline counts reported for the original 3,249-case pharmacovigilance
//! extract (527 drugs, 639 adverse events). That dataset is confidential, so
//! these numbers cannot be reproduced here; they are kept for comparison with
//! the summary printed by `pvfca mine` and are never asserted by tests.

pub const CASES: usize = 3_249;
pub const DRUGS: usize = 527;
pub const ADVERSE_EVENTS: usize = 639;

pub const TOTAL_CONCEPTS: usize = 13_178;
pub const DRUG_EVENT_CONCEPTS: usize = 842;
pub const FILTERED_CONCEPTS: usize = 593;

pub const SIGNALS: usize = 360;
pub const DRUG_INTERACTIONS: usize = 110;
pub const SYNDROMES: usize = 56;
pub const COMPLEX_INTERACTIONS: usize = 42;
pub const COMPLEX_SYNDROMES: usize = 25;

/// Signals whose intent carries no demographic attribute.
pub const UNRESTRICTED_SIGNALS: usize = 181;

/// Expert classification of the 110 drug pairs: therapeutic association,
/// successive prescription, single medicinal product, concomitant drugs.
pub const DRUG_PAIR_CLASSES: [(&str, usize); 4] = [
    ("therapeutic association", 57),
    ("successive prescription", 8),
    ("medicinal product", 22),
    ("concomitant drugs", 23),
];
