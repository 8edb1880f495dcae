use thiserror::Error;

use crate::context::AttributeKind;

#[derive(Debug, Error, PartialEq)]
pub enum ContextError {
    #[error("duplicate case id {0:?}")]
    DuplicateCaseId(String),
    #[error("record #{index} has an empty case id")]
    EmptyCaseId { index: usize },
    #[error("case {case_id:?} has an empty {kind} label")]
    EmptyLabel { case_id: String, kind: AttributeKind },
    #[error("object id {0} is not in the context")]
    UnknownObject(usize),
    #[error("attribute id {0} is not in the context")]
    UnknownAttribute(usize),
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("unknown attribute label {0:?}")]
    UnknownLabel(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("no exposed cases (a + b = 0)")]
    NoExposedCases,
    #[error("intent has no drug attribute")]
    NoDrug,
    #[error("intent has no adverse-event attribute")]
    NoEvent,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: {message}")]
    Schema { row: usize, message: String },
    #[error(transparent)]
    Context(#[from] ContextError),
}

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("density must lie in (0, 1), got {0}")]
    InvalidDensity(f64),
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("planted association {0:?} needs {1} cases but only {2} exist")]
    TooManyPlanted(String, usize, usize),
    #[error("cannot parse planted association {0:?}: expected DRUG:EVENT:CASES")]
    BadPlanted(String),
}
