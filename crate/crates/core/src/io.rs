//! Case-report input (CSV, JSON lines) and report export.
//!
//! CSV header: `case_id,sex,age_band,drugs,events`. `drugs` and `events` are
//! `;`-separated label lists; `sex` and `age_band` may be empty. JSON lines use
//! the same field names and also accept arrays for the two lists.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::context::CaseReport;
use crate::error::InputError;
use crate::mining::MiningReport;
use crate::stats::prr_serde;

pub const LIST_SEPARATOR: char = ';';

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

impl InputFormat {
    /// `.jsonl`/`.ndjson`/`.json` are JSON lines; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson" | "json") => InputFormat::Jsonl,
            _ => InputFormat::Csv,
        }
    }
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" => Ok(InputFormat::Jsonl),
            other => Err(format!("unknown input format {other:?}")),
        }
    }
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    case_id: String,
    sex: Option<String>,
    age_band: Option<String>,
    drugs: Option<String>,
    events: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LabelList {
    Joined(String),
    Items(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRow {
    case_id: String,
    #[serde(default)]
    sex: Option<String>,
    #[serde(default)]
    age_band: Option<String>,
    #[serde(default)]
    drugs: Option<LabelList>,
    #[serde(default)]
    events: Option<LabelList>,
}

fn split_labels(row: usize, field: &str, s: &str) -> Result<Vec<String>, InputError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(LIST_SEPARATOR)
        .map(|l| {
            let l = l.trim();
            if l.is_empty() {
                Err(InputError::Schema {
                    row,
                    message: format!("empty label in {field}"),
                })
            } else {
                Ok(l.to_string())
            }
        })
        .collect()
}

fn list(row: usize, field: &str, v: Option<LabelList>) -> Result<Vec<String>, InputError> {
    match v {
        None => Ok(Vec::new()),
        Some(LabelList::Joined(s)) => split_labels(row, field, &s),
        Some(LabelList::Items(items)) => items
            .into_iter()
            .map(|l| {
                let t = l.trim();
                if t.is_empty() {
                    Err(InputError::Schema {
                        row,
                        message: format!("empty label in {field}"),
                    })
                } else {
                    Ok(t.to_string())
                }
            })
            .collect(),
    }
}

fn build_case(
    row: usize,
    case_id: String,
    sex: Option<String>,
    age_band: Option<String>,
    drugs: Vec<String>,
    events: Vec<String>,
) -> Result<CaseReport, InputError> {
    let case_id = case_id.trim().to_string();
    if case_id.is_empty() {
        return Err(InputError::Schema {
            row,
            message: "empty case_id".into(),
        });
    }
    let demographics = [sex, age_band]
        .into_iter()
        .flatten()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    Ok(CaseReport {
        case_id,
        demographics,
        drugs: drugs.into_iter().collect(),
        events: events.into_iter().collect(),
    })
}

/// Rows are numbered from 1 for the first data line (the header is row 0).
pub fn parse_csv<R: Read>(reader: R) -> Result<Vec<CaseReport>, InputError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| InputError::Schema {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    for required in ["case_id", "sex", "age_band", "drugs", "events"] {
        if !headers.iter().any(|h| h == required) {
            return Err(InputError::Schema {
                row: 0,
                message: format!("missing column {required:?}"),
            });
        }
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<CsvRow>().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| InputError::Schema {
            row,
            message: e.to_string(),
        })?;
        let drugs = split_labels(row, "drugs", rec.drugs.as_deref().unwrap_or(""))?;
        let events = split_labels(row, "events", rec.events.as_deref().unwrap_or(""))?;
        out.push(build_case(row, rec.case_id, rec.sex, rec.age_band, drugs, events)?);
    }
    Ok(out)
}

/// Blank lines are skipped; rows are numbered by line, from 1.
pub fn parse_jsonl<R: BufRead>(reader: R) -> Result<Vec<CaseReport>, InputError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let row = i + 1;
        let line = line.map_err(|e| InputError::Schema {
            row,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonRow = serde_json::from_str(&line).map_err(|e| InputError::Schema {
            row,
            message: e.to_string(),
        })?;
        let drugs = list(row, "drugs", rec.drugs)?;
        let events = list(row, "events", rec.events)?;
        out.push(build_case(row, rec.case_id, rec.sex, rec.age_band, drugs, events)?);
    }
    Ok(out)
}

pub fn read_cases(path: &Path, format: InputFormat) -> Result<Vec<CaseReport>, InputError> {
    let file = File::open(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    match format {
        InputFormat::Csv => parse_csv(file),
        InputFormat::Jsonl => parse_jsonl(BufReader::new(file)),
    }
}

/// Writes cases in the CSV input schema. Demographics are split back into
/// `sex` (labels `F`/`M`) and `age_band` (anything else, at most one).
pub fn write_cases_csv<W: Write>(cases: &[CaseReport], w: W) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["case_id", "sex", "age_band", "drugs", "events"])?;
    let sep = LIST_SEPARATOR.to_string();
    for c in cases {
        let sex = c.demographics.iter().find(|d| is_sex(d)).map_or("", |s| s.as_str());
        let age = c.demographics.iter().find(|d| !is_sex(d)).map_or("", |s| s.as_str());
        let drugs = c.drugs.iter().map(String::as_str).collect::<Vec<_>>().join(&sep);
        let events = c.events.iter().map(String::as_str).collect::<Vec<_>>().join(&sep);
        wtr.write_record([c.case_id.as_str(), sex, age, &drugs, &events])?;
    }
    wtr.flush()?;
    Ok(())
}

fn is_sex(label: &str) -> bool {
    matches!(label, "F" | "M")
}

#[derive(Serialize)]
struct RelationshipRow {
    kind: String,
    drugs: String,
    events: String,
    demographics: String,
    support: usize,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    prr: String,
    chi2: f64,
    population_restricted: bool,
}

/// Relationship table with columns
/// `kind,drugs,events,demographics,support,a,b,c,d,prr,chi2,population_restricted`.
pub fn write_report_csv<W: Write>(report: &MiningReport, w: W) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let sep = LIST_SEPARATOR.to_string();
    if report.relationships.is_empty() {
        wtr.write_record([
            "kind",
            "drugs",
            "events",
            "demographics",
            "support",
            "a",
            "b",
            "c",
            "d",
            "prr",
            "chi2",
            "population_restricted",
        ])?;
    }
    for r in &report.relationships {
        wtr.serialize(RelationshipRow {
            kind: r.kind.to_string(),
            drugs: r.drugs.join(&sep),
            events: r.events.join(&sep),
            demographics: r.demographics.join(&sep),
            support: r.stats.support,
            a: r.table.a,
            b: r.table.b,
            c: r.table.c,
            d: r.table.d,
            prr: prr_serde::format(r.stats.prr),
            chi2: r.stats.chi2,
            population_restricted: r.population_restricted,
        })?;
    }
    wtr.flush()?;
    Ok(())
}
