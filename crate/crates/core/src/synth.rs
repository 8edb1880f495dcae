//! Seeded synthetic case-report generator.
//!
//! Every case gets a sex and an age band, then each drug and each event is
//! switched on independently with probability `density`. Planted
//! associations add a fixed drug and event to a random subset of cases.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::CaseReport;
use crate::error::GenerateError;

pub const AGE_BANDS: [&str; 4] = ["0-17", "18-44", "45-64", "65+"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedAssociation {
    pub drug: String,
    pub event: String,
    pub cases: usize,
}

impl FromStr for PlantedAssociation {
    type Err = GenerateError;

    /// `DRUG:EVENT:CASES`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GenerateError::BadPlanted(s.to_string());
        let mut parts = s.split(':');
        let (Some(drug), Some(event), Some(cases), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        if drug.trim().is_empty() || event.trim().is_empty() {
            return Err(bad());
        }
        Ok(PlantedAssociation {
            drug: drug.trim().to_string(),
            event: event.trim().to_string(),
            cases: cases.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for PlantedAssociation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.drug, self.event, self.cases)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n_cases: usize,
    pub n_drugs: usize,
    pub n_events: usize,
    pub density: f64,
    pub planted: Vec<PlantedAssociation>,
    pub seed: u64,
}

fn width(n: usize) -> usize {
    n.max(1).to_string().len()
}

pub fn drug_label(i: usize, n_drugs: usize) -> String {
    format!("D{:0w$}", i, w = width(n_drugs))
}

pub fn event_label(i: usize, n_events: usize) -> String {
    format!("AE{:0w$}", i, w = width(n_events))
}

pub fn generate(config: &GeneratorConfig) -> Result<Vec<CaseReport>, GenerateError> {
    let GeneratorConfig {
        n_cases,
        n_drugs,
        n_events,
        density,
        ref planted,
        seed,
    } = *config;
    if !(density > 0.0 && density < 1.0) {
        return Err(GenerateError::InvalidDensity(density));
    }
    for (name, v) in [("cases", n_cases), ("drugs", n_drugs), ("events", n_events)] {
        if v == 0 {
            return Err(GenerateError::ZeroCount(name));
        }
    }
    if let Some(p) = planted.iter().find(|p| p.cases > n_cases) {
        return Err(GenerateError::TooManyPlanted(p.to_string(), p.cases, n_cases));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id_width = width(n_cases);
    let mut cases: Vec<CaseReport> = (0..n_cases)
        .map(|i| {
            let mut c = CaseReport::new(format!("C{:0w$}", i, w = id_width));
            let sex = if rng.gen_bool(0.5) { "F" } else { "M" };
            c.demographics.insert(sex.to_string());
            let band = AGE_BANDS[rng.gen_range(0..AGE_BANDS.len())];
            c.demographics.insert(band.to_string());
            for d in 0..n_drugs {
                if rng.gen_bool(density) {
                    c.drugs.insert(drug_label(d, n_drugs));
                }
            }
            for e in 0..n_events {
                if rng.gen_bool(density) {
                    c.events.insert(event_label(e, n_events));
                }
            }
            c
        })
        .collect();

    for p in planted {
        for i in sample(&mut rng, n_cases, p.cases).into_vec() {
            cases[i].drugs.insert(p.drug.clone());
            cases[i].events.insert(p.event.clone());
        }
    }
    Ok(cases)
}
