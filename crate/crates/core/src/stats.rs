//! 2×2 disproportionality statistics and the MHRA decision rule.

use serde::{Deserialize, Serialize};

use crate::context::FormalContext;
use crate::error::StatsError;
use crate::lattice::FormalConcept;

/// Exposure/event counts over the whole case population.
///
/// ```text
///               event   ¬event
///   exposed       a       b
///   ¬exposed      c       d
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl ContingencyTable {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        ContingencyTable { a, b, c, d }
    }

    pub fn n(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    fn cells(&self) -> [f64; 4] {
        [self.a as f64, self.b as f64, self.c as f64, self.d as f64]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chi2Correction {
    #[default]
    Yates,
    Pearson,
}

/// How `a` is obtained for intents that carry demographic attributes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContingencyMode {
    /// `a = |D' ∩ E'|`, demographics ignored.
    #[default]
    Conjunction,
    /// Exposure is the conjunction of the intent's drugs and demographics,
    /// so `a = |extent|` for a closed intent.
    Extent,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsConfig {
    pub correction: Chi2Correction,
    pub contingency_mode: ContingencyMode,
    /// Add 0.5 to every cell before computing PRR when any cell is zero.
    pub haldane: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MhraThresholds {
    pub min_support: usize,
    pub min_prr: f64,
    pub min_chi2: f64,
}

impl Default for MhraThresholds {
    fn default() -> Self {
        MhraThresholds {
            min_support: 3,
            min_prr: 2.0,
            min_chi2: 4.0,
        }
    }
}

impl MhraThresholds {
    /// Strict `>` on PRR and χ², `≥` on support.
    pub fn passes(&self, prr: f64, chi2: f64, support: usize) -> bool {
        prr > self.min_prr && chi2 > self.min_chi2 && support >= self.min_support
    }
}

/// MHRA rule at its standard thresholds: PRR > 2, χ² > 4, support ≥ 3.
pub fn apply_mhra(prr: f64, chi2: f64, support: usize) -> bool {
    MhraThresholds::default().passes(prr, chi2, support)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisproportionalityResult {
    #[serde(with = "prr_serde")]
    pub prr: f64,
    pub chi2: f64,
    pub support: usize,
    pub passes_mhra: bool,
}

impl DisproportionalityResult {
    pub fn evaluate(
        table: &ContingencyTable,
        support: usize,
        config: &StatsConfig,
        thresholds: &MhraThresholds,
    ) -> Result<Self, StatsError> {
        let prr = if config.haldane {
            prr_haldane(table)?
        } else {
            prr(table)?
        };
        let chi2 = chi_square(table, config.correction);
        Ok(DisproportionalityResult {
            prr,
            chi2,
            support,
            passes_mhra: thresholds.passes(prr, chi2, support),
        })
    }
}

/// Counts for the drugs and events of a concept's intent.
///
/// Exposure is the conjunction of every drug in the intent and the event is
/// the conjunction of every adverse event. Demographic attributes join the
/// exposure conjunction only in [`ContingencyMode::Extent`].
pub fn contingency_from_concept(
    ctx: &FormalContext,
    concept: &FormalConcept,
    mode: ContingencyMode,
) -> Result<ContingencyTable, StatsError> {
    let drugs = concept.intent.intersection(ctx.drug_mask());
    let events = concept.intent.intersection(ctx.event_mask());
    if drugs.is_empty() {
        return Err(StatsError::NoDrug);
    }
    if events.is_empty() {
        return Err(StatsError::NoEvent);
    }
    let exposure = match mode {
        ContingencyMode::Conjunction => drugs,
        ContingencyMode::Extent => {
            let mut x = concept.intent.intersection(ctx.demographic_mask());
            x.union_with(&drugs);
            x
        }
    };
    let exposed = ctx.common_objects(&exposure);
    let with_event = ctx.common_objects(&events);
    let n = ctx.n_objects() as u64;
    let d_count = exposed.count() as u64;
    let e_count = with_event.count() as u64;
    let a = exposed.intersection_count(&with_event) as u64;
    let b = d_count - a;
    let c = e_count - a;
    Ok(ContingencyTable::new(a, b, c, n - a - b - c))
}

/// `(a / (a+b)) / (c / (c+d))`; `+∞` when `c = 0 < a`, `0` when `a = 0`.
pub fn prr(t: &ContingencyTable) -> Result<f64, StatsError> {
    if t.a + t.b == 0 {
        return Err(StatsError::NoExposedCases);
    }
    if t.a == 0 {
        return Ok(0.0);
    }
    if t.c == 0 {
        return Ok(f64::INFINITY);
    }
    let [a, b, c, d] = t.cells();
    Ok((a / (a + b)) / (c / (c + d)))
}

/// PRR with the Haldane–Anscombe 0.5 correction when any cell is zero.
pub fn prr_haldane(t: &ContingencyTable) -> Result<f64, StatsError> {
    if t.a + t.b == 0 {
        return Err(StatsError::NoExposedCases);
    }
    let [mut a, mut b, mut c, mut d] = t.cells();
    if [a, b, c, d].contains(&0.0) {
        a += 0.5;
        b += 0.5;
        c += 0.5;
        d += 0.5;
    }
    Ok((a / (a + b)) / (c / (c + d)))
}

/// Pearson χ² of the 2×2 table, Yates-corrected by default. Zero when any
/// marginal total is zero.
pub fn chi_square(t: &ContingencyTable, correction: Chi2Correction) -> f64 {
    let [a, b, c, d] = t.cells();
    let n = a + b + c + d;
    let rows = [a + b, c + d];
    let cols = [a + c, b + d];
    if n == 0.0 || rows.contains(&0.0) || cols.contains(&0.0) {
        return 0.0;
    }
    let observed = [[a, b], [c, d]];
    let mut sum = 0.0;
    for (i, row) in observed.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            let e = rows[i] * cols[j] / n;
            let dev = match correction {
                Chi2Correction::Yates => ((o - e).abs() - 0.5).max(0.0),
                Chi2Correction::Pearson => o - e,
            };
            sum += dev * dev / e;
        }
    }
    sum
}

/// Serializes `+∞` as the string `"inf"`; accepts either form back.
pub mod prr_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }

    /// Text form used in CSV output.
    pub fn format(v: f64) -> String {
        if v.is_infinite() && v > 0.0 {
            "inf".to_string()
        } else {
            v.to_string()
        }
    }
}
