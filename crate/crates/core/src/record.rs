//! The verification-record schema: one JSON object per line, sorted
//! deterministically before writing so identical runs produce identical
//! bytes.

use serde::{Deserialize, Serialize};

use crate::muirhead::{CusumSubscript, Scenario};
use crate::scalar::{format_float, format_rational, ExactScalar};

pub const SCHEMA_VERSION: &str = "1";

/// Closed verdict vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Report,
    IdenticallyZero,
    Cap,
}

/// Scenario coordinates carried by every record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
pub struct ScenarioMeta {
    pub c: usize,
    pub b: usize,
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub superscript: Vec<usize>,
    pub h: Vec<usize>,
}

impl ScenarioMeta {
    pub fn new(scn: &Scenario, h: &CusumSubscript) -> Self {
        ScenarioMeta {
            c: scn.c,
            b: scn.b,
            k: scn.k,
            p: scn.p,
            q: scn.q,
            superscript: scn.superscript.positions().to_vec(),
            h: h.entries().to_vec(),
        }
    }

    pub fn without_subscript(scn: &Scenario) -> Self {
        ScenarioMeta {
            c: scn.c,
            b: scn.b,
            k: scn.k,
            p: scn.p,
            q: scn.q,
            superscript: scn.superscript.positions().to_vec(),
            h: Vec::new(),
        }
    }
}

/// One verified quantity. `value` is a canonical rational string (`1/6`)
/// or a float rendered with 17 significant digits; `w` is absent for
/// symbolic (odds-free) runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub schema_version: String,
    pub command: String,
    pub scenario: ScenarioMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<String>>,
    pub quantity: String,
    pub value: String,
    pub verdict: Verdict,
    pub seed: u64,
    pub elapsed_ms: u64,
}

impl VerificationRecord {
    pub fn rational_value(x: &ExactScalar) -> String {
        format_rational(x)
    }

    pub fn float_value(x: f64) -> String {
        format_float(x)
    }

    /// Full ordering key: scenario lexicographic, then subscript, then the
    /// remaining fields so ties cannot depend on production order.
    pub fn sort_key(&self) -> impl Ord + '_ {
        (
            &self.scenario,
            &self.quantity,
            &self.w,
            self.seed,
            &self.value,
        )
    }
}

/// Sorts records into their canonical on-disk order.
pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Serializes records as JSON Lines (newline-terminated, UTF-8).
pub fn to_jsonl(records: &[VerificationRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Parses a JSONL store back into records.
pub fn from_jsonl(text: &str) -> crate::Result<Vec<VerificationRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| crate::Error::Io(e.to_string())))
        .collect()
}
