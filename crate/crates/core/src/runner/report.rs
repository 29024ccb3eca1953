use std::io::{self, Write};
use std::path::Path;
use std::time::Duration;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::config::Audit;
use crate::model::Rational;

fn serialize_int<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match value.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&value.to_string()),
    }
}

struct Int<'a>(&'a BigInt);

impl Serialize for Int<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_int(self.0, s)
    }
}

/// Decimal rendering rounded to 12 significant digits.
pub fn approx(value: &Rational) -> f64 {
    let v = value.to_f64().unwrap_or(f64::NAN);
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// `{"num", "den", "approx"}`. Integers beyond `i64` are written as strings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactValue(pub Rational);

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExactValue", 3)?;
        st.serialize_field("num", &Int(self.0.numer()))?;
        st.serialize_field("den", &Int(self.0.denom()))?;
        st.serialize_field("approx", &approx(&self.0))?;
        st.end()
    }
}

/// `{"num", "den"}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDefect(pub Rational);

impl Serialize for ExactDefect {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExactDefect", 2)?;
        st.serialize_field("num", &Int(self.0.numer()))?;
        st.serialize_field("den", &Int(self.0.denom()))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub audit: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<ExactDefect>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl AuditRecord {
    pub fn checked(audit: Audit, pass: bool, defect: Rational) -> Self {
        Self {
            audit: audit.name(),
            pass: Some(pass),
            defect: Some(ExactDefect(defect)),
            detail: None,
            skipped: None,
        }
    }

    pub fn skipped(audit: Audit, reason: impl Into<String>) -> Self {
        Self {
            audit: audit.name(),
            pass: None,
            defect: None,
            detail: None,
            skipped: Some(reason.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Optimal,
    Infeasible,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationCounts {
    pub saturated: usize,
    pub partial: usize,
    pub empty: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputFiles {
    pub plan: String,
    pub saturation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvedSummary {
    pub value: ExactValue,
    pub solver: String,
    pub iterations: usize,
    pub saturation: SaturationCounts,
    /// `n_x + n_y - 1`, the most partial cells a vertex can have.
    pub partial_bound: usize,
    pub files: OutputFiles,
    pub audits: Vec<AuditRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunEntry {
    pub density: ExactValue,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(flatten)]
    pub solved: Option<SolvedSummary>,
    /// Wall time of the solve; kept out of the JSON so reruns stay byte-identical.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub d: usize,
    pub n: usize,
    pub domain: String,
    pub cost: String,
    pub mode: &'static str,
    /// False in float mode: audits there compare against a tolerance.
    pub certifying: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub runs: Vec<RunEntry>,
}

impl RunReport {
    pub fn any_infeasible(&self) -> bool {
        self.runs.iter().any(|r| r.status != RunStatus::Optimal)
    }

    pub fn failed_audits(&self) -> impl Iterator<Item = (&RunEntry, &AuditRecord)> {
        self.runs.iter().flat_map(|r| {
            r.solved
                .iter()
                .flat_map(move |s| s.audits.iter().filter(|a| a.failed()).map(move |a| (r, a)))
        })
    }

    /// 0 when every run solved and every audit passed, 3 on an audit failure,
    /// 2 when some run had no solution.
    pub fn exit_code(&self) -> i32 {
        if self.failed_audits().next().is_some() {
            3
        } else if self.any_infeasible() {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

pub fn write_report_json_to<W: Write>(report: &RunReport, mut out: W) -> io::Result<()> {
    out.write_all(report.to_json().as_bytes())?;
    out.flush()
}

pub fn write_report_json(report: &RunReport, path: &Path) -> io::Result<()> {
    write_report_json_to(report, std::fs::File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;
    use serde_json::json;

    #[test]
    fn exact_value_shape() {
        let v = serde_json::to_string(&ExactValue(ratio(-1, 16))).unwrap();
        assert_eq!(v, r#"{"num":-1,"den":16,"approx":-0.0625}"#);
        assert_eq!(approx(&ratio(1, 3)), 0.333333333333);
        let big = Rational::new(BigInt::from(10).pow(30), BigInt::from(3));
        let v = serde_json::to_value(ExactDefect(big)).unwrap();
        assert_eq!(v["num"], json!("1000000000000000000000000000000"));
    }

    #[test]
    fn audit_shapes() {
        let pass = AuditRecord::checked(Audit::Conjugate, true, ratio(0, 1));
        assert_eq!(
            serde_json::to_string(&pass).unwrap(),
            r#"{"audit":"conjugate","pass":true,"defect":{"num":0,"den":1}}"#
        );
        let skip = AuditRecord::skipped(Audit::Negate, "needs centered grids");
        assert_eq!(
            serde_json::to_string(&skip).unwrap(),
            r#"{"audit":"negate","skipped":"needs centered grids"}"#
        );
        assert!(!skip.failed());
    }

    #[test]
    fn infeasible_entry_has_no_value() {
        let entry = RunEntry {
            density: ExactValue(ratio(1, 2)),
            status: RunStatus::Infeasible,
            message: None,
            solved: None,
            elapsed: Duration::from_millis(3),
        };
        let v = serde_json::to_value(&entry).unwrap();
        assert_eq!(v["status"], json!("infeasible"));
        assert!(v.get("value").is_none());
        assert!(v.get("elapsed").is_none());
    }
}
