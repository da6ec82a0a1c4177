use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One predicted-vs-observed line. `satisfied` is set only for hard
/// assertions; asymptotic claims leave it empty and carry `hypothesis_met`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub family: String,
    pub params: String,
    pub check: String,
    pub seed: u64,
    /// Subset size, or `|A|x|B|` for two-set checks.
    pub size: String,
    pub observed: f64,
    pub expected: f64,
    pub bound: f64,
    pub ratio: f64,
    pub satisfied: Option<bool>,
    pub hypothesis_met: Option<bool>,
    #[serde(default)]
    pub note: String,
}

impl ReportRow {
    pub fn new(family: &str, params: &str, check: &str, seed: u64) -> Self {
        ReportRow {
            family: family.into(),
            params: params.into(),
            check: check.into(),
            seed,
            size: String::new(),
            observed: 0.0,
            expected: 0.0,
            bound: 0.0,
            ratio: f64::NAN,
            satisfied: None,
            hypothesis_met: None,
            note: String::new(),
        }
    }

    pub fn size(mut self, size: impl ToString) -> Self {
        self.size = size.to_string();
        self
    }

    /// Sets observed and expected, with their ratio when `expected != 0`.
    pub fn values(mut self, observed: f64, expected: f64) -> Self {
        self.observed = observed;
        self.expected = expected;
        self.ratio = if expected != 0.0 { observed / expected } else { f64::NAN };
        self
    }

    pub fn bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    pub fn assert(mut self, ok: bool) -> Self {
        self.satisfied = Some(ok);
        self
    }

    pub fn hypothesis(mut self, met: bool) -> Self {
        self.hypothesis_met = Some(met);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn failed(&self) -> bool {
        self.satisfied == Some(false)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

/// Column order of the CSV form.
pub const COLUMNS: [&str; 12] = [
    "family",
    "params",
    "check",
    "seed",
    "size",
    "observed",
    "expected",
    "bound",
    "ratio",
    "satisfied",
    "hypothesis_met",
    "note",
];

impl ExperimentReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: ExperimentReport) {
        self.rows.extend(other.rows);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn hard_failures(&self) -> Vec<&ReportRow> {
        self.rows.iter().filter(|r| r.failed()).collect()
    }

    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| !r.failed())
    }

    pub fn rows_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a ReportRow> + 'a {
        self.rows.iter().filter(move |r| r.check == check)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(COLUMNS)?;
        for r in &self.rows {
            w.write_record([
                r.family.clone(),
                r.params.clone(),
                r.check.clone(),
                r.seed.to_string(),
                r.size.clone(),
                fmt_num(r.observed),
                fmt_num(r.expected),
                fmt_num(r.bound),
                fmt_num(r.ratio),
                fmt_opt(r.satisfied),
                fmt_opt(r.hypothesis_met),
                r.note.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.rows)?;
        Ok(())
    }

    /// Counts of rows, hard checks and failures.
    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            rows: self.rows.len(),
            hard_checks: self.rows.iter().filter(|r| r.satisfied.is_some()).count(),
            hard_failures: self.hard_failures().len(),
            hypothesis_met: self.rows.iter().filter(|r| r.hypothesis_met == Some(true)).count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub rows: usize,
    pub hard_checks: usize,
    pub hard_failures: usize,
    pub hypothesis_met: usize,
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.6}")
    }
}

fn fmt_opt(b: Option<bool>) -> String {
    b.map(|v| v.to_string()).unwrap_or_default()
}
