//! Structured result of a sum or bound measurement.

use serde::Serialize;
use std::collections::BTreeMap;

/// Outcome of one measurement: the quantity, the bound it is tested against,
/// their ratio and everything needed to reproduce the run.
///
/// `passed` is `None` for report-only measurements where no threshold is
/// asserted (the measured constant is the deliverable).
#[derive(Clone, Debug, Serialize)]
pub struct SumReport {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
    pub passed: Option<bool>,
    pub warn: bool,
    pub params: BTreeMap<String, serde_json::Value>,
}

impl SumReport {
    pub fn new(name: impl Into<String>, value: f64, bound: f64) -> Self {
        let ratio = if bound != 0.0 { value / bound } else { f64::NAN };
        SumReport {
            name: name.into(),
            value,
            bound,
            ratio,
            passed: None,
            warn: false,
            params: BTreeMap::new(),
        }
    }

    pub fn pass(mut self, ok: bool) -> Self {
        self.passed = Some(ok);
        self
    }

    pub fn warn(mut self, w: bool) -> Self {
        self.warn = w;
        self
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// One CSV row: `name,value,bound,ratio,passed,warn`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.12e},{:.12e},{:.6e},{},{}",
            self.name,
            self.value,
            self.bound,
            self.ratio,
            self.passed.map(|b| b.to_string()).unwrap_or_default(),
            self.warn
        )
    }

    pub const CSV_HEADER: &'static str = "name,value,bound,ratio,passed,warn";
}
