//! Output rendering: every run carries its resolved configuration plus
//! structured rows, printed as text, CSV or JSON.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub struct CommandOutput {
    pub config: Map<String, Value>,
    pub rows: Vec<Value>,
    pub lines: Vec<String>,
    pub passed: Option<bool>,
}

impl CommandOutput {
    pub fn new(config: Map<String, Value>) -> Self {
        CommandOutput {
            config,
            rows: Vec::new(),
            lines: Vec::new(),
            passed: None,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn row(&mut self, v: Value) {
        self.rows.push(v);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = format!("# config {}\n", Value::Object(self.config.clone()));
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
                if let Some(p) = self.passed {
                    out.push_str(if p { "RESULT PASS\n" } else { "RESULT FAIL\n" });
                }
                out
            }
            Format::Json => {
                let mut top = Map::new();
                top.insert("config".into(), Value::Object(self.config.clone()));
                top.insert("results".into(), Value::Array(self.rows.clone()));
                if let Some(p) = self.passed {
                    top.insert("passed".into(), Value::Bool(p));
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(top)).unwrap();
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut out = format!("# config {}\n", Value::Object(self.config.clone()));
                // header: sorted union of row keys
                let mut keys: Vec<String> = Vec::new();
                for r in &self.rows {
                    if let Value::Object(m) = r {
                        for k in m.keys() {
                            if !keys.contains(k) {
                                keys.push(k.clone());
                            }
                        }
                    }
                }
                keys.sort();
                out.push_str(&keys.join(","));
                out.push('\n');
                for r in &self.rows {
                    if let Value::Object(m) = r {
                        let cells: Vec<String> = keys
                            .iter()
                            .map(|k| m.get(k).map(render_cell).unwrap_or_default())
                            .collect();
                        out.push_str(&cells.join(","));
                        out.push('\n');
                    }
                }
                if let Some(p) = self.passed {
                    out.push_str(if p { "# RESULT PASS\n" } else { "# RESULT FAIL\n" });
                }
                out
            }
        }
    }
}

fn render_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
