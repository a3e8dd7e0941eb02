//! Report assembly and emission: a stable JSON schema
//! {command, config, results, assertions} plus an aligned table format.
//! Output is byte-identical for identical (config, seed) pairs.

use crate::suites::Assertion;
use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub results: Vec<serde_json::Value>,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Table,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected table or json)")),
        }
    }
}

impl Report {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Report {
            command: command.to_string(),
            config,
            results: Vec::new(),
            assertions: Vec::new(),
        }
    }

    pub fn push_result(&mut self, value: serde_json::Value) {
        self.results.push(value);
    }

    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                serde_json::to_string_pretty(self).expect("report serializes") + "\n"
            }
            Format::Table => {
                let mut out = String::new();
                out.push_str(&format!("command: {}\n", self.command));
                out.push_str(&format!("config:  {}\n", self.config));
                for r in &self.results {
                    match r {
                        serde_json::Value::Object(map) => {
                            let fields: Vec<String> = map
                                .iter()
                                .map(|(k, v)| format!("{k}={v}"))
                                .collect();
                            out.push_str(&format!("  {}\n", fields.join("  ")));
                        }
                        other => out.push_str(&format!("  {other}\n")),
                    }
                }
                if !self.assertions.is_empty() {
                    let passed = self.assertions.iter().filter(|a| a.pass).count();
                    out.push_str(&format!(
                        "assertions: {passed}/{} passed\n",
                        self.assertions.len()
                    ));
                    for a in &self.assertions {
                        let mark = if a.pass { "PASS" } else { "FAIL" };
                        if a.detail.is_empty() {
                            out.push_str(&format!("  [{mark}] {}\n", a.name));
                        } else {
                            out.push_str(&format!("  [{mark}] {} -- {}\n", a.name, a.detail));
                        }
                    }
                }
                out
            }
        }
    }
}

/// Aligned per-degree dimension line for homology tables.
pub fn dims_line(label: &str, dims: &[(usize, usize, bool)]) -> serde_json::Value {
    serde_json::json!({
        "label": label,
        "dims": dims
            .iter()
            .map(|(n, d, trusted)| {
                serde_json::json!({"degree": n, "dim": d, "trusted": trusted})
            })
            .collect::<Vec<_>>(),
    })
}
