//! Reports and their JSON / CSV forms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;
use crate::run::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub params: Value,
    pub verdict: Verdict,
    pub certificate: Value,
    pub timing_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub results: Vec<ResultRow>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, results: Vec<ResultRow>) -> Self {
        let passed = results
            .iter()
            .filter(|r| r.verdict == Verdict::Pass)
            .count();
        Self {
            command: config.task.name().to_string(),
            summary: Summary {
                total: results.len(),
                passed,
                failed: results.len() - passed,
            },
            config,
            results,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("not a report: {e}")))
    }

    /// One row per result; parameter keys become columns, the certificate is
    /// kept as compact JSON.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let keys: BTreeSet<String> = self
            .results
            .iter()
            .filter_map(|r| r.params.as_object())
            .flat_map(|m| m.keys().cloned())
            .collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["index".to_string()];
        header.extend(keys.iter().cloned());
        header.extend(["verdict", "timing_ms", "certificate"].map(String::from));
        w.write_record(&header).map_err(csv_err)?;
        for (i, r) in self.results.iter().enumerate() {
            let mut rec = vec![i.to_string()];
            rec.extend(
                keys.iter()
                    .map(|k| r.params.get(k).map_or(String::new(), cell)),
            );
            rec.push(cell(
                &serde_json::to_value(r.verdict).expect("verdict serializes"),
            ));
            rec.push(r.timing_ms.map_or(String::new(), |t| t.to_string()));
            rec.push(r.certificate.to_string());
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}
