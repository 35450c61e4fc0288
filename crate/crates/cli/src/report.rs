use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything a subcommand produces. Without `--timing` the rendered
/// report depends only on the inputs and the seed.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub field: String,
    pub seed: u64,
    pub domain: String,
    pub inputs: BTreeMap<&'static str, String>,
    #[serde(skip)]
    pub records: Vec<Value>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<String>,
    pub error: Option<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: &'static str, field: String, seed: u64, domain: String) -> RunReport {
        RunReport {
            command,
            field,
            seed,
            domain,
            inputs: BTreeMap::new(),
            records: Vec::new(),
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            error: None,
            passed: true,
            timing_ms: None,
        }
    }

    pub fn input(&mut self, key: &'static str, value: impl ToString) {
        self.inputs.insert(key, value.to_string());
    }

    pub fn record(&mut self, v: Value) {
        self.records.push(v);
    }

    pub fn verdict(&mut self, check: &str, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.verdicts.push(Verdict {
            check: check.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn witness(&mut self, w: impl ToString) {
        self.witnesses.push(w.to_string());
    }

    /// A failure of the computation itself (as opposed to bad input).
    pub fn fail(&mut self, e: impl ToString) {
        self.passed = false;
        self.error = Some(e.to_string());
    }

    /// One JSON object per record, then the report itself.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::json!({ "record": r }).to_string());
            out.push('\n');
        }
        let summary = serde_json::json!({ "report": self });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "bq {} over {} ({}, seed {})",
            self.command, self.field, self.domain, self.seed
        );
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for r in &self.records {
            let _ = writeln!(out, "  {}", text_record(r));
        }
        for v in &self.verdicts {
            let tag = if v.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}", v.check, v.detail);
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "witness: {w}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "time: {ms} ms");
        }
        let _ = writeln!(out, "result: {}", if self.passed { "pass" } else { "fail" });
        out
    }
}

fn text_record(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", text_value(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => text_value(other),
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
