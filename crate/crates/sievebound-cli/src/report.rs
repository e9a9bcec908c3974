//! Structured command output with text, CSV, and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Usage(format!(
                "unknown format {other:?} (expected text, csv, or json)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultEntry {
    pub name: String,
    pub value: f64,
    pub error_bound: f64,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ResultEntry {
    pub fn new(name: impl Into<String>, value: f64, error_bound: f64, method: &str) -> Self {
        ResultEntry {
            name: name.into(),
            value,
            error_bound,
            method: method.to_string(),
            exact: None,
            expected: None,
            delta: None,
            pass: None,
            detail: None,
        }
    }

    pub fn exact(mut self, s: impl Into<String>) -> Self {
        self.exact = Some(s.into());
        self
    }

    pub fn against(mut self, expected: f64, tol: f64) -> Self {
        let delta = (self.value - expected).abs();
        self.expected = Some(expected);
        self.delta = Some(delta);
        self.pass = Some(delta <= tol);
        self
    }

    pub fn check(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn detail(mut self, s: impl Into<String>) -> Self {
        self.detail = Some(s.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub results: Vec<ResultEntry>,
    pub provenance: String,
    pub version: String,
    pub timestamp: u64,
}

impl Report {
    pub fn new(command: &str, params: BTreeMap<String, String>) -> Self {
        Report {
            command: command.to_string(),
            params,
            results: Vec::new(),
            provenance: format!("embedded reference targets v{}", crate::targets::load().version),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn push(&mut self, entry: ResultEntry) {
        self.results.push(entry);
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.pass != Some(false))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serialization"),
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} (v{})", self.command, self.version);
        for (k, v) in &self.params {
            let _ = writeln!(out, "#   {k} = {v}");
        }
        for r in &self.results {
            let _ = write!(out, "{:<28} {:>16.10}", r.name, r.value);
            if r.error_bound > 0.0 {
                let _ = write!(out, " ±{:.2e}", r.error_bound);
            }
            let _ = write!(out, "  [{}]", r.method);
            if let Some(e) = &r.exact {
                let _ = write!(out, "  = {e}");
            }
            if let (Some(exp), Some(d)) = (r.expected, r.delta) {
                let _ = write!(out, "  expected {exp} |Δ| {d:.2e}");
            }
            match r.pass {
                Some(true) => {
                    let _ = write!(out, "  PASS");
                }
                Some(false) => {
                    let _ = write!(out, "  FAIL");
                }
                None => {}
            }
            if let Some(d) = &r.detail {
                let _ = write!(out, "  ({d})");
            }
            let _ = writeln!(out);
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::from("name,value,error_bound,method,exact,expected,delta,pass,detail\r\n");
        for r in &self.results {
            let row = [
                csv_field(&r.name),
                format!("{}", r.value),
                format!("{}", r.error_bound),
                csv_field(&r.method),
                csv_field(r.exact.as_deref().unwrap_or("")),
                r.expected.map(|v| v.to_string()).unwrap_or_default(),
                r.delta.map(|v| v.to_string()).unwrap_or_default(),
                r.pass
                    .map(|p| if p { "pass" } else { "fail" }.to_string())
                    .unwrap_or_default(),
                csv_field(r.detail.as_deref().unwrap_or("")),
            ];
            out.push_str(&row.join(","));
            out.push_str("\r\n");
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new("eval", BTreeMap::new());
        r.push(ResultEntry::new("omega", 4.5, 0.0, "exact").against(4.5, 1e-3));
        let v: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        for key in ["command", "params", "results", "provenance", "version", "timestamp"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let e = &v["results"][0];
        for key in ["name", "value", "error_bound", "method", "pass"] {
            assert!(e.get(key).is_some(), "missing result key {key}");
        }
    }

    #[test]
    fn pass_tracking() {
        let mut r = Report::new("verify", BTreeMap::new());
        r.push(ResultEntry::new("a", 1.0, 0.0, "exact").check(true));
        assert!(r.all_passed());
        r.push(ResultEntry::new("b", 1.0, 0.0, "exact").check(false));
        assert!(!r.all_passed());
    }
}
