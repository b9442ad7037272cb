//! Reports: a command echo, results, effective tolerances, and renderings
//! as text, JSON (sorted keys) or CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Rows of numbers with a header, e.g. `t,x1,...,xn`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub results: Map<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub lines: Vec<String>,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            passed: true,
            results: Map::new(),
            tolerances: BTreeMap::new(),
            lines: Vec::new(),
            table: None,
        }
    }

    /// Stores a serializable value; panics only on non-string map keys.
    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    /// A numeric result with its tolerance.
    pub fn numeric(&mut self, key: &str, value: f64, tol: f64) {
        self.results.insert(key.into(), json!({ "value": value, "tol": tol }));
    }

    pub fn tol(&mut self, key: &str, value: f64) {
        self.tolerances.insert(key.into(), value);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Records a check; a failed check fails the report.
    pub fn check(&mut self, name: &str, ok: bool) {
        self.passed &= ok;
        self.line(format!("{} {name}", if ok { "pass" } else { "FAIL" }));
    }

    pub fn to_json(&self) -> Value {
        json!({
            "metadata": {
                "command": self.command,
                "passed": self.passed,
                "tolerances": self.tolerances,
                "tool": "stratlab",
                "version": env!("CARGO_PKG_VERSION"),
            },
            "results": Value::Object(self.results.clone()),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = format!("# {}\n", self.command);
                for l in &self.lines {
                    let _ = writeln!(s, "{l}");
                }
                if !self.tolerances.is_empty() {
                    let tols: Vec<String> = self.tolerances.iter().map(|(k, v)| format!("{k}={v:e}")).collect();
                    let _ = writeln!(s, "tolerances: {}", tols.join(", "));
                }
                let _ = writeln!(s, "verdict: {}", if self.passed { "pass" } else { "fail" });
                s
            }
            Format::Csv => match &self.table {
                Some(t) => {
                    let mut s = t.header.join(",");
                    s.push('\n');
                    for r in &t.rows {
                        let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                        s.push_str(&cells.join(","));
                        s.push('\n');
                    }
                    s
                }
                None => {
                    let mut s = String::from("key,value\n");
                    for (k, v) in &self.results {
                        let v = match v {
                            Value::String(x) => x.clone(),
                            other => other.to_string(),
                        };
                        let _ = writeln!(s, "{k},{}", csv_escape(&v));
                    }
                    s
                }
            },
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes the rendering to `out`, or stdout.
pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> std::io::Result<()> {
    let text = report.render(format);
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_json() {
        let r = Report::new("stratlab gallery");
        let v = r.to_json();
        assert_eq!(v["results"], json!({}));
        assert_eq!(v["metadata"]["tool"], "stratlab");
    }

    #[test]
    fn json_keys_are_sorted() {
        let mut r = Report::new("x");
        r.set("zeta", 1);
        r.set("alpha", json!({"b": 1, "a": 2}));
        let s = r.render(Format::Json);
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }

    #[test]
    fn csv_table_and_fallback() {
        let mut r = Report::new("x");
        r.set("dim", 2);
        r.set("note", "a, b");
        assert_eq!(r.render(Format::Csv), "key,value\ndim,2\nnote,\"a, b\"\n");
        r.table = Some(Table { header: vec!["t".into(), "x1".into()], rows: vec![vec![0.0, 1.5]] });
        assert_eq!(r.render(Format::Csv), "t,x1\n0,1.5\n");
    }

    #[test]
    fn failed_check_fails_report() {
        let mut r = Report::new("x");
        r.check("one", true);
        r.check("two", false);
        assert!(!r.passed);
        assert!(r.render(Format::Text).ends_with("verdict: fail\n"));
    }
}
