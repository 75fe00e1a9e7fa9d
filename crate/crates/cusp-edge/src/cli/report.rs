use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{OutputFormat, ScenarioConfig};

pub const SCHEMA: u32 = 1;

/// A named check and the number it was judged on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), pass: value <= tolerance, value: finite(value), tolerance: finite(tolerance) }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self { name: name.into(), pass, value: None, tolerance: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub name: String,
    pub value: Option<f64>,
}

impl ErrorEstimate {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value: finite(value) }
    }
}

pub(crate) fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Output of one scenario run. `results` is a table of records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub config: ScenarioConfig,
    pub results: Vec<Value>,
    pub checks: Vec<Check>,
    pub error_estimates: Vec<ErrorEstimate>,
    /// Seconds; written to standard error, not serialised, so that output
    /// is byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Option<f64>,
}

impl RunReport {
    pub fn new(config: &ScenarioConfig) -> Self {
        Self {
            schema: SCHEMA,
            command: config.command.name().into(),
            config: config.clone(),
            results: Vec::new(),
            checks: Vec::new(),
            error_estimates: Vec::new(),
            wall_time: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Column names of a result table: the keys of the first record, then any
/// new keys of later records in order of appearance.
fn columns(rows: &[Value]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        } else if !cols.iter().any(|c| c == "value") {
            cols.push("value".into());
        }
    }
    cols
}

fn csv_table(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, r: &[String]| w.write_record(r).expect("writing to memory");
    write(&mut w, header);
    for r in rows {
        write(&mut w, &r);
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

/// Serialises a report. JSON carries the whole report; CSV carries the
/// result table (or the checks when there are no results) with one header
/// row; text is a short human summary.
pub fn emit(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialise");
            s.push('\n');
            s
        }
        OutputFormat::Csv if !report.results.is_empty() => {
            let cols = columns(&report.results);
            let rows = report.results.iter().map(|r| match r {
                Value::Object(m) => cols.iter().map(|c| m.get(c).map(cell).unwrap_or_default()).collect(),
                other => cols.iter().map(|c| if c == "value" { cell(other) } else { String::new() }).collect(),
            });
            csv_table(&cols, rows)
        }
        OutputFormat::Csv => {
            let header: Vec<String> = ["check", "pass", "value", "tolerance"].map(String::from).to_vec();
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            let rows = report.checks.iter().map(|c| vec![c.name.clone(), c.pass.to_string(), opt(c.value), opt(c.tolerance)]);
            csv_table(&header, rows)
        }
        OutputFormat::Text => {
            let mut s = format!("{} (seed {})\n", report.command, report.config.seed);
            for r in &report.results {
                match r {
                    Value::Object(m) => {
                        let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
                        s.push_str(&format!("  {}\n", parts.join(" ")));
                    }
                    other => s.push_str(&format!("  {other}\n")),
                }
            }
            for c in &report.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                match (c.value, c.tolerance) {
                    (Some(v), Some(t)) => s.push_str(&format!("{verdict} {} {v:.3e} (tolerance {t:.1e})\n", c.name)),
                    (Some(v), None) => s.push_str(&format!("{verdict} {} {v:.3e}\n", c.name)),
                    _ => s.push_str(&format!("{verdict} {}\n", c.name)),
                }
            }
            for e in &report.error_estimates {
                s.push_str(&format!("error estimate {}: {}\n", e.name, e.value.map(|v| format!("{v:.3e}")).unwrap_or("n/a".into())));
            }
            s
        }
    }
}
