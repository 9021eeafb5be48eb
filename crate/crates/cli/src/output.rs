//! Self-describing CSV and JSON output.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

pub const ARTIFACT: &str = "koranyi";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One pass/fail check of a run.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }

    /// Passes when `value > limit`.
    pub fn above(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value > limit,
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value: pass as u8 as f64,
            limit: 1.0,
            pass,
        }
    }
}

/// How `--plot` draws a report: columns are 1-based CSV column numbers.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub x: usize,
    pub y: usize,
    pub logx: bool,
    pub logy: bool,
    /// Column whose value selects the series, if any.
    pub group: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Map<String, Value>,
    pub checks: Vec<Check>,
    pub plot: Option<PlotSpec>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            summary: Map::new(),
            checks: Vec::new(),
            plot: None,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(
            key.to_string(),
            serde_json::to_value(value).expect("summary value serialises"),
        );
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn header(config: &RunConfig) -> Value {
    json!({ "artifact": ARTIFACT, "version": VERSION, "subcommand": config.subcommand.name() })
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(config: &RunConfig, report: &Report) -> String {
    match config.format {
        Format::Json => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        report
                            .columns
                            .iter()
                            .map(|c| c.to_string())
                            .zip(r.iter().cloned())
                            .collect(),
                    )
                })
                .collect();
            let doc = json!({
                "artifact": header(config),
                "config": config,
                "columns": report.columns,
                "rows": rows,
                "summary": report.summary,
                "checks": report.checks,
                "ok": report.ok(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serialises");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# {}", header(config));
            let _ = writeln!(
                s,
                "# config {}",
                serde_json::to_string(config).expect("config serialises")
            );
            let _ = writeln!(s, "{}", report.columns.join(","));
            for row in &report.rows {
                let cells: Vec<String> = row.iter().map(cell).collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
            if !report.summary.is_empty() {
                let _ = writeln!(s, "# summary {}", Value::Object(report.summary.clone()));
            }
            for c in &report.checks {
                let _ = writeln!(s, "# check {}", serde_json::to_string(c).expect("check serialises"));
            }
            let _ = writeln!(s, "# ok {}", report.ok());
            s
        }
    }
}

/// A gnuplot script reading the CSV at `data`.
pub fn plot_script(data: &Path, report: &Report, spec: &PlotSpec) -> String {
    let name = |i: usize| report.columns.get(i - 1).copied().unwrap_or("?");
    let file = data
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut s = String::new();
    let _ = writeln!(s, "# {ARTIFACT} {VERSION}: gnuplot -persist {}", file.clone() + ".gp");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key autotitle columnhead");
    if spec.logx {
        let _ = writeln!(s, "set logscale x");
    }
    if spec.logy {
        let _ = writeln!(s, "set logscale y");
    }
    let _ = writeln!(s, "set xlabel '{}'", name(spec.x));
    let _ = writeln!(s, "set ylabel '{}'", name(spec.y));
    let y = if spec.logy {
        format!("(abs(${}))", spec.y)
    } else {
        spec.y.to_string()
    };
    match spec.group {
        Some(g) => {
            let mut groups: Vec<String> = report.rows.iter().map(|r| cell(&r[g - 1])).collect();
            groups.dedup();
            groups.sort();
            groups.dedup();
            let parts: Vec<String> = groups
                .iter()
                .map(|v| {
                    format!(
                        "'{file}' using (strcol({g}) eq '{v}' ? ${x} : NaN):{y} with linespoints title '{gn}={v}'",
                        x = spec.x,
                        gn = name(g)
                    )
                })
                .collect();
            let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
        }
        None => {
            let _ = writeln!(s, "plot '{file}' using {}:{y} with linespoints notitle", spec.x);
        }
    }
    s
}
