//! Report documents and their JSON, CSV, table and plot-data renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use preschwarz::Warning;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Rows for the CSV and table renderings.
#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// One named `x y` series for `--plot-data`.
#[derive(Debug)]
pub struct Curve {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), points }
    }
}

/// What a command produced.
pub struct Outcome {
    pub payload: serde_json::Value,
    pub table: Table,
    pub curves: Vec<Curve>,
    pub warnings: Vec<Warning>,
    /// False when a verification failed.
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a [String],
    pub timestamp: Option<u64>,
    pub passed: bool,
    pub payload: &'a serde_json::Value,
    pub warnings: &'a [Warning],
}

pub fn render_json(doc: &ReportDocument<'_>) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report documents always serialize");
    s.push('\n');
    s
}

pub fn render_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.headers).expect("writing to memory");
    for row in &table.rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

pub fn render_table(table: &Table) -> String {
    let mut widths: Vec<usize> = table.headers.iter().map(|h| h.chars().count()).collect();
    for row in &table.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let text: Vec<String> = cells
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        out.push_str(text.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut out, &mut table.headers.iter().copied());
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    line(&mut out, &mut rule.iter().map(String::as_str));
    for row in &table.rows {
        line(&mut out, &mut row.iter().map(String::as_str));
    }
    out
}

/// `# name` then `x y` lines per curve, blocks separated by a blank line.
pub fn render_plot(curves: &[Curve]) -> String {
    let mut out = String::new();
    for (i, curve) in curves.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "# {}", curve.name);
        for (x, y) in &curve.points {
            let _ = writeln!(out, "{x} {y}");
        }
    }
    out
}

/// Shortest round-trip text for a real, `inf`/`nan` spelled out.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
