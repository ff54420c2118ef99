//! CSV and JSON renderings of analysis results.

use std::fmt::Write as _;

use qhatm_core::analysis::{CurvePoint, ErrorRecord, TableRow};
use qhatm_core::Coords;
use serde::Serialize;

/// 17 significant digits; enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// 16 significant digits, shortest form (what `%.16g` shows).
pub fn short(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.15e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

/// A rectangular table that renders as CSV or as `{"columns", "rows"}` JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Flag(u8),
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match c {
                    Cell::Num(x) => out.push_str(&num(*x)),
                    Cell::Flag(f) => write!(out, "{f}").unwrap(),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables always serialize");
        s.push('\n');
        s
    }
}

pub fn hcurve_table(points: &[CurvePoint]) -> Table {
    let mut t = Table::new(["h", "value", "divergent"]);
    for p in points {
        t.push(vec![Cell::Num(p.h), Cell::Num(p.value), Cell::Flag(p.divergent as u8)]);
    }
    t
}

/// `columns` are the point columns (coordinates then evolution variable).
pub fn error_grid_table(columns: &[String], records: &[ErrorRecord]) -> Table {
    let mut t = Table::new(columns.iter().cloned().chain(["approx", "exact", "abs_err"].map(String::from)));
    for r in records {
        let mut row: Vec<Cell> = r.point.iter().map(|&x| Cell::Num(x)).collect();
        row.extend([Cell::Num(r.approx), Cell::Num(r.exact), Cell::Num(r.abs_err)]);
        t.push(row);
    }
    t
}

pub fn residual_table(columns: &[String], sweep: &[(Coords, f64)]) -> Table {
    let mut t = Table::new(columns.iter().cloned().chain(["abs_residual".to_string()]));
    for (pt, r) in sweep {
        let mut row: Vec<Cell> = columns.iter().map(|c| Cell::Num(pt.get(c).unwrap_or(f64::NAN))).collect();
        row.push(Cell::Num(*r));
        t.push(row);
    }
    t
}

pub fn table45_table(rows: &[TableRow]) -> Table {
    let mut t = Table::new(["xyz", "t", "qhatm", "exact", "abs_err", "paper_qhatm", "paper_exact"]);
    for r in rows {
        t.push(
            [r.xyz, r.t, r.qhatm, r.exact, r.abs_err, r.paper_qhatm, r.paper_exact]
                .map(Cell::Num)
                .to_vec(),
        );
    }
    t
}
