//! Reproduction of the reference tables with a per-cell diff against the
//! embedded expected values. Every selected row is computed before the exit
//! status is decided.

use std::fmt::Write as _;

use anyhow::Result;
use permcode_core::algebra::multiplicities;
use permcode_core::lp::{build_lp, solve_lp};
use permcode_core::orbits::{burnside_count, burnside_count_swap};
use permcode_core::tables::{expected, BoundTable};
use permcode_core::{BoundStatus, OrbitIndex, SdpContext, SdpOptions, SymmetricGroup};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{align, Outcome};
use crate::{Exit, Global};

#[derive(Clone, Debug, Serialize)]
pub struct CellDiff {
    pub column: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    /// One-based position in the table.
    pub row: usize,
    pub key: String,
    pub values: Vec<String>,
    pub diffs: Vec<CellDiff>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Unrounded optima for bound tables.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw: Option<RawBounds>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RawBounds {
    pub sdp: f64,
    pub lp: String,
}

#[derive(Serialize)]
pub struct TableReport {
    pub which: u8,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
    pub mismatched_rows: usize,
}

/// Parses `k..l`, `k..=l` or `k` into a zero-based half-open range.
pub fn parse_rows(spec: &str, len: usize) -> Result<std::ops::Range<usize>> {
    let bad = || Exit { code: 2, message: format!("bad row range '{spec}'; use K..L with 1 ≤ K ≤ L ≤ {len}") };
    let (a, b) = match spec.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (spec.trim(), spec.trim()),
    };
    let a: usize = a.parse().map_err(|_| bad())?;
    let b: usize = b.parse().map_err(|_| bad())?;
    if a == 0 || a > b || b > len {
        return Err(bad().into());
    }
    Ok(a - 1..b)
}

fn check(diffs: &mut Vec<CellDiff>, column: &str, expected: impl ToString, got: impl ToString) {
    let (expected, got) = (expected.to_string(), got.to_string());
    if expected != got {
        diffs.push(CellDiff { column: column.into(), expected, got });
    }
}

fn table1(range: std::ops::Range<usize>) -> Result<(Vec<String>, Vec<TableRow>)> {
    let columns = ["n", "b_n", "b_n*", "enumerated"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for (i, e) in expected().table1.iter().enumerate().skip(range.start).take(range.len()) {
        let b = burnside_count(e.n)?;
        let bs = burnside_count_swap(e.n)?;
        let mut diffs = Vec::new();
        check(&mut diffs, "b_n", e.b, b);
        check(&mut diffs, "b_n*", e.b_swap, bs);
        let enumerated = if e.n <= 7 {
            let g = SymmetricGroup::new(e.n)?;
            let idx = OrbitIndex::enumerate(&g)?;
            check(&mut diffs, "enumerated", e.b, idx.num_orbits());
            idx.num_orbits().to_string()
        } else {
            "-".into()
        };
        rows.push(TableRow {
            row: i + 1,
            key: e.n.to_string(),
            values: vec![e.n.to_string(), b.to_string(), bs.to_string(), enumerated],
            diffs,
            notes: Vec::new(),
            raw: None,
        });
    }
    Ok((columns, rows))
}

fn table3(range: std::ops::Range<usize>) -> Result<(Vec<String>, Vec<TableRow>)> {
    let columns = ["n", "nonzero m_k"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for (i, e) in expected().table3.iter().enumerate().skip(range.start).take(range.len()) {
        let t = multiplicities(&SymmetricGroup::new(e.n)?)?;
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let got = join(&t.nonzero_sorted());
        let mut diffs = Vec::new();
        check(&mut diffs, "nonzero m_k", join(&e.m), &got);
        rows.push(TableRow {
            row: i + 1,
            key: e.n.to_string(),
            values: vec![e.n.to_string(), got],
            diffs,
            notes: Vec::new(),
            raw: None,
        });
    }
    Ok((columns, rows))
}

fn bound_table(table: &BoundTable, range: std::ops::Range<usize>, seed: u64) -> Result<(Vec<String>, Vec<TableRow>)> {
    let columns = ["D", "M_SDP", "M_LP", "product"].map(String::from).to_vec();
    let options = SdpOptions::default();
    let ctx = SdpContext::new(table.n, options.formulation, seed)?;
    let rows = table.rows[range.clone()]
        .par_iter()
        .enumerate()
        .map(|(i, e)| -> Result<TableRow> {
            let d = e.distances();
            let sdp = ctx.bound(d, &options)?.bound;
            let lp = solve_lp(&build_lp(table.n, &d)?);
            let mut diffs = Vec::new();
            let mut notes = Vec::new();
            for (name, b) in [("M_SDP", &sdp), ("M_LP", &lp)] {
                if b.status != BoundStatus::Optimal {
                    notes.push(format!("{name} solver status {:?}", b.status));
                }
            }
            check(&mut diffs, "M_SDP", e.sdp, sdp.floored_bound);
            check(&mut diffs, "M_LP", e.lp, lp.floored_bound);
            check(&mut diffs, "product", e.expected_product(), d.product());
            if e.corrected_product.is_some() {
                notes.push(format!("erratum: published product {} corrected to {}", e.product, d.product()));
            }
            Ok(TableRow {
                row: range.start + i + 1,
                key: d.to_string(),
                values: vec![
                    d.to_string(),
                    sdp.floored_bound.to_string(),
                    lp.floored_bound.to_string(),
                    d.product().to_string(),
                ],
                diffs,
                notes,
                raw: Some(RawBounds { sdp: sdp.raw_optimum, lp: lp.exact_optimum.unwrap_or_default() }),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((columns, rows))
}

pub fn run(which: u8, rows: Option<&str>, g: &Global) -> Result<Outcome> {
    let t = expected();
    let len = match which {
        1 => t.table1.len(),
        2 => t.table2.rows.len(),
        3 => t.table3.len(),
        _ => t.table4.rows.len(),
    };
    let range = match rows {
        Some(spec) => parse_rows(spec, len)?,
        None => 0..len,
    };
    if which == 4 && range.len() > 8 && !g.allow_slow {
        return Err(Exit {
            code: 3,
            message: format!(
                "{} rows of the n = 7 table take tens of minutes; pass --allow-slow or select fewer with --rows",
                range.len()
            ),
        }
        .into());
    }
    let (columns, rows) = match which {
        1 => table1(range)?,
        2 => bound_table(&t.table2, range, g.seed)?,
        3 => table3(range)?,
        _ => bound_table(&t.table4, range, g.seed)?,
    };
    let mismatched_rows = rows.iter().filter(|r| !r.diffs.is_empty()).count();
    let report = TableReport { which, columns, rows, mismatched_rows };

    let mut grid = vec![report.columns.iter().cloned().chain(std::iter::once("status".into())).collect::<Vec<_>>()];
    for r in &report.rows {
        let status = if r.diffs.is_empty() { "ok" } else { "DIFF" };
        grid.push(r.values.iter().cloned().chain(std::iter::once(status.into())).collect());
    }
    let mut text = format!("table {which}\n");
    text.push_str(&align(&grid));
    for r in &report.rows {
        for d in &r.diffs {
            let _ = writeln!(text, "row {} {}: {} expected {}, got {}", r.row, r.key, d.column, d.expected, d.got);
        }
        for note in &r.notes {
            let _ = writeln!(text, "row {} {}: {note}", r.row, r.key);
        }
        if let (Some(raw), false) = (&r.raw, r.diffs.is_empty()) {
            let _ = writeln!(text, "row {} {}: raw SDP {:.6}, exact LP {}", r.row, r.key, raw.sdp, raw.lp);
        }
    }
    let _ = writeln!(text, "{}/{} rows match", report.rows.len() - mismatched_rows, report.rows.len());

    let csv = grid.iter().map(|r| r[..r.len() - 1].to_vec()).collect();
    let mut out = Outcome::new(&report, text)?;
    out.csv = Some(csv);
    if mismatched_rows > 0 {
        eprintln!("{mismatched_rows} row(s) differ from the reference values");
        out.exit = 1;
    }
    Ok(out)
}
