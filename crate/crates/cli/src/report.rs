use std::path::Path;

use anyhow::Result;
use permcode_core::{BoundResult, BoundStatus, DistanceSet, SolverDiagnostics};
use serde::Serialize;
use serde_json::Value;

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub seed: u64,
    pub versions: Versions,
    pub wall_time_s: f64,
    pub result: Value,
}

#[derive(Serialize)]
pub struct Versions {
    pub permcode: &'static str,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64, wall_time_s: f64, result: Value) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command,
            seed,
            versions: Versions { permcode: env!("CARGO_PKG_VERSION") },
            wall_time_s,
            result,
        }
    }
}

/// What a subcommand produced.
pub struct Outcome {
    pub result: Value,
    pub text: String,
    /// Header row first.
    pub csv: Option<Vec<Vec<String>>>,
    pub exit: u8,
}

impl Outcome {
    pub fn new(result: impl Serialize, text: String) -> Result<Self> {
        Ok(Outcome { result: serde_json::to_value(result)?, text, csv: None, exit: 0 })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lp,
    Sdp,
}

#[derive(Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub distances: DistanceSet,
    pub kind: BoundKind,
    pub raw_optimum: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_optimum: Option<String>,
    pub floored_bound: i64,
    pub product: u64,
    pub status: BoundStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<SolverDiagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formulation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variables: Option<usize>,
}

impl BoundReport {
    pub fn new(n: usize, distances: DistanceSet, kind: BoundKind, bound: BoundResult) -> Self {
        BoundReport {
            n,
            distances,
            kind,
            raw_optimum: bound.raw_optimum,
            exact_optimum: bound.exact_optimum,
            floored_bound: bound.floored_bound,
            product: distances.product(),
            status: bound.status,
            diagnostics: bound.diagnostics,
            formulation: None,
            variables: None,
        }
    }

    pub fn csv(&self) -> Vec<Vec<String>> {
        vec![
            ["n", "D", "kind", "raw_optimum", "floored_bound", "product"].map(String::from).to_vec(),
            vec![
                self.n.to_string(),
                self.distances.to_string(),
                format!("{:?}", self.kind).to_lowercase(),
                self.exact_optimum.clone().unwrap_or_else(|| format!("{:.9}", self.raw_optimum)),
                self.floored_bound.to_string(),
                self.product.to_string(),
            ],
        ]
    }
}

pub fn write_csv(path: &Path, rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Left-aligned first column, right-aligned others.
pub fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| if c == 0 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
