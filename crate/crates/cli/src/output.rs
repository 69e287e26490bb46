//! CSV and JSON rendering. Floats use [`photostat::format::float`] so output
//! is byte-identical across runs and platforms.

use photostat::format::float;
use photostat::oscillator::WRONSKIAN_TOL;
use photostat::phase_space::{HERMITICITY_TOL, SUPPORT_TOL, SYMPLECTIC_TOL};
use serde_json::{json, Value};

use crate::config::{Format, JobConfig, CONFIG_SCHEMA_VERSION};
use crate::jobs::{Artifact, Cell};
use crate::CLI_VERSION;

/// Rendered main output plus an optional grid sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub body: String,
    pub sidecar: Option<String>,
}

fn cell(c: &Cell) -> String {
    match c {
        Cell::Index(k) => k.to_string(),
        Cell::Real(x) => float(*x),
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Index(k) => json!(k),
        Cell::Real(x) => json!(float(*x).parse::<f64>().expect("formatted float parses")),
    }
}

/// Provenance block carried by every JSON result.
pub fn provenance(cfg: &JobConfig) -> Value {
    json!({
        "schema_version": CONFIG_SCHEMA_VERSION,
        "modules": { "photostat": photostat::VERSION, "photostat-cli": CLI_VERSION },
        "command": cfg.command.name(),
        "grid": cfg.grid,
        "caps": cfg.caps,
        "tolerances": {
            "hermiticity": HERMITICITY_TOL,
            "support": SUPPORT_TOL,
            "symplectic": SYMPLECTIC_TOL,
            "wronskian": WRONSKIAN_TOL,
        },
    })
}

fn table_csv(columns: &[String], rows: &[Vec<Cell>]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(cell).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn render(artifact: &Artifact, cfg: &JobConfig, format: Format) -> Rendered {
    match (artifact, format) {
        (Artifact::Table { columns, rows }, Format::Csv) => Rendered { body: table_csv(columns, rows), sidecar: None },
        (Artifact::Grid(g), Format::Csv) => Rendered { body: g.table_csv(), sidecar: Some(g.sidecar_json() + "\n") },
        (Artifact::Table { columns, rows }, Format::Json) => {
            let rows: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(cell_json).collect()).collect();
            let doc = json!({ "provenance": provenance(cfg), "columns": columns, "rows": rows });
            Rendered { body: serde_json::to_string_pretty(&doc).unwrap() + "\n", sidecar: None }
        }
        (Artifact::Grid(g), Format::Json) => {
            let values: Vec<[f64; 2]> = g.values().iter().map(|v| [v.re, v.im]).collect();
            let doc = json!({ "provenance": provenance(cfg), "grid": g.sidecar(), "values": values });
            Rendered { body: serde_json::to_string_pretty(&doc).unwrap() + "\n", sidecar: None }
        }
    }
}
