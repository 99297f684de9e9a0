//! CSV and JSON writers. Every file starts with the same metadata object.

use std::io::{self, Write};

use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Preset};
use crate::experiments::{Cell, Table};

pub const TOOL: &str = "lz-dissipate";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits; non-finite values as `inf`, `-inf`, `nan`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(x) => format_number(*x),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => csv_field(s),
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(x) if x.is_finite() => json!(x),
        Cell::Num(x) => json!(format_number(*x)),
        Cell::Bool(b) => json!(b),
        Cell::Text(s) => json!(s),
    }
}

/// Metadata for a run; `table` is absent when the run failed.
pub fn metadata(preset: Preset, cfg: &ExperimentConfig, table: Option<&Table>) -> Value {
    let solver = cfg.solver.solver_config();
    let mut meta = json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "preset": preset,
        "experiment": cfg.experiment,
        "config": cfg,
        "resolved": {
            "lz": cfg.lz().ok(),
            "bath": cfg.bath().ok(),
            "initial_negativity": 0.5 * (2.0 * cfg.eta).sin().abs(),
        },
        "solver": solver,
    });
    if let Some(t) = table {
        meta["columns"] = json!(t.columns);
        meta["secular"] = json!(t.secular);
        meta["solver_stats"] = json!(t.solver_stats);
        if let Some(o) = &t.oracle {
            meta["oracle"] = json!(o);
        }
    }
    meta
}

pub fn write_csv<W: Write>(out: &mut W, meta: &Value, table: &Table) -> io::Result<()> {
    writeln!(out, "# {meta}")?;
    let header: Vec<String> = table.columns.iter().map(|c| csv_field(c)).collect();
    writeln!(out, "{}", header.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(cell_text).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_json<W: Write>(out: &mut W, meta: &Value, table: &Table) -> io::Result<()> {
    let rows: Vec<Vec<Value>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(cell_json).collect())
        .collect();
    let doc = json!({ "metadata": meta, "columns": table.columns, "rows": rows });
    writeln!(out, "{doc}")
}

pub fn write_table<W: Write>(
    out: &mut W,
    format: Format,
    meta: &Value,
    table: &Table,
) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(out, meta, table),
        Format::Json => write_json(out, meta, table),
    }
}

/// Diagnostic file for a failed run: the metadata line plus `# error:`.
pub fn write_failure<W: Write>(
    out: &mut W,
    format: Format,
    meta: &Value,
    err: &str,
) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "# {meta}")?;
            writeln!(out, "# error: {err}")
        }
        Format::Json => writeln!(out, "{}", json!({ "metadata": meta, "error": err })),
    }
}
