//! CSV output: result tables, meshes and nodal fields.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use optcert_core::experiments::ScenarioResult;
use optcert_core::fem::P1Function;
use optcert_core::mesh::Mesh;

pub const TABLE_HEADER: [&str; 7] = ["alpha", "pnorm", "eta", "J", "verdict", "iterations", "residual"];

/// Scientific notation with 12 significant digits and a signed two-digit
/// exponent, e.g. `1.53060054307e-02`.
pub fn sci(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Writes one row per alpha. Failed rows keep their alpha, carry the verdict
/// `failed` and leave the numeric columns empty.
pub fn write_table<W: Write>(out: W, result: &ScenarioResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE_HEADER)?;
    for row in &result.rows {
        match &row.outcome {
            Ok(d) => w.write_record([
                sci(row.alpha),
                sci(d.pnorm),
                sci(d.eta),
                sci(d.j),
                d.verdict.as_str().to_string(),
                d.iterations.to_string(),
                sci(d.residual),
            ])?,
            Err(_) => w.write_record([sci(row.alpha), String::new(), String::new(), String::new(), "failed".into(), String::new(), String::new()])?,
        }
    }
    w.flush()?;
    Ok(())
}

/// `nodes.csv` with `x,y,flag` (flag 1 on the boundary) and `triangles.csv`
/// with 0-based `i,j,k`.
pub fn write_mesh(dir: &Path, mesh: &Mesh) -> Result<()> {
    let mut w = csv::Writer::from_path(dir.join("nodes.csv")).context("creating nodes.csv")?;
    w.write_record(["x", "y", "flag"])?;
    for (k, x) in mesh.nodes().iter().enumerate() {
        w.write_record([sci(x[0]), sci(x[1]), u8::from(mesh.is_boundary(k)).to_string()])?;
    }
    w.flush()?;
    let mut w = csv::Writer::from_path(dir.join("triangles.csv")).context("creating triangles.csv")?;
    w.write_record(["i", "j", "k"])?;
    for t in mesh.triangles() {
        w.write_record(t.map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// `x,y,value` in node order.
pub fn write_field(path: &Path, mesh: &Mesh, f: &P1Function) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["x", "y", "value"])?;
    for (x, v) in mesh.nodes().iter().zip(&f.values) {
        w.write_record([sci(x[0]), sci(x[1]), sci(*v)])?;
    }
    w.flush()?;
    Ok(())
}
