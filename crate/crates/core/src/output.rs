//! CSV and JSON serialization of stress runs and edge-law comparisons.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::EdgeDescriptor;
use crate::stress::{StressResult, UNITS};

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("write failed: {e}"))
}

fn write_header<W: Write>(out: &mut W, result: &StressResult) -> Result<()> {
    let params = serde_json::to_string(&result.metadata.params).map_err(|e| Error::Config(e.to_string()))?;
    writeln!(out, "# units: {UNITS}").map_err(io_err)?;
    writeln!(out, "# profile_sha256: {}", result.metadata.profile_hash).map_err(io_err)?;
    writeln!(out, "# params: {params}").map_err(io_err)
}

/// `z,sigma_zz,err,converged` with `#` metadata lines.
pub fn write_stress_csv<W: Write>(out: &mut W, result: &StressResult) -> Result<()> {
    write_header(out, result)?;
    writeln!(out, "z,sigma_zz,err,converged").map_err(io_err)?;
    for p in &result.points {
        writeln!(out, "{:.15e},{:.15e},{:.15e},{}", p.z, p.sigma, p.err, p.converged).map_err(io_err)?;
    }
    Ok(())
}

pub fn write_stress_json<W: Write>(out: &mut W, result: &StressResult) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, result).map_err(|e| Error::Config(e.to_string()))?;
    writeln!(out).map_err(io_err)
}

/// One row of a numeric vs edge-law comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub z: f64,
    /// Distance to the nearest edge.
    pub a: f64,
    pub sigma: f64,
    pub err: f64,
    pub edge_law: f64,
    pub rel_dev: f64,
}

/// Range of `a` near one edge where `|rel_dev|` stays below the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AgreementWindow {
    pub z_edge: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    pub threshold: f64,
    pub windows: Vec<AgreementWindow>,
}

impl Comparison {
    pub fn new(result: &StressResult, edge_law: &[f64], edges: &[EdgeDescriptor], threshold: f64) -> Self {
        let rows: Vec<CompareRow> = result
            .points
            .iter()
            .zip(edge_law)
            .map(|(p, &law)| CompareRow {
                z: p.z,
                a: edges.iter().map(|e| (p.z - e.z_edge).abs()).fold(f64::INFINITY, f64::min),
                sigma: p.sigma,
                err: p.err,
                edge_law: law,
                rel_dev: if law != 0.0 { (p.sigma - law) / law } else { f64::NAN },
            })
            .collect();
        let windows = edges
            .iter()
            .filter_map(|e| {
                // walk outward from the edge, keep the agreeing run closest to it
                let mut near: Vec<&CompareRow> = rows
                    .iter()
                    .filter(|r| {
                        edges
                            .iter()
                            .map(|o| (r.z - o.z_edge).abs())
                            .fold(f64::INFINITY, f64::min)
                            == (r.z - e.z_edge).abs()
                    })
                    .collect();
                near.sort_by(|x, y| x.a.total_cmp(&y.a));
                let first = near.iter().position(|r| r.rel_dev.abs() < threshold)?;
                let run: Vec<_> = near[first..].iter().take_while(|r| r.rel_dev.abs() < threshold).collect();
                Some(AgreementWindow {
                    z_edge: e.z_edge,
                    a_min: run[0].a,
                    a_max: run[run.len() - 1].a,
                    points: run.len(),
                })
            })
            .collect();
        Self { rows, threshold, windows }
    }
}

pub fn write_compare_csv<W: Write>(out: &mut W, result: &StressResult, cmp: &Comparison) -> Result<()> {
    write_header(out, result)?;
    writeln!(out, "# threshold: {}", cmp.threshold).map_err(io_err)?;
    for w in &cmp.windows {
        writeln!(
            out,
            "# window: edge {} a in [{:.6e}, {:.6e}] ({} points)",
            w.z_edge, w.a_min, w.a_max, w.points
        )
        .map_err(io_err)?;
    }
    writeln!(out, "z,a,sigma_zz,err,edge_law,rel_dev").map_err(io_err)?;
    for r in &cmp.rows {
        writeln!(
            out,
            "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
            r.z, r.a, r.sigma, r.err, r.edge_law, r.rel_dev
        )
        .map_err(io_err)?;
    }
    Ok(())
}
