//! Mesh generation, mesh validation and offline spectra.

use anyhow::{anyhow, bail, Context, Result};
use std::path::Path;
use vsw_core::diagnostics::{spectrum, Spectrum, SpectrumOptions};
use vsw_core::mesh::{
    build_refined_mesh, build_regular_mesh, read_mesh, Monitor, ValidationReport,
};
use vsw_core::Mesh;

pub fn make_mesh(
    kind: &str,
    n1d: usize,
    lx: f64,
    ly: f64,
    monitor: Option<Monitor>,
    iterations: usize,
) -> Result<Mesh> {
    let base = build_regular_mesh(n1d, lx, ly)?;
    match kind {
        "regular" => Ok(base),
        "refined" => {
            let m = monitor.unwrap_or_else(|| Monitor::centered(lx, ly));
            Ok(build_refined_mesh(&base, &m, iterations)?)
        }
        other => bail!("mesh kind must be regular or refined, got {other}"),
    }
}

pub fn validate_file(path: &Path) -> Result<(Mesh, ValidationReport)> {
    let mesh = read_mesh(path).with_context(|| format!("reading mesh {}", path.display()))?;
    let report = mesh.validate();
    Ok((mesh, report))
}

/// A time series read from CSV: first column time in days, the named (or
/// second) column the signal.
pub struct Series {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

impl Series {
    /// Uniform sampling interval; errors if the times are not uniform.
    pub fn interval(&self) -> Result<f64> {
        if self.t.len() < 2 {
            bail!("series needs at least two samples");
        }
        let dt = (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64;
        for w in self.t.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-6 * dt {
                bail!("samples are not uniformly spaced near t = {}", w[0]);
            }
        }
        Ok(dt)
    }
}

pub fn parse_series(text: &str, column: Option<&str>) -> Result<Series> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or_else(|| anyhow!("empty series file"))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = match column {
        Some(c) => names
            .iter()
            .position(|n| *n == c)
            .ok_or_else(|| anyhow!("no column `{c}` in header `{header}`"))?,
        None if names.len() >= 2 => 1,
        None => bail!("series needs a time column and a value column"),
    };
    let mut s = Series {
        t: Vec::new(),
        values: Vec::new(),
    };
    for (k, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |i: usize| -> Result<f64> {
            fields
                .get(i)
                .ok_or_else(|| anyhow!("line {}: missing column {i}", k + 1))?
                .parse::<f64>()
                .map_err(|e| anyhow!("line {}: {e}", k + 1))
        };
        s.t.push(get(0)?);
        s.values.push(get(col)?);
    }
    Ok(s)
}

pub fn series_spectrum(s: &Series, opts: &SpectrumOptions) -> Result<Spectrum> {
    Ok(spectrum(&s.values, s.interval()?, opts)?)
}
