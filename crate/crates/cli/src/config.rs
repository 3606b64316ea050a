//! Run configuration: sectioned `key = value` text, physical inputs in SI.
//!
//! ```text
//! [mesh]
//! type = regular        # regular | refined | file
//! n1d = 32
//! lx = 5.0e6            # m
//! ly = 4.33e6           # m
//!
//! [case]
//! name = isolated_vortex
//!
//! [physics]
//! h0 = 750              # m
//!
//! [time]
//! dt_seconds = 60
//! duration_days = 1
//! ```
//!
//! Lines starting with `#` and trailing `# ...` are comments. Unknown
//! sections and keys are errors.

use anyhow::{anyhow, bail, Context, Result};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use vsw_core::cases::{CaseName, CaseSpec, VelocityInit};
use vsw_core::integrator::SolverParams;
use vsw_core::mesh::{CenterKind, Monitor, REFINE_ITERATIONS};
use vsw_core::units::{accel_to_km_per_day2, meters_to_km, rate_to_per_day, seconds_to_days};

/// `g` used when the config does not set one, km/day².
pub const DEFAULT_G: f64 = 7.32e7;
/// `f` used when the config does not set one, 1/day.
pub const DEFAULT_F: f64 = 5.3108;

#[derive(Clone, Debug, PartialEq)]
pub enum MeshKind {
    Regular,
    Refined,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshConfig {
    pub kind: MeshKind,
    pub n1d: usize,
    /// km
    pub lx: f64,
    pub ly: f64,
    pub monitor: Option<Monitor>,
    pub refine_iterations: usize,
}

impl MeshConfig {
    /// Monitor of refined meshes; the experiments' default unless overridden.
    pub fn monitor(&self) -> Monitor {
        self.monitor
            .unwrap_or_else(|| Monitor::centered(self.lx, self.ly))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeConfig {
    /// days
    pub dt: f64,
    pub duration_days: f64,
}

impl TimeConfig {
    pub fn n_steps(&self) -> usize {
        (self.duration_days / self.dt).round() as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub qoi_interval_steps: usize,
    /// 0 writes only the initial and final snapshots.
    pub snapshot_interval_days: f64,
    pub probe: bool,
    pub sample_interval_days: f64,
}

/// Fully resolved configuration in km and days.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mesh: MeshConfig,
    pub case: CaseSpec,
    /// km/day²
    pub g: f64,
    /// 1/day
    pub f: f64,
    pub time: TimeConfig,
    pub solver: SolverParams,
    pub output: OutputConfig,
}

type Entries = Vec<(String, String, String, usize)>;

fn tokenize(text: &str) -> Result<Entries> {
    let mut section = String::new();
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| anyhow!("line {line_no}: unterminated section header"))?;
            section = name.trim().to_string();
            if !SECTIONS.contains(&section.as_str()) {
                bail!("line {line_no}: unknown section [{section}]");
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {line_no}: expected `key = value`"))?;
        if section.is_empty() {
            bail!("line {line_no}: key outside of any section");
        }
        out.push((
            section.clone(),
            key.trim().to_string(),
            value.trim().to_string(),
            line_no,
        ));
    }
    Ok(out)
}

const SECTIONS: [&str; 6] = ["mesh", "case", "physics", "time", "solver", "output"];

fn keys(section: &str) -> &'static [&'static str] {
    match section {
        "mesh" => &[
            "type",
            "n1d",
            "lx",
            "ly",
            "path",
            "monitor_center_x",
            "monitor_center_y",
            "monitor_width",
            "monitor_strength",
            "refine_iterations",
        ],
        "case" => &[
            "name",
            "velocity_init",
            "sample_at",
            "sigma_x",
            "sigma_y",
            "offset",
            "kappa",
            "lambda_x",
        ],
        "physics" => &["g", "f", "h0", "h_prime", "b_prime"],
        "time" => &["dt_seconds", "duration_days"],
        "solver" => &[
            "fp_tol",
            "max_fp_iterations",
            "linear_tol",
            "max_linear_iterations",
        ],
        "output" => &[
            "directory",
            "qoi_interval_steps",
            "snapshot_interval_days",
            "probe",
            "sample_interval_days",
        ],
        _ => &[],
    }
}

struct Table {
    entries: Entries,
}

impl Table {
    fn get(&self, section: &str, key: &str) -> Option<(&str, usize)> {
        self.entries
            .iter()
            .rev()
            .find(|(s, k, _, _)| s == section && k == key)
            .map(|(_, _, v, l)| (v.as_str(), *l))
    }

    fn parse<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(section, key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("line {line}: [{section}] {key} = {v}: {e}")),
        }
    }
}

fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "true" | "on" | "yes" => Ok(true),
        "false" | "off" | "no" => Ok(false),
        _ => bail!("expected true/false, got {v}"),
    }
}

impl RunConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig = text
            .parse()
            .with_context(|| format!("in config {}", path.display()))?;
        if let MeshKind::File(p) = &cfg.mesh.kind {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.mesh.kind = MeshKind::File(dir.join(p));
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.case.validate()?;
        self.solver.validate()?;
        if !(self.g > 0.0) {
            bail!("g must be positive");
        }
        if !(self.time.duration_days >= 0.0) {
            bail!("duration_days must be non-negative");
        }
        if self.output.qoi_interval_steps == 0 {
            bail!("qoi_interval_steps must be at least 1");
        }
        if self.output.probe && !(self.output.sample_interval_days > 0.0) {
            bail!("the probe needs sample_interval_days > 0");
        }
        if !(self.output.snapshot_interval_days >= 0.0) {
            bail!("snapshot_interval_days must be non-negative");
        }
        Ok(())
    }
}

impl FromStr for RunConfig {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let entries = tokenize(text)?;
        for (s, k, _, line) in &entries {
            if !keys(s).contains(&k.as_str()) {
                bail!("line {line}: unknown key `{k}` in [{s}]");
            }
        }
        let t = Table { entries };

        let lx = t
            .parse::<f64>("mesh", "lx")?
            .map(meters_to_km)
            .unwrap_or(5000.0);
        let ly = t
            .parse::<f64>("mesh", "ly")?
            .map(meters_to_km)
            .unwrap_or(4330.0);
        let kind = match t.get("mesh", "type").map(|(v, _)| v).unwrap_or("regular") {
            "regular" => MeshKind::Regular,
            "refined" => MeshKind::Refined,
            "file" => {
                let (p, _) = t
                    .get("mesh", "path")
                    .ok_or_else(|| anyhow!("[mesh] type = file needs a path"))?;
                MeshKind::File(PathBuf::from(p))
            }
            other => bail!("[mesh] type must be regular, refined or file, got {other}"),
        };
        let monitor_keys = [
            "monitor_center_x",
            "monitor_center_y",
            "monitor_width",
            "monitor_strength",
        ];
        let monitor = if monitor_keys.iter().any(|k| t.get("mesh", k).is_some()) {
            let base = Monitor::centered(lx, ly);
            Some(Monitor {
                center: [
                    t.parse::<f64>("mesh", "monitor_center_x")?
                        .map(meters_to_km)
                        .unwrap_or(base.center[0]),
                    t.parse::<f64>("mesh", "monitor_center_y")?
                        .map(meters_to_km)
                        .unwrap_or(base.center[1]),
                ],
                width: t
                    .parse::<f64>("mesh", "monitor_width")?
                    .map(meters_to_km)
                    .unwrap_or(base.width),
                strength: t
                    .parse("mesh", "monitor_strength")?
                    .unwrap_or(base.strength),
            })
        } else {
            None
        };
        let mesh = MeshConfig {
            kind,
            n1d: t.parse("mesh", "n1d")?.unwrap_or(32),
            lx,
            ly,
            monitor,
            refine_iterations: t
                .parse("mesh", "refine_iterations")?
                .unwrap_or(REFINE_ITERATIONS),
        };

        let (name_s, _) = t
            .get("case", "name")
            .ok_or_else(|| anyhow!("[case] name is required"))?;
        let name: CaseName = name_s.parse()?;
        let mut case = CaseSpec::default_for(name, lx, ly);
        if let Some(h0) = t.parse::<f64>("physics", "h0")? {
            case.h0 = meters_to_km(h0);
        }
        if let Some(x) = t.parse::<f64>("physics", "h_prime")? {
            case.h_prime = meters_to_km(x);
        }
        if let Some(x) = t.parse::<f64>("physics", "b_prime")? {
            case.b_prime = meters_to_km(x);
        }
        if let Some(v) = t.parse::<VelocityInit>("case", "velocity_init")? {
            case.velocity_init = v;
        }
        if let Some((v, line)) = t.get("case", "sample_at") {
            case.sample_at = match v {
                "barycenter" => CenterKind::Barycenter,
                "circumcenter" => CenterKind::Circumcenter,
                _ => bail!("line {line}: sample_at must be barycenter or circumcenter"),
            };
        }
        // the jet width is a fraction of Ly, the Gaussian widths are lengths
        let width = |x: f64| {
            if name == CaseName::ShearFlow {
                x
            } else {
                meters_to_km(x)
            }
        };
        if let Some(x) = t.parse::<f64>("case", "sigma_x")? {
            case.sigma_x = width(x);
        }
        if let Some(x) = t.parse::<f64>("case", "sigma_y")? {
            case.sigma_y = width(x);
        }
        if let Some(x) = t.parse("case", "offset")? {
            case.offset = x;
        }
        if let Some(x) = t.parse("case", "kappa")? {
            case.kappa = x;
        }
        if let Some(x) = t.parse("case", "lambda_x")? {
            case.lambda_x = x;
        }

        let g = t
            .parse::<f64>("physics", "g")?
            .map(accel_to_km_per_day2)
            .unwrap_or(DEFAULT_G);
        let f = t
            .parse::<f64>("physics", "f")?
            .map(rate_to_per_day)
            .unwrap_or(DEFAULT_F);

        let dt_s: f64 = t
            .parse("time", "dt_seconds")?
            .ok_or_else(|| anyhow!("[time] dt_seconds is required"))?;
        let duration_days: f64 = t
            .parse("time", "duration_days")?
            .ok_or_else(|| anyhow!("[time] duration_days is required"))?;
        let time = TimeConfig {
            dt: seconds_to_days(dt_s),
            duration_days,
        };

        let d = SolverParams::new(time.dt);
        let solver = SolverParams {
            fp_tol: t.parse("solver", "fp_tol")?.unwrap_or(d.fp_tol),
            max_fp_iterations: t
                .parse("solver", "max_fp_iterations")?
                .unwrap_or(d.max_fp_iterations),
            linear_tol: t.parse("solver", "linear_tol")?.unwrap_or(d.linear_tol),
            max_linear_iterations: t
                .parse("solver", "max_linear_iterations")?
                .unwrap_or(d.max_linear_iterations),
            ..d
        };

        let probe = match t.get("output", "probe") {
            Some((v, line)) => {
                parse_bool(v).with_context(|| format!("line {line}: [output] probe"))?
            }
            None => false,
        };
        let output = OutputConfig {
            directory: t
                .get("output", "directory")
                .map(|(v, _)| PathBuf::from(v))
                .unwrap_or_else(|| PathBuf::from("out")),
            qoi_interval_steps: t.parse("output", "qoi_interval_steps")?.unwrap_or(1),
            snapshot_interval_days: t.parse("output", "snapshot_interval_days")?.unwrap_or(0.0),
            probe,
            sample_interval_days: t.parse("output", "sample_interval_days")?.unwrap_or(0.01),
        };

        let cfg = RunConfig {
            mesh,
            case,
            g,
            f,
            time,
            solver,
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
