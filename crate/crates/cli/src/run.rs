use anyhow::{Context, Result};
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use vsw_core::cases::initialize;
use vsw_core::diagnostics::{
    center_probe, quantities, relative_pv, spectrum, DiagnosticsRecord, RelativeErrors,
    SpectrumOptions,
};
use vsw_core::dynamics::PhysParams;
use vsw_core::integrator::{courant_number, step, State};
use vsw_core::mesh::{build_refined_mesh, build_regular_mesh, read_mesh, CenterKind};
use vsw_core::Mesh;

use crate::config::{MeshConfig, MeshKind, RunConfig};

/// Above this the fixed-point iteration is not expected to converge.
pub const COURANT_WARN: f64 = 3.0;

pub const QOI_HEADER: &str =
    "t_days,mass,e_kin,e_pot,e_tot,pv,pe,rel_err_mass,rel_err_e_tot,rel_err_pv,rel_err_pe";

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub steps: usize,
    pub courant: f64,
    pub initial: DiagnosticsRecord,
    pub last: DiagnosticsRecord,
    /// Largest magnitude of each relative error over all recorded rows.
    pub max_errors: RelativeErrors,
    pub peaks: Option<Vec<f64>>,
    pub out_dir: PathBuf,
}

pub fn build_mesh(cfg: &MeshConfig) -> Result<Mesh> {
    let mesh = match &cfg.kind {
        MeshKind::Regular => build_regular_mesh(cfg.n1d, cfg.lx, cfg.ly)?,
        MeshKind::Refined => {
            let base = build_regular_mesh(cfg.n1d, cfg.lx, cfg.ly)?;
            build_refined_mesh(&base, &cfg.monitor(), cfg.refine_iterations)?
        }
        MeshKind::File(p) => {
            read_mesh(p).with_context(|| format!("reading mesh {}", p.display()))?
        }
    };
    let report = mesh.validate();
    if !report.is_empty() {
        anyhow::bail!("mesh fails validation:\n{report}");
    }
    Ok(mesh)
}

fn qoi_row(r: &DiagnosticsRecord, e: &RelativeErrors) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.t, r.mass, r.e_kin, r.e_pot, r.e_tot, r.pv, r.pe, e.mass, e.e_tot, e.pv, e.pe
    )
}

fn write_snapshot(dir: &Path, tag: &str, mesh: &Mesh, state: &State) -> Result<()> {
    let mut cells = String::from("cell_id,x_km,y_km,D_km\n");
    for i in 0..mesh.n_cells() {
        let c = mesh.cell_center(i, CenterKind::Barycenter);
        let _ = writeln!(cells, "{i},{},{},{}", c[0], c[1], state.d[i]);
    }
    let q = relative_pv(mesh, state)?;
    let mut nodes = String::from("node_id,x_km,y_km,q_rel\n");
    for (n, node) in mesh.nodes.iter().enumerate() {
        let p = node.position;
        let _ = writeln!(nodes, "{n},{},{},{}", p[0], p[1], q[n]);
    }
    fs::write(dir.join(format!("cells_{tag}.csv")), cells)?;
    fs::write(dir.join(format!("nodes_{tag}.csv")), nodes)?;
    Ok(())
}

fn steps_per(interval_days: f64, dt: f64) -> usize {
    ((interval_days / dt).round() as usize).max(1)
}

fn track_max(acc: &mut RelativeErrors, e: &RelativeErrors) {
    acc.mass = acc.mass.max(e.mass.abs());
    acc.e_tot = acc.e_tot.max(e.e_tot.abs());
    acc.pv = acc.pv.max(e.pv.abs());
    acc.pe = acc.pe.max(e.pe.abs());
}

/// Builds the mesh, initializes the case, steps to the configured duration
/// and writes all output files to `out_dir`. Progress goes to `log`.
pub fn run(cfg: &RunConfig, out_dir: &Path, log: &mut dyn Write) -> Result<RunSummary> {
    cfg.validate()?;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let snap_dir = out_dir.join("snapshots");
    fs::create_dir_all(&snap_dir)?;

    let mesh = build_mesh(&cfg.mesh).context("building the mesh")?;
    let init = initialize(&mesh, &cfg.case, cfg.g, cfg.f).context("initializing the case")?;
    let params = PhysParams::new(&mesh, cfg.g, cfg.f, cfg.case.h0)?.with_topography(init.b);
    let dt = cfg.time.dt;
    let n_steps = cfg.time.n_steps();

    let courant = courant_number(&mesh, cfg.case.h0, dt, cfg.g);
    writeln!(
        log,
        "{}: {} cells, dx_min = {:.3} km, dt = {:.1} s, {} steps, Courant number C = {:.2}",
        cfg.case.name,
        mesh.n_cells(),
        mesh.min_dual_length(),
        dt * 86_400.0,
        n_steps,
        courant
    )?;
    if courant > COURANT_WARN {
        writeln!(
            log,
            "warning: Courant number {courant:.2} exceeds {COURANT_WARN}; the fixed-point iteration may not converge"
        )?;
    }

    let mut state = init.state;
    let q0 = quantities(&mesh, &state, &params)?;
    let mut max_errors = q0.relative_to(&q0);
    let mut qoi = String::from(QOI_HEADER);
    qoi.push('\n');
    qoi.push_str(&qoi_row(&q0, &max_errors));
    qoi.push('\n');
    let mut last = q0;

    let snap_every = (cfg.output.snapshot_interval_days > 0.0)
        .then(|| steps_per(cfg.output.snapshot_interval_days, dt));
    write_snapshot(&snap_dir, &format!("{:07}", 0), &mesh, &state)?;

    let probe = cfg.output.probe.then(|| center_probe(&mesh));
    let sample_every = steps_per(cfg.output.sample_interval_days, dt);
    let mut series = Vec::new();
    if let Some(p) = probe {
        series.push((state.t, state.d[p]));
    }

    for k in 1..=n_steps {
        let t = state.t;
        state = step(&mesh, &state, &params, &cfg.solver)
            .with_context(|| format!("time step {k} from t = {t} days"))?
            .0;
        if k % cfg.output.qoi_interval_steps == 0 || k == n_steps {
            let r = quantities(&mesh, &state, &params)
                .with_context(|| format!("diagnostics at t = {} days", state.t))?;
            let e = r.relative_to(&q0);
            track_max(&mut max_errors, &e);
            qoi.push_str(&qoi_row(&r, &e));
            qoi.push('\n');
            last = r;
        }
        if snap_every.is_some_and(|s| k % s == 0) {
            write_snapshot(&snap_dir, &format!("{k:07}"), &mesh, &state)?;
        }
        if let Some(p) = probe {
            if k % sample_every == 0 {
                series.push((state.t, state.d[p]));
            }
        }
    }
    fs::write(out_dir.join("qoi.csv"), qoi)?;
    write_snapshot(&snap_dir, "final", &mesh, &state)?;

    let mut peaks = None;
    if probe.is_some() {
        let mut text = String::from("t_days,depth_km\n");
        for (t, d) in &series {
            let _ = writeln!(text, "{t},{d}");
        }
        fs::write(out_dir.join("probe.csv"), text)?;
        let values: Vec<f64> = series.iter().map(|s| s.1).collect();
        let opts = SpectrumOptions {
            lowest_frequency: Some(cfg.f),
            ..Default::default()
        };
        match spectrum(&values, sample_every as f64 * dt, &opts) {
            Ok(sp) => {
                fs::write(
                    out_dir.join("peaks.txt"),
                    peaks_text(&sp.peaks, sp.resolution),
                )?;
                writeln!(log, "spectrum peaks (rad/day): {}", format_peaks(&sp.peaks))?;
                peaks = Some(sp.peaks);
            }
            Err(e) => writeln!(log, "warning: no spectrum: {e}")?,
        }
    }

    writeln!(
        log,
        "done at t = {:.4} days; max relative drift: mass {:.2e}, E_tot {:.2e}, PV {:.2e}, PE {:.2e}",
        state.t, max_errors.mass, max_errors.e_tot, max_errors.pv, max_errors.pe
    )?;
    Ok(RunSummary {
        steps: n_steps,
        courant,
        initial: q0,
        last,
        max_errors,
        peaks,
        out_dir: out_dir.to_path_buf(),
    })
}

pub fn format_peaks(peaks: &[f64]) -> String {
    peaks
        .iter()
        .map(|w| format!("{w:.3}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn peaks_text(peaks: &[f64], resolution: f64) -> String {
    let mut text = format!("# spectral peaks in rad/day, resolution {resolution}\n");
    for w in peaks {
        let _ = writeln!(text, "{w}");
    }
    text
}

/// Runs several configurations concurrently, each into `root/<name>`.
pub fn sweep(
    configs: &[(String, RunConfig)],
    root: &Path,
) -> Vec<(String, Result<RunSummary>, Vec<u8>)> {
    std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|(name, cfg)| {
                let dir = root.join(name);
                s.spawn(move || {
                    let mut log = Vec::new();
                    let r = run(cfg, &dir, &mut log);
                    (name.clone(), r, log)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run thread panicked"))
            .collect()
    })
}
