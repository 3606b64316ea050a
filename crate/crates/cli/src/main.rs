use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use vsw_cli::run::{format_peaks, peaks_text};
use vsw_cli::tools::{make_mesh, parse_series, series_spectrum, validate_file};
use vsw_cli::{run, sweep, RunConfig};
use vsw_core::diagnostics::SpectrumOptions;
use vsw_core::mesh::{write_mesh, Monitor, REFINE_ITERATIONS};
use vsw_core::units::meters_to_km;

/// Rotating shallow water on doubly periodic triangular meshes.
#[derive(Parser)]
#[command(name = "vsw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides [output] directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a mesh and write it to a file.
    Mesh {
        /// regular or refined
        #[arg(long)]
        make: String,
        #[arg(long, default_value_t = 32)]
        n1d: usize,
        /// Domain length in x, m.
        #[arg(long, default_value_t = 5.0e6)]
        lx: f64,
        /// Domain length in y, m.
        #[arg(long, default_value_t = 4.33e6)]
        ly: f64,
        /// Monitor width, m.
        #[arg(long)]
        monitor_width: Option<f64>,
        #[arg(long)]
        monitor_strength: Option<f64>,
        #[arg(long, default_value_t = REFINE_ITERATIONS)]
        iterations: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a mesh file for geometric and topological violations.
    Validate {
        #[arg(long)]
        mesh: PathBuf,
    },
    /// Spectral peaks of a uniformly sampled series (CSV, time in days).
    Spectrum {
        #[arg(long)]
        series: PathBuf,
        /// Value column; defaults to the second.
        #[arg(long)]
        column: Option<String>,
        /// Require two periods of this frequency, rad/day.
        #[arg(long)]
        lowest: Option<f64>,
        #[arg(long)]
        hann: bool,
        /// Write the peaks here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several configs concurrently, each into <out>/<config name>.
    Sweep {
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let mut stdout = std::io::stdout();
    match cli.command {
        Command::Run { config, out } => {
            let cfg = RunConfig::from_path(&config)?;
            let dir = out.unwrap_or_else(|| cfg.output.directory.clone());
            let s = run(&cfg, &dir, &mut stdout)?;
            writeln!(stdout, "wrote {}", s.out_dir.join("qoi.csv").display())?;
        }
        Command::Mesh {
            make,
            n1d,
            lx,
            ly,
            monitor_width,
            monitor_strength,
            iterations,
            out,
        } => {
            let (lx, ly) = (meters_to_km(lx), meters_to_km(ly));
            let base = Monitor::centered(lx, ly);
            let monitor = Monitor {
                width: monitor_width.map(meters_to_km).unwrap_or(base.width),
                strength: monitor_strength.unwrap_or(base.strength),
                ..base
            };
            let m = make_mesh(&make, n1d, lx, ly, Some(monitor), iterations)?;
            write_mesh(&m, &out).with_context(|| format!("writing {}", out.display()))?;
            writeln!(
                stdout,
                "{} cells, {} edges, {} nodes, dx_min = {:.3} km -> {}",
                m.n_cells(),
                m.n_edges(),
                m.n_nodes(),
                m.min_dual_length(),
                out.display()
            )?;
        }
        Command::Validate { mesh } => {
            let (m, report) = validate_file(&mesh)?;
            writeln!(
                stdout,
                "{} cells, {} edges, {} nodes",
                m.n_cells(),
                m.n_edges(),
                m.n_nodes()
            )?;
            writeln!(stdout, "{report}")?;
            if !report.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Spectrum {
            series,
            column,
            lowest,
            hann,
            out,
        } => {
            let text = std::fs::read_to_string(&series)
                .with_context(|| format!("reading {}", series.display()))?;
            let s = parse_series(&text, column.as_deref())?;
            let opts = SpectrumOptions {
                window: hann,
                lowest_frequency: lowest,
                ..Default::default()
            };
            let sp = series_spectrum(&s, &opts)?;
            writeln!(stdout, "resolution {:.4} rad/day", sp.resolution)?;
            writeln!(stdout, "peaks (rad/day): {}", format_peaks(&sp.peaks))?;
            if let Some(p) = out {
                std::fs::write(&p, peaks_text(&sp.peaks, sp.resolution))?;
            }
        }
        Command::Sweep { configs, out } => {
            let mut named = Vec::new();
            for path in &configs {
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| format!("run{}", named.len()));
                if named.iter().any(|(n, _)| *n == name) {
                    bail!("two configs share the name {name}");
                }
                named.push((name, RunConfig::from_path(path)?));
            }
            let mut failed = 0;
            for (name, result, log) in sweep(&named, &out) {
                stdout.write_all(&log)?;
                match result {
                    Ok(_) => writeln!(stdout, "{name}: ok")?,
                    Err(e) => {
                        failed += 1;
                        writeln!(stdout, "{name}: failed: {e:#}")?;
                    }
                }
            }
            if failed > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
