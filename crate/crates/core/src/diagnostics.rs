//! Conserved quantities, error norms, regime numbers and wave spectra.

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};

use crate::dynamics::{kinetic_energy_density, PhysParams};
use crate::error::{Error, Result};
use crate::fields::{CellField, NodeField};
use crate::integrator::State;
use crate::mesh::geometry::wrap_coord;
use crate::mesh::{Mesh, Point};
use crate::operators::curl;

/// Quantities of interest of one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `Σ D_i Ω_ii`, km³.
    pub mass: f64,
    pub e_kin: f64,
    pub e_pot: f64,
    pub e_tot: f64,
    /// `Σ_e (curl(V)_e + f) |ζ_e|`.
    pub pv: f64,
    /// `½ Σ_e (curl(V)_e + f)² / D_e |ζ_e|`.
    pub pe: f64,
}

/// `(x - x₀) / |x₀|`, or the plain difference when `x₀ = 0`.
pub fn relative_change(x: f64, x0: f64) -> f64 {
    if x0 == 0.0 {
        x - x0
    } else {
        (x - x0) / x0.abs()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RelativeErrors {
    pub mass: f64,
    pub e_tot: f64,
    pub pv: f64,
    pub pe: f64,
}

impl DiagnosticsRecord {
    pub fn relative_to(&self, reference: &DiagnosticsRecord) -> RelativeErrors {
        RelativeErrors {
            mass: relative_change(self.mass, reference.mass),
            e_tot: relative_change(self.e_tot, reference.e_tot),
            pv: relative_change(self.pv, reference.pv),
            pe: relative_change(self.pe, reference.pe),
        }
    }
}

/// Dual-cell depths `D_e = Σ_k K^e_k D_k`.
pub fn node_depths(mesh: &Mesh, d: &CellField) -> NodeField {
    NodeField::from_fn(mesh.n_nodes(), |n| {
        mesh.nodes[n].fan.iter().map(|fc| fc.k * d[fc.cell]).sum()
    })
}

/// Relative potential vorticity `curl(V)_e / D_e` per node.
pub fn relative_pv(mesh: &Mesh, state: &State) -> Result<NodeField> {
    let de = node_depths(mesh, &state.d);
    let q = curl(mesh, &state.v);
    let mut out = NodeField::zeros(mesh.n_nodes());
    for n in 0..mesh.n_nodes() {
        if !(de[n] > 0.0) {
            return Err(Error::NonPositiveNodeDepth {
                node: n,
                depth: de[n],
            });
        }
        out[n] = q[n] / de[n];
    }
    Ok(out)
}

pub fn quantities(mesh: &Mesh, state: &State, params: &PhysParams) -> Result<DiagnosticsRecord> {
    let d = &state.d;
    let ke = kinetic_energy_density(mesh, &state.v);
    let mut mass = 0.0;
    let mut e_kin = 0.0;
    let mut e_pot = 0.0;
    for (i, c) in mesh.cells.iter().enumerate() {
        mass += d[i] * c.area;
        e_kin += d[i] * c.area * ke[i];
        e_pot += params.law.energy(params.g, d[i], params.b[i]) * c.area;
    }

    let de = node_depths(mesh, d);
    let q = curl(mesh, &state.v);
    let mut pv = 0.0;
    let mut pe = 0.0;
    for (n, node) in mesh.nodes.iter().enumerate() {
        if !(de[n] > 0.0) {
            return Err(Error::NonPositiveNodeDepth {
                node: n,
                depth: de[n],
            });
        }
        let wa = q[n] + params.f;
        pv += wa * node.dual_area;
        pe += 0.5 * wa * wa / de[n] * node.dual_area;
    }

    Ok(DiagnosticsRecord {
        t: state.t,
        mass,
        e_kin,
        e_pot,
        e_tot: e_kin + e_pot,
        pv,
        pe,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub linf: f64,
}

/// Area-weighted relative norms
/// `L2 = ‖(f_t - f_0) Ω‖₂ / ‖f_0 Ω‖₂`, `L∞ = ‖(f_t - f_0) Ω‖∞ / ‖f_0 Ω‖∞`.
pub fn error_norms(mesh: &Mesh, field_t: &[f64], field_0: &[f64]) -> Result<ErrorNorms> {
    if field_t.len() != mesh.n_cells() || field_0.len() != mesh.n_cells() {
        return Err(Error::Config(format!(
            "error norms need cell fields of length {}, got {} and {}",
            mesh.n_cells(),
            field_t.len(),
            field_0.len()
        )));
    }
    let (mut num2, mut den2, mut num_inf, mut den_inf) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for (i, c) in mesh.cells.iter().enumerate() {
        let a = field_t[i] * c.area;
        let b = field_0[i] * c.area;
        num2 += (a - b) * (a - b);
        den2 += b * b;
        num_inf = num_inf.max((a - b).abs());
        den_inf = den_inf.max(b.abs());
    }
    if den2 == 0.0 || den_inf == 0.0 {
        return Err(Error::NormUndefined);
    }
    Ok(ErrorNorms {
        l2: num2.sqrt() / den2.sqrt(),
        linf: num_inf / den_inf,
    })
}

/// Observed convergence order between two errors at spacings `h_coarse`
/// and `h_fine`.
pub fn observed_order(err_coarse: f64, err_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (err_coarse / err_fine).ln() / (h_coarse / h_fine).ln()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumOptions {
    /// Apply a Hann window before the transform.
    pub window: bool,
    /// A peak must exceed this multiple of the median magnitude.
    pub noise_factor: f64,
    /// If set, the series must cover two periods of this angular frequency.
    pub lowest_frequency: Option<f64>,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            window: false,
            noise_factor: 5.0,
            lowest_frequency: None,
        }
    }
}

/// Fewest samples accepted by [`spectrum`].
pub const MIN_SERIES_LEN: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Angular frequencies of the one-sided bins, rad/day.
    pub frequencies: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Peak frequencies in ascending order.
    pub peaks: Vec<f64>,
    /// `2π / T`, rad/day.
    pub resolution: f64,
}

/// One-sided DFT magnitude of a uniformly sampled series and its peaks.
pub fn spectrum(series: &[f64], sample_interval: f64, opts: &SpectrumOptions) -> Result<Spectrum> {
    let n = series.len();
    let mut min = MIN_SERIES_LEN;
    if let Some(w) = opts.lowest_frequency {
        if w > 0.0 {
            let needed = (2.0 * 2.0 * PI / w / sample_interval).ceil() as usize;
            min = min.max(needed);
        }
    }
    if n < min {
        return Err(Error::SeriesTooShort { len: n, min });
    }
    if !(sample_interval > 0.0) {
        return Err(Error::Config(format!(
            "sample interval must be positive, got {sample_interval}"
        )));
    }

    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = series
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let w = if opts.window {
                0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos()
            } else {
                1.0
            };
            Complex::new((x - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = n / 2 + 1;
    let total = n as f64 * sample_interval;
    let resolution = 2.0 * PI / total;
    let frequencies: Vec<f64> = (0..half).map(|k| k as f64 * resolution).collect();
    let magnitudes: Vec<f64> = buf[..half].iter().map(|c| c.norm()).collect();

    let mut sorted = magnitudes.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let median = sorted[sorted.len() / 2];
    let floor = opts.noise_factor * median;

    let mut peaks = Vec::new();
    for k in 1..half {
        let m = magnitudes[k];
        let left = magnitudes[k - 1];
        let right = if k + 1 < half {
            magnitudes[k + 1]
        } else {
            f64::NEG_INFINITY
        };
        if m > left && m > right && m > floor {
            peaks.push(frequencies[k]);
        }
    }
    Ok(Spectrum {
        frequencies,
        magnitudes,
        peaks,
        resolution,
    })
}

/// For every target, the nearest peak if it lies within `tol`.
pub fn match_peaks(peaks: &[f64], targets: &[f64], tol: f64) -> Vec<Option<f64>> {
    targets
        .iter()
        .map(|&t| {
            peaks
                .iter()
                .copied()
                .filter(|p| (p - t).abs() <= tol)
                .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode {
    pub nx: usize,
    pub ny: usize,
    /// rad/day
    pub omega: f64,
}

/// Inertia-gravity frequencies `ω² = f² + gH0 (k² + l²)` with
/// `k = 2π n_x / L_x`, `l = 2π n_y / L_y`, for `0 ≤ n_x, n_y ≤ n_max`.
pub fn predict_frequencies(f: f64, g: f64, h0: f64, lx: f64, ly: f64, n_max: usize) -> Vec<Mode> {
    let c2 = g * h0;
    let mut out = Vec::with_capacity((n_max + 1) * (n_max + 1));
    for nx in 0..=n_max {
        for ny in 0..=n_max {
            let k = 2.0 * PI * nx as f64 / lx;
            let l = 2.0 * PI * ny as f64 / ly;
            out.push(Mode {
                nx,
                ny,
                omega: (f * f + c2 * (k * k + l * l)).sqrt(),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeNumbers {
    /// Characteristic velocity `2gH′/(fd)`, km/day.
    pub u: f64,
    pub ro: f64,
    pub fr: f64,
    /// `Ro² / Fr²`.
    pub bu: f64,
    /// `gH0 / (f²d²)`.
    pub bu_direct: f64,
    /// Deformation radius `√(gH0) / f`, km.
    pub l_d: f64,
}

pub fn regime_numbers(g: f64, f: f64, h0: f64, h_prime: f64, d: f64) -> RegimeNumbers {
    let u = 2.0 * g * h_prime / (f * d);
    let c = (g * h0).sqrt();
    let ro = u / (f * d);
    let fr = u / c;
    RegimeNumbers {
        u,
        ro,
        fr,
        bu: ro * ro / (fr * fr),
        bu_direct: g * h0 / (f * f * d * d),
        l_d: c / f,
    }
}

/// Cell nearest to the domain center, used as the spectrum probe.
pub fn center_probe(mesh: &Mesh) -> usize {
    mesh.nearest_cell([0.5 * mesh.lx, 0.5 * mesh.ly])
}

/// Locates up to `count` maxima of a node field that are at least
/// `separation` apart. Each position is the value-weighted centroid of the
/// nodes within `separation / 2` whose value exceeds half the peak.
pub fn locate_maxima(mesh: &Mesh, field: &[f64], count: usize, separation: f64) -> Vec<Point> {
    let mut order: Vec<usize> = (0..mesh.n_nodes()).collect();
    order.sort_by(|&a, &b| field[b].total_cmp(&field[a]));
    let mut peaks: Vec<usize> = Vec::new();
    for &n in &order {
        if peaks.len() == count {
            break;
        }
        let p = mesh.nodes[n].position;
        if peaks
            .iter()
            .all(|&m| mesh.distance(p, mesh.nodes[m].position) >= separation)
        {
            peaks.push(n);
        }
    }
    peaks
        .into_iter()
        .map(|m| {
            let c = mesh.nodes[m].position;
            let cut = 0.5 * field[m];
            let (mut wx, mut wy, mut ws) = (0.0, 0.0, 0.0);
            for (n, node) in mesh.nodes.iter().enumerate() {
                let dlt = mesh.delta(c, node.position);
                if field[n] > cut && (dlt[0] * dlt[0] + dlt[1] * dlt[1]).sqrt() < 0.5 * separation {
                    let w = field[n] * node.dual_area;
                    wx += w * dlt[0];
                    wy += w * dlt[1];
                    ws += w;
                }
            }
            if ws > 0.0 {
                [
                    wrap_coord(c[0] + wx / ws, mesh.lx),
                    wrap_coord(c[1] + wy / ws, mesh.ly),
                ]
            } else {
                c
            }
        })
        .collect()
}

/// Dominant wavenumber along `x` of a node field: the field is split into
/// `bands` horizontal strips, the area-weighted Fourier power of each strip
/// is summed, and the strongest `k ∈ 1..=k_max` is returned.
pub fn dominant_x_wavenumber(mesh: &Mesh, field: &[f64], bands: usize, k_max: usize) -> usize {
    let bands = bands.max(1);
    let mut power = vec![0.0; k_max + 1];
    let mut acc = vec![vec![Complex::new(0.0, 0.0); k_max + 1]; bands];
    for (n, node) in mesh.nodes.iter().enumerate() {
        let [x, y] = node.position;
        let b = ((y / mesh.ly * bands as f64) as usize).min(bands - 1);
        let w = field[n] * node.dual_area;
        for k in 1..=k_max {
            let phase = -2.0 * PI * k as f64 * x / mesh.lx;
            acc[b][k] += Complex::from_polar(w, phase);
        }
    }
    for row in &acc {
        for k in 1..=k_max {
            power[k] += row[k].norm_sqr();
        }
    }
    (1..=k_max)
        .max_by(|&a, &b| power[a].total_cmp(&power[b]))
        .unwrap_or(1)
}
