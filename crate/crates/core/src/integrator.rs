//! Time stepping: Crank–Nicolson (Cayley) density update followed by a
//! fixed-point solve of the Crank–Nicolson momentum equation.

use crate::dynamics::{kinetic_term, pressure_term, AdvectionOperator, PhysParams};
use crate::error::{Error, Result};
use crate::fields::{CellField, EdgeField};
use crate::linsolve::{bicgstab, CsrMatrix};
use crate::mesh::Mesh;
use crate::operators::{assemble_a, curl};

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    /// days
    pub t: f64,
    /// Normal velocities, km/day.
    pub v: EdgeField,
    /// Cell depths, km.
    pub d: CellField,
}

impl State {
    pub fn new(v: EdgeField, d: CellField) -> Self {
        State { t: 0.0, v, d }
    }

    pub fn check(&self) -> Result<()> {
        if !self.v.is_finite() {
            return Err(Error::NonFinite("velocity"));
        }
        if !self.d.is_finite() {
            return Err(Error::NonFinite("depth"));
        }
        if let Some((i, &x)) = self.d.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
            return Err(Error::NonPositiveCellDepth { cell: i, depth: x });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverParams {
    /// days
    pub dt: f64,
    /// Fixed-point tolerance on the max-norm velocity change, km/day.
    pub fp_tol: f64,
    pub max_fp_iterations: usize,
    /// Relative residual of the density solve.
    pub linear_tol: f64,
    pub max_linear_iterations: usize,
}

impl SolverParams {
    pub fn new(dt: f64) -> Self {
        SolverParams {
            dt,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        if !(self.fp_tol > 0.0) || self.max_fp_iterations == 0 {
            return Err(Error::Config(
                "fixed-point tolerance and iteration limit must be positive".into(),
            ));
        }
        if !(self.linear_tol > 0.0) {
            return Err(Error::Config("linear tolerance must be positive".into()));
        }
        Ok(())
    }
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            dt: 60.0 / 86_400.0,
            fp_tol: 1e-12,
            max_fp_iterations: 50,
            linear_tol: 1e-14,
            max_linear_iterations: 1000,
        }
    }
}

/// The density action `M = -Ω⁻¹AᵀΩ`, i.e. `M D = -div(V, D)`.
///
/// Row `i` holds `M_ii = -A_ii` and `M_ik = A_ik` for the neighbors `k`.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    pub matrix: CsrMatrix,
}

impl DensityOperator {
    pub fn from_velocity(mesh: &Mesh, v: &EdgeField) -> Self {
        let a = assemble_a(mesh, v);
        let rows = mesh
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut row = Vec::with_capacity(4);
                row.push((i, -a.diag[i]));
                for k in 0..3 {
                    row.push((c.neighbors[k], a.off[i][k]));
                }
                row
            })
            .collect();
        DensityOperator {
            matrix: CsrMatrix::from_rows(rows),
        }
    }

    /// From per-edge volume fluxes `(i, j, f_ij V_ij)` between cells of the
    /// given areas; for small hand-built systems.
    pub fn from_edge_fluxes(areas: &[f64], fluxes: &[(usize, usize, f64)]) -> Self {
        let n = areas.len();
        let mut rows: Vec<Vec<(usize, f64)>> = (0..n).map(|i| vec![(i, 0.0)]).collect();
        for &(i, j, flux) in fluxes {
            let aij = -flux / (2.0 * areas[i]);
            let aji = flux / (2.0 * areas[j]);
            rows[i].push((j, aij));
            rows[i].push((i, aij));
            rows[j].push((i, aji));
            rows[j].push((j, aji));
        }
        DensityOperator {
            matrix: CsrMatrix::from_rows(rows),
        }
    }

    pub fn apply(&self, d: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(d)
    }

    /// `(I - ½Δt M) x = (I + ½Δt M) D`, followed by the update
    /// `D + ½Δt M (D + x)` which conserves `Σ Ω_i D_i` exactly.
    pub fn cayley_step(&self, d: &[f64], dt: f64, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        let n = d.len();
        let half = 0.5 * dt;
        let md = self.apply(d);
        let rhs: Vec<f64> = (0..n).map(|i| d[i] + half * md[i]).collect();
        let mut lhs = CsrMatrix {
            vals: self.matrix.vals.iter().map(|&v| -half * v).collect(),
            ..self.matrix.clone()
        };
        for i in 0..n {
            for k in lhs.row_ptr[i]..lhs.row_ptr[i + 1] {
                if lhs.cols[k] == i {
                    lhs.vals[k] += 1.0;
                }
            }
        }
        let mut x = d.to_vec();
        bicgstab(&lhs, &rhs, &mut x, tol, max_iter)?;
        let sum: Vec<f64> = (0..n).map(|i| d[i] + x[i]).collect();
        let msum = self.apply(&sum);
        Ok((0..n).map(|i| d[i] + half * msum[i]).collect())
    }
}

/// Density update of one step.
pub fn density_step(
    mesh: &Mesh,
    v: &EdgeField,
    d: &CellField,
    solver: &SolverParams,
) -> Result<CellField> {
    let op = DensityOperator::from_velocity(mesh, v);
    let next = op.cayley_step(
        d,
        solver.dt,
        solver.linear_tol,
        solver.max_linear_iterations,
    )?;
    Ok(CellField(next))
}

/// Fixed-point map of the Crank–Nicolson momentum equation for one step.
pub struct MomentumSolver<'a> {
    mesh: &'a Mesh,
    params: &'a PhysParams,
    dt: f64,
    v_old: &'a EdgeField,
    adv_new: AdvectionOperator,
    /// `V^t + Δt(-Adv(V^t, D^t)/2 + K(V^t)/2 - G(D^{t+1}))`
    base: EdgeField,
    adv_buf: Vec<f64>,
}

impl<'a> MomentumSolver<'a> {
    pub fn new(
        mesh: &'a Mesh,
        v_old: &'a EdgeField,
        d_old: &CellField,
        d_new: &CellField,
        params: &'a PhysParams,
        dt: f64,
    ) -> Result<Self> {
        let adv_old = AdvectionOperator::new(mesh, d_old)?.apply(mesh, v_old, params.f);
        let k_old = kinetic_term(mesh, v_old);
        let g_new = pressure_term(mesh, d_new, params);
        let base = EdgeField::from_fn(mesh.n_edges(), |e| {
            v_old[e] + dt * (-0.5 * adv_old[e] + 0.5 * k_old[e] - g_new[e])
        });
        Ok(MomentumSolver {
            mesh,
            params,
            dt,
            v_old,
            adv_new: AdvectionOperator::new(mesh, d_new)?,
            base,
            adv_buf: vec![0.0; mesh.n_edges()],
        })
    }

    /// One sweep `V_{k+1} = base + Δt(-Adv(V_k, D^{t+1})/2 + K(V_k)/2)`.
    pub fn sweep(&mut self, vk: &EdgeField) -> EdgeField {
        let q = curl(self.mesh, vk);
        self.adv_new
            .apply_into(self.mesh, vk, &q, self.params.f, &mut self.adv_buf);
        let k = kinetic_term(self.mesh, vk);
        let half_dt = 0.5 * self.dt;
        EdgeField::from_fn(self.mesh.n_edges(), |e| {
            self.base[e] + half_dt * (-self.adv_buf[e] + k[e])
        })
    }

    /// Iterates from `V^t` until the max-norm change drops below `tol`.
    pub fn solve(&mut self, tol: f64, max_iter: usize) -> Result<(EdgeField, usize)> {
        let mut vk = self.v_old.clone();
        let mut change = f64::INFINITY;
        for it in 1..=max_iter {
            let next = self.sweep(&vk);
            change = next.max_diff(&vk);
            vk = next;
            if !change.is_finite() {
                break;
            }
            if change < tol {
                return Ok((vk, it));
            }
        }
        Err(Error::FixedPoint {
            iterations: max_iter,
            residual: change,
        })
    }
}

/// Momentum update of one step; returns the new velocity and the number of
/// fixed-point sweeps.
pub fn momentum_step(
    mesh: &Mesh,
    v_old: &EdgeField,
    d_old: &CellField,
    d_new: &CellField,
    params: &PhysParams,
    solver: &SolverParams,
) -> Result<(EdgeField, usize)> {
    MomentumSolver::new(mesh, v_old, d_old, d_new, params, solver.dt)?
        .solve(solver.fp_tol, solver.max_fp_iterations)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    pub fp_iterations: usize,
}

/// Density step, then momentum step; advances `t` by `Δt`.
pub fn step(
    mesh: &Mesh,
    state: &State,
    params: &PhysParams,
    solver: &SolverParams,
) -> Result<(State, StepInfo)> {
    let d_new = density_step(mesh, &state.v, &state.d, solver)?;
    if let Some((i, &x)) = d_new.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::NonPositiveCellDepth { cell: i, depth: x });
    }
    let (v_new, iters) = momentum_step(mesh, &state.v, &state.d, &d_new, params, solver)?;
    Ok((
        State {
            t: state.t + solver.dt,
            v: v_new,
            d: d_new,
        },
        StepInfo {
            fp_iterations: iters,
        },
    ))
}

/// `C = √(g H0) Δt / Δx_min` with `Δx_min` the smallest dual edge length.
pub fn courant_number(mesh: &Mesh, h0: f64, dt: f64, g: f64) -> f64 {
    courant_from_spacing(h0, dt, g, mesh.min_dual_length())
}

pub fn courant_from_spacing(h0: f64, dt: f64, g: f64, dx_min: f64) -> f64 {
    (g * h0).sqrt() * dt / dx_min
}
