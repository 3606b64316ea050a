//! Semidiscrete tendencies of the rotating shallow water scheme:
//!
//! `∂t V + Adv(V, D) = K(V) - G(D)`, `∂t D + div(V, D) = 0`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{CellField, EdgeField};
use crate::mesh::{Mesh, I_MINUS, I_PLUS, J_MINUS, J_PLUS};
use crate::operators::{curl, weighted_divergence};

/// Face depths below this are rejected.
pub const MIN_FACE_DEPTH: f64 = 1e-10;

/// Internal energy per unit area as a function of depth `D` and
/// topography `B`. Only the derivative enters the dynamics.
pub trait EnergyLaw: Send + Sync {
    fn energy(&self, g: f64, d: f64, b: f64) -> f64;
    /// `∂ε/∂D`.
    fn derivative(&self, g: f64, d: f64, b: f64) -> f64;
}

/// `ε = ½ g (D + B)²`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShallowWater;

impl EnergyLaw for ShallowWater {
    fn energy(&self, g: f64, d: f64, b: f64) -> f64 {
        0.5 * g * (d + b) * (d + b)
    }

    fn derivative(&self, g: f64, d: f64, b: f64) -> f64 {
        g * (d + b)
    }
}

#[derive(Clone)]
pub struct PhysParams {
    /// km/day²
    pub g: f64,
    /// Coriolis parameter, 1/day.
    pub f: f64,
    /// Background depth, km.
    pub h0: f64,
    /// Bottom topography per cell, km.
    pub b: CellField,
    pub law: Arc<dyn EnergyLaw>,
}

impl fmt::Debug for PhysParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhysParams")
            .field("g", &self.g)
            .field("f", &self.f)
            .field("h0", &self.h0)
            .field("b_max", &self.b.max_abs())
            .finish_non_exhaustive()
    }
}

impl PhysParams {
    /// Shallow-water law with flat bottom.
    pub fn new(mesh: &Mesh, g: f64, f: f64, h0: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::Config(format!("g must be positive, got {g}")));
        }
        if !f.is_finite() || !h0.is_finite() {
            return Err(Error::NonFinite("physical parameters"));
        }
        Ok(PhysParams {
            g,
            f,
            h0,
            b: CellField::zeros(mesh.n_cells()),
            law: Arc::new(ShallowWater),
        })
    }

    pub fn with_topography(mut self, b: CellField) -> Self {
        self.b = b;
        self
    }

    pub fn with_law(mut self, law: Arc<dyn EnergyLaw>) -> Self {
        self.law = law;
        self
    }

    /// `∂ε/∂D_i` per cell.
    pub fn energy_derivative(&self, d: &CellField) -> CellField {
        CellField::from_fn(d.len(), |i| self.law.derivative(self.g, d[i], self.b[i]))
    }
}

fn face_depths(mesh: &Mesh, d: &CellField) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(mesh.n_edges());
    for (e, ed) in mesh.edges.iter().enumerate() {
        let dbar = 0.5 * (d[ed.cells[0]] + d[ed.cells[1]]);
        if !(dbar > MIN_FACE_DEPTH) {
            return Err(Error::NonPositiveDepth {
                edge: e,
                depth: dbar,
            });
        }
        out.push(dbar);
    }
    Ok(out)
}

/// `Adv(V, D)_ij = (1/(D̄_ij h_ij)) [q_+ (F_i^+ + F_j^+) - q_- (F_i^- + F_j^-)]`
/// with absolute vorticity `q = curl(V) + f` at the two end nodes and flank
/// fluxes `F_i^± = |ζ_± ∩ T_i| / (2Ω_ii) · D̄_{j i±} f_{i i±} V_{i i±}`.
pub fn advection_term(mesh: &Mesh, v: &EdgeField, d: &CellField, f: f64) -> Result<EdgeField> {
    Ok(AdvectionOperator::new(mesh, d)?.apply(mesh, v, f))
}

/// The advection term with the depth-dependent weights frozen, so that it
/// can be applied repeatedly to different velocities.
#[derive(Clone, Debug)]
pub struct AdvectionOperator {
    /// Flank edges in the order `i-, j-, i+, j+`.
    flank_edges: Vec<[usize; 4]>,
    flank_coef: Vec<[f64; 4]>,
    inv_scale: Vec<f64>,
}

impl AdvectionOperator {
    pub fn new(mesh: &Mesh, d: &CellField) -> Result<Self> {
        let dbar = face_depths(mesh, d)?;
        let mut flank_edges = Vec::with_capacity(mesh.n_edges());
        let mut flank_coef = Vec::with_capacity(mesh.n_edges());
        let mut inv_scale = Vec::with_capacity(mesh.n_edges());
        for (e, ed) in mesh.edges.iter().enumerate() {
            let [i, j] = ed.cells;
            let mut fe = [0usize; 4];
            let mut fc = [0.0; 4];
            for (slot, (idx, base, across)) in [
                (I_MINUS, i, j),
                (J_MINUS, j, i),
                (I_PLUS, i, j),
                (J_PLUS, j, i),
            ]
            .into_iter()
            .enumerate()
            {
                let fl = ed.flanks[idx];
                fe[slot] = fl.edge;
                fc[slot] = fl.kite / (2.0 * mesh.cells[base].area)
                    * 0.5
                    * (d[across] + d[fl.cell])
                    * mesh.edges[fl.edge].length
                    * fl.sign;
            }
            flank_edges.push(fe);
            flank_coef.push(fc);
            inv_scale.push(1.0 / (dbar[e] * ed.dual_length));
        }
        Ok(AdvectionOperator {
            flank_edges,
            flank_coef,
            inv_scale,
        })
    }

    pub fn apply(&self, mesh: &Mesh, v: &EdgeField, f: f64) -> EdgeField {
        let q = curl(mesh, v);
        let mut out = EdgeField::zeros(mesh.n_edges());
        self.apply_into(mesh, v, &q, f, &mut out);
        out
    }

    /// As [`apply`](Self::apply) with a precomputed `curl(V)`.
    pub fn apply_into(&self, mesh: &Mesh, v: &EdgeField, curl_v: &[f64], f: f64, out: &mut [f64]) {
        for (e, ed) in mesh.edges.iter().enumerate() {
            let fe = &self.flank_edges[e];
            let fc = &self.flank_coef[e];
            let fm = fc[0] * v[fe[0]] + fc[1] * v[fe[1]];
            let fp = fc[2] * v[fe[2]] + fc[3] * v[fe[3]];
            let [minus, plus] = ed.nodes;
            out[e] = ((curl_v[plus] + f) * fp - (curl_v[minus] + f) * fm) * self.inv_scale[e];
        }
    }
}

/// Cell kinetic energy density `½ Σ_k h_ik f_ik V_ik² / (2Ω_ii)`.
pub fn kinetic_energy_density(mesh: &Mesh, v: &EdgeField) -> CellField {
    CellField::from_fn(mesh.n_cells(), |i| {
        let c = &mesh.cells[i];
        let s: f64 = c
            .edges
            .iter()
            .map(|&e| {
                let ed = &mesh.edges[e];
                ed.dual_length * ed.length * v[e] * v[e]
            })
            .sum();
        0.25 * s / c.area
    })
}

/// `K(V)_ij = (KE_i - KE_j) / h_ij`.
pub fn kinetic_term(mesh: &Mesh, v: &EdgeField) -> EdgeField {
    let ke = kinetic_energy_density(mesh, v);
    EdgeField::from_fn(mesh.n_edges(), |e| {
        let ed = &mesh.edges[e];
        (ke[ed.cells[0]] - ke[ed.cells[1]]) / ed.dual_length
    })
}

/// `G(D)_ij = (ε'(D_j) - ε'(D_i)) / h_ij`; for shallow water
/// `(g/h_ij)(D_j + B_j - D_i - B_i)`.
pub fn pressure_term(mesh: &Mesh, d: &CellField, params: &PhysParams) -> EdgeField {
    let eps = params.energy_derivative(d);
    EdgeField::from_fn(mesh.n_edges(), |e| {
        let ed = &mesh.edges[e];
        (eps[ed.cells[1]] - eps[ed.cells[0]]) / ed.dual_length
    })
}

/// `-Adv(V, D) + K(V) - G(D)`.
pub fn momentum_rhs(
    mesh: &Mesh,
    v: &EdgeField,
    d: &CellField,
    params: &PhysParams,
) -> Result<EdgeField> {
    let adv = advection_term(mesh, v, d, params.f)?;
    let k = kinetic_term(mesh, v);
    let g = pressure_term(mesh, d, params);
    Ok(EdgeField::from_fn(mesh.n_edges(), |e| {
        -adv[e] + k[e] - g[e]
    }))
}

/// `-div(V, D)`.
pub fn continuity_rhs(mesh: &Mesh, v: &EdgeField, d: &CellField) -> CellField {
    let mut r = weighted_divergence(mesh, v, d);
    for x in r.iter_mut() {
        *x = -*x;
    }
    r
}
