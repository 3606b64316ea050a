//! Discrete calculus on the mesh and the discrete Lie derivative.
//!
//! A velocity field is an [`EdgeField`] of normal velocities `V_ij`. It
//! corresponds to the row-null matrix
//! `A_ij = -f_ij V_ij / (2 Ω_ii)` for neighbors, `A_ii = -Σ_j A_ij`.

pub mod dense;
pub mod sampling;

use crate::fields::{CellField, EdgeField, NodeField};
use crate::mesh::{Mesh, I_MINUS, I_PLUS, J_MINUS, J_PLUS};

/// Sparse row storage of the matrix `A`: one diagonal and three
/// off-diagonal entries per row, the latter aligned with `Cell::neighbors`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseA {
    pub diag: Vec<f64>,
    pub off: Vec<[f64; 3]>,
}

impl SparseA {
    /// `A_ij` for `j = neighbors[k]` of row `i`.
    #[inline]
    pub fn entry(&self, i: usize, k: usize) -> f64 {
        self.off[i][k]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.diag[i] + self.off[i].iter().sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(self.off.iter().flatten())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `y = A x`.
    pub fn apply(&self, mesh: &Mesh, x: &[f64]) -> Vec<f64> {
        mesh.cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                self.diag[i] * x[i]
                    + (0..3)
                        .map(|k| self.off[i][k] * x[c.neighbors[k]])
                        .sum::<f64>()
            })
            .collect()
    }
}

/// `A_ij` of edge `e` read from the cell with orientation `sign` and area `area`.
#[inline]
fn a_entry(mesh: &Mesh, v: &EdgeField, e: usize, sign: f64, area: f64) -> f64 {
    -mesh.edges[e].length * sign * v[e] / (2.0 * area)
}

pub fn assemble_a(mesh: &Mesh, v: &EdgeField) -> SparseA {
    let mut diag = Vec::with_capacity(mesh.n_cells());
    let mut off = Vec::with_capacity(mesh.n_cells());
    for c in &mesh.cells {
        let mut row = [0.0; 3];
        for k in 0..3 {
            row[k] = a_entry(mesh, v, c.edges[k], c.signs[k], c.area);
        }
        diag.push(-(row[0] + row[1] + row[2]));
        off.push(row);
    }
    SparseA { diag, off }
}

/// Circulations `A♭_ij = -h_ij V_ij`.
pub fn flat_edge(mesh: &Mesh, v: &EdgeField) -> EdgeField {
    EdgeField::from_fn(mesh.n_edges(), |e| -mesh.edges[e].dual_length * v[e])
}

/// `div(V)_i = Σ_k f_ik V_ik / Ω_ii`.
pub fn divergence(mesh: &Mesh, v: &EdgeField) -> CellField {
    CellField::from_fn(mesh.n_cells(), |i| {
        let c = &mesh.cells[i];
        let s: f64 = (0..3)
            .map(|k| mesh.edges[c.edges[k]].length * c.signs[k] * v[c.edges[k]])
            .sum();
        s / c.area
    })
}

/// `div(V, D)_i = Σ_k f_ik V_ik (D_i + D_k)/2 / Ω_ii`.
pub fn weighted_divergence(mesh: &Mesh, v: &EdgeField, d: &CellField) -> CellField {
    CellField::from_fn(mesh.n_cells(), |i| {
        let c = &mesh.cells[i];
        let s: f64 = (0..3)
            .map(|k| {
                let e = c.edges[k];
                mesh.edges[e].length * c.signs[k] * v[e] * 0.5 * (d[i] + d[c.neighbors[k]])
            })
            .sum();
        s / c.area
    })
}

/// Counter-clockwise circulation density `(1/|ζ_e|) Σ h_mn V_mn` per node.
pub fn curl(mesh: &Mesh, v: &EdgeField) -> NodeField {
    NodeField::from_fn(mesh.n_nodes(), |n| {
        let node = &mesh.nodes[n];
        let s: f64 = node
            .dual_loop
            .iter()
            .map(|d| d.sign * mesh.edges[d.edge].dual_length * v[d.edge])
            .sum();
        s / node.dual_area
    })
}

/// `(φ_j - φ_i) / h_ij`.
pub fn grad_normal(mesh: &Mesh, phi: &CellField) -> EdgeField {
    EdgeField::from_fn(mesh.n_edges(), |e| {
        let ed = &mesh.edges[e];
        (phi[ed.cells[1]] - phi[ed.cells[0]]) / ed.dual_length
    })
}

/// `(ψ_- - ψ_+) / f_ij`.
pub fn grad_tangential(mesh: &Mesh, psi: &NodeField) -> EdgeField {
    EdgeField::from_fn(mesh.n_edges(), |e| {
        let ed = &mesh.edges[e];
        (psi[ed.nodes[0]] - psi[ed.nodes[1]]) / ed.length
    })
}

/// Discrete Lie derivative `P(Ω⁻¹[Aᵀ, Ω D B♭])_ij` evaluated with the local
/// stencil, for every edge in owner orientation.
///
/// `w_flat` holds the neighbor entries `B♭_ij` of the one-form; the
/// node-sharing entries enter through the node circulations.
pub fn lie_derivative_stencil(
    mesh: &Mesh,
    v: &EdgeField,
    d: &CellField,
    w_flat: &EdgeField,
) -> EdgeField {
    let a = assemble_a(mesh, v);
    let div_vd = weighted_divergence(mesh, v, d);
    let omega: Vec<f64> = (0..mesh.n_nodes())
        .map(|n| mesh.loop_sum(n, w_flat))
        .collect();
    // Σ_k A_ik B♭_ik per cell
    let ab: Vec<f64> = mesh
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            (0..3)
                .map(|k| a.off[i][k] * c.signs[k] * w_flat[c.edges[k]])
                .sum()
        })
        .collect();

    EdgeField::from_fn(mesh.n_edges(), |e| {
        let ed = &mesh.edges[e];
        let [i, j] = ed.cells;
        let [minus, plus] = ed.nodes;
        let (zm, zp) = (mesh.nodes[minus].dual_area, mesh.nodes[plus].dual_area);
        let flank = |idx: usize, base: usize, across: usize, zeta: f64| {
            let f = ed.flanks[idx];
            let area = mesh.cells[base].area;
            let a_f = a_entry(mesh, v, f.edge, f.sign, area);
            (f.kite / zeta) * 0.5 * (d[across] + d[f.cell]) * a_f
        };
        let minus_part = flank(I_MINUS, i, j, zm) + flank(J_MINUS, j, i, zm);
        let plus_part = flank(I_PLUS, i, j, zp) + flank(J_PLUS, j, i, zp);
        let dbar = 0.5 * (d[i] + d[j]);
        omega[minus] * minus_part - omega[plus] * plus_part
            + dbar * (ab[i] - ab[j])
            + 0.5 * (div_vd[i] + div_vd[j]) * w_flat[e]
    })
}
