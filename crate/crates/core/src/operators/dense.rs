//! Dense-matrix reference implementation for small meshes.
//!
//! Builds the full `N×N` matrices and evaluates the coadjoint expression
//! `P(Ω⁻¹[Aᵀ, Ω diag(D) B♭])` directly, without any of the algebra that
//! leads to the local stencil.

use super::assemble_a;
use crate::error::{Error, Result};
use crate::fields::{CellField, EdgeField};
use crate::mesh::Mesh;

pub const DENSE_LIMIT: usize = 512;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Matrix::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Left multiplication by a diagonal matrix.
    pub fn scale_rows(&self, d: &[f64]) -> Matrix {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for x in &mut out.data[i * n..(i + 1) * n] {
                *x *= d[i];
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// `Q(L) = L - L̂` with `L̂_ij = L_ii`.
pub fn project_q(l: &Matrix) -> Matrix {
    let mut out = l.clone();
    for i in 0..l.n {
        let d = l[(i, i)];
        for j in 0..l.n {
            out[(i, j)] -= d;
        }
    }
    out
}

/// `P(L) = (L - L̂)^(A)`, the skew part of `Q(L)`.
pub fn project_p(l: &Matrix) -> Matrix {
    let q = project_q(l);
    let mut out = Matrix::zeros(l.n);
    for i in 0..l.n {
        for j in 0..l.n {
            out[(i, j)] = 0.5 * (q[(i, j)] - q[(j, i)]);
        }
    }
    out
}

/// Full matrices of one state on a small mesh.
#[derive(Clone, Debug)]
pub struct DenseOperators {
    pub a: Matrix,
    /// Neighbor and node-sharing entries of the one-form `B♭`.
    pub b_flat: Matrix,
    pub areas: Vec<f64>,
    pub depth: Vec<f64>,
}

fn check_size(mesh: &Mesh) -> Result<()> {
    if mesh.n_cells() > DENSE_LIMIT {
        return Err(Error::TooLarge {
            cells: mesh.n_cells(),
            limit: DENSE_LIMIT,
        });
    }
    Ok(())
}

/// Dense `A` from normal velocities.
pub fn dense_a(mesh: &Mesh, v: &EdgeField) -> Result<Matrix> {
    check_size(mesh)?;
    let sa = assemble_a(mesh, v);
    let mut a = Matrix::zeros(mesh.n_cells());
    for (i, c) in mesh.cells.iter().enumerate() {
        a[(i, i)] = sa.diag[i];
        for k in 0..3 {
            a[(i, c.neighbors[k])] += sa.off[i][k];
        }
    }
    Ok(a)
}

/// Dense one-form with neighbor entries `w_flat` and node-sharing entries
/// from `B♭_ij + B♭_jk + B♭_ki = K_j ω_e` over consecutive fan triples.
pub fn dense_flat(mesh: &Mesh, w_flat: &EdgeField) -> Result<Matrix> {
    check_size(mesh)?;
    let n = mesh.n_cells();
    let mut b = Matrix::zeros(n);
    for (e, ed) in mesh.edges.iter().enumerate() {
        let [i, j] = ed.cells;
        b[(i, j)] = w_flat[e];
        b[(j, i)] = -w_flat[e];
    }
    for (idx, node) in mesh.nodes.iter().enumerate() {
        let omega = mesh.loop_sum(idx, w_flat);
        let m = node.fan.len();
        for s in 0..m {
            let ci = node.fan[s].cell;
            let cj = node.fan[(s + 1) % m].cell;
            let ck = node.fan[(s + 2) % m].cell;
            if mesh.edge_between(ck, ci).is_some() {
                continue;
            }
            let bki = node.fan[(s + 1) % m].k * omega - b[(ci, cj)] - b[(cj, ck)];
            b[(ck, ci)] = bki;
            b[(ci, ck)] = -bki;
        }
    }
    Ok(b)
}

impl DenseOperators {
    pub fn new(mesh: &Mesh, v: &EdgeField, d: &CellField, w_flat: &EdgeField) -> Result<Self> {
        Ok(DenseOperators {
            a: dense_a(mesh, v)?,
            b_flat: dense_flat(mesh, w_flat)?,
            areas: mesh.cells.iter().map(|c| c.area).collect(),
            depth: d.to_vec(),
        })
    }

    /// `Ω⁻¹[Aᵀ, Ω L]` for `L = diag(D) B♭`.
    pub fn commutator(&self) -> Matrix {
        let l = self.b_flat.scale_rows(&self.depth);
        let at = self.a.transpose();
        let inv: Vec<f64> = self.areas.iter().map(|x| 1.0 / x).collect();
        let left = at.matmul(&l.scale_rows(&self.areas)).scale_rows(&inv);
        let right = l.scale_rows(&self.areas).matmul(&at).scale_rows(&inv);
        left.sub(&right)
    }

    /// `-Ω⁻¹AᵀΩ D`, the density action.
    pub fn density_action(&self) -> Vec<f64> {
        let at = self.a.transpose();
        let od: Vec<f64> = self
            .areas
            .iter()
            .zip(&self.depth)
            .map(|(a, d)| a * d)
            .collect();
        at.mul_vec(&od)
            .iter()
            .zip(&self.areas)
            .map(|(x, a)| -x / a)
            .collect()
    }
}

/// `P(Ω⁻¹[Aᵀ, Ω diag(D) B♭])_ij` on every edge in owner orientation.
pub fn lie_derivative_oracle(
    mesh: &Mesh,
    v: &EdgeField,
    d: &CellField,
    w_flat: &EdgeField,
) -> Result<EdgeField> {
    let ops = DenseOperators::new(mesh, v, d, w_flat)?;
    let p = project_p(&ops.commutator());
    Ok(EdgeField::from_fn(mesh.n_edges(), |e| {
        let [i, j] = mesh.edges[e].cells;
        p[(i, j)]
    }))
}
