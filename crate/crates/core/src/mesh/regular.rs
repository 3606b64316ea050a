//! Regular equilateral meshes and monitor-driven r-refinement.

use super::geometry::{circumcenter, signed_area, wrap_coord, wrap_delta};
use super::{compute_dual_geometry, local_vertices, Mesh, Point, RawMesh};
use crate::error::{Error, Result};

/// Relative tolerance on `Ly / Lx` against `√3 / 2`.
const ASPECT_TOL: f64 = 1e-4;

/// `2·n1d²` congruent (near-)equilateral triangles on `[0, Lx) × [0, Ly)`.
pub fn build_regular_mesh(n1d: usize, lx: f64, ly: f64) -> Result<Mesh> {
    if n1d < 4 || !n1d.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "n1d must be even and at least 4, got {n1d}"
        )));
    }
    if !(lx > 0.0 && ly > 0.0) {
        return Err(Error::Config(format!(
            "domain size must be positive, got {lx} x {ly}"
        )));
    }
    let ideal = lx * 3f64.sqrt() / 2.0;
    if ((ly - ideal) / ideal).abs() > ASPECT_TOL {
        return Err(Error::Config(format!(
            "Ly/Lx = {} is not compatible with an equilateral tiling (expected {})",
            ly / lx,
            3f64.sqrt() / 2.0
        )));
    }
    let n = n1d;
    let dx = lx / n as f64;
    let dy = ly / n as f64;
    let id = |r: usize, c: usize| (r % n) * n + (c % n);

    let mut nodes = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let shift = if r % 2 == 1 { 0.5 } else { 0.0 };
            nodes.push([(c as f64 + shift) * dx, r as f64 * dy]);
        }
    }
    let mut cells = Vec::with_capacity(2 * n * n);
    for r in 0..n {
        for c in 0..n {
            if r % 2 == 0 {
                cells.push([id(r, c), id(r, c + 1), id(r + 1, c)]);
                cells.push([id(r, c + 1), id(r + 1, c + 1), id(r + 1, c)]);
            } else {
                cells.push([id(r, c), id(r, c + 1), id(r + 1, c + 1)]);
                cells.push([id(r, c), id(r + 1, c + 1), id(r + 1, c)]);
            }
        }
    }
    compute_dual_geometry(&RawMesh {
        lx,
        ly,
        nodes,
        cells,
    })
}

/// Gaussian monitor `w = 1 + strength · exp(-d² / (2 width²))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monitor {
    pub center: Point,
    pub width: f64,
    pub strength: f64,
}

impl Monitor {
    /// Settings used for the refined meshes of the experiments: with
    /// [`REFINE_ITERATIONS`] sweeps the edges within `width / 2` of the
    /// center are about half as long as those beyond `width`.
    pub fn centered(lx: f64, ly: f64) -> Self {
        Monitor {
            center: [0.5 * lx, 0.5 * ly],
            width: 0.06 * lx,
            strength: 2.3,
        }
    }

    fn weight(&self, d2: f64) -> f64 {
        1.0 + self.strength * (-d2 / (2.0 * self.width * self.width)).exp()
    }
}

const RELAX: f64 = 0.5;

/// Sweeps after which the relaxation is stationary on a 2·64² base.
pub const REFINE_ITERATIONS: usize = 6000;

/// Moves nodes by weighted spring relaxation toward the monitor density;
/// connectivity is unchanged.
pub fn build_refined_mesh(base: &Mesh, monitor: &Monitor, iterations: usize) -> Result<Mesh> {
    if !(monitor.width > 0.0) || !(monitor.strength >= 0.0) || !monitor.strength.is_finite() {
        return Err(Error::Config(format!(
            "monitor needs width > 0 and strength >= 0, got width {} strength {}",
            monitor.width, monitor.strength
        )));
    }
    let (lx, ly) = (base.lx, base.ly);
    let raw = base.raw();
    if monitor.strength == 0.0 || iterations == 0 {
        return compute_dual_geometry(&raw);
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); base.n_nodes()];
    for e in &base.edges {
        let [a, b] = e.nodes;
        adj[a].push(b);
        adj[b].push(a);
    }

    let mut pos = raw.nodes.clone();
    let mut next = pos.clone();
    for _ in 0..iterations {
        for (v, nb) in adj.iter().enumerate() {
            let p = pos[v];
            let mut acc = [0.0; 2];
            let mut wsum = 0.0;
            for &u in nb {
                let q = pos[u];
                let d = [wrap_delta(q[0] - p[0], lx), wrap_delta(q[1] - p[1], ly)];
                let mid = [p[0] + 0.5 * d[0], p[1] + 0.5 * d[1]];
                let r = [
                    wrap_delta(mid[0] - monitor.center[0], lx),
                    wrap_delta(mid[1] - monitor.center[1], ly),
                ];
                let w = monitor.weight(r[0] * r[0] + r[1] * r[1]);
                acc[0] += w * d[0];
                acc[1] += w * d[1];
                wsum += w;
            }
            next[v] = [
                wrap_coord(p[0] + RELAX * acc[0] / wsum, lx),
                wrap_coord(p[1] + RELAX * acc[1] / wsum, ly),
            ];
        }
        std::mem::swap(&mut pos, &mut next);
    }

    if let Some(err) = inverted_cell(base, &pos) {
        return Err(err);
    }
    let refined = compute_dual_geometry(&RawMesh {
        lx,
        ly,
        nodes: pos,
        cells: raw.cells,
    })?;
    let (edge, h) = refined
        .edges
        .iter()
        .enumerate()
        .map(|(e, ed)| (e, ed.dual_length))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    if !(h > 0.0) {
        return Err(Error::RefinementFailed {
            edge,
            dual_length: h,
        });
    }
    Ok(refined)
}

/// Refinement failure for the first cell whose orientation flipped (or
/// collapsed), naming its edge with the most negative circumcenter
/// separation `(c_k - c_i)·n_ik`.
fn inverted_cell(base: &Mesh, pos: &[Point]) -> Option<Error> {
    let (lx, ly) = (base.lx, base.ly);
    let centers: Vec<Point> = base
        .cells
        .iter()
        .map(|c| {
            let p = local_vertices(pos, c.vertices, lx, ly);
            circumcenter(p[0], p[1], p[2])
        })
        .collect();
    for (i, c) in base.cells.iter().enumerate() {
        let p = local_vertices(pos, c.vertices, lx, ly);
        let area = signed_area(p[0], p[1], p[2]);
        let scale = (p[1][0] - p[0][0]).powi(2) + (p[1][1] - p[0][1]).powi(2);
        if area > 1e-12 * scale {
            continue;
        }
        let mut worst = (c.edges[0], f64::INFINITY);
        for k in 0..3 {
            let a = p[(k + 1) % 3];
            let b = p[(k + 2) % 3];
            let t = [b[0] - a[0], b[1] - a[1]];
            let len = (t[0] * t[0] + t[1] * t[1]).sqrt();
            let n = [t[1] / len, -t[0] / len];
            let cj = centers[c.neighbors[k]];
            let d = [
                wrap_delta(cj[0] - centers[i][0], lx),
                wrap_delta(cj[1] - centers[i][1], ly),
            ];
            let h = d[0] * n[0] + d[1] * n[1];
            if !(h >= worst.1) {
                worst = (c.edges[k], h);
            }
        }
        return Some(Error::RefinementFailed {
            edge: worst.0,
            dual_length: worst.1,
        });
    }
    None
}

/// Ratio (outer mean edge length)/(central mean edge length).
///
/// Central edges have their midpoint within `radius` of `center`, outer
/// edges are farther than `2·radius`.
pub fn refinement_ratio(mesh: &Mesh, center: Point, radius: f64) -> f64 {
    let (mut inner, mut n_inner, mut outer, mut n_outer) = (0.0, 0usize, 0.0, 0usize);
    for e in &mesh.edges {
        let d = mesh.distance(center, e.midpoint);
        if d < radius {
            inner += e.length;
            n_inner += 1;
        } else if d > 2.0 * radius {
            outer += e.length;
            n_outer += 1;
        }
    }
    (outer / n_outer as f64) / (inner / n_inner as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_n32() {
        let m = build_regular_mesh(32, 5000.0, 4330.0).unwrap();
        assert_eq!(m.n_cells(), 2048);
        assert_eq!(m.n_edges(), 3072);
        assert_eq!(m.n_nodes(), 1024);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            build_regular_mesh(5, 5000.0, 4330.0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            build_regular_mesh(2, 5000.0, 4330.0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            build_regular_mesh(8, 5000.0, 5000.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn zero_strength_is_identity() {
        let base = build_regular_mesh(8, 5000.0, 4330.0).unwrap();
        let m = Monitor {
            strength: 0.0,
            ..Monitor::centered(5000.0, 4330.0)
        };
        let r = build_refined_mesh(&base, &m, 50).unwrap();
        for (a, b) in base.nodes.iter().zip(&r.nodes) {
            assert_eq!(a.position, b.position);
        }
        for (a, b) in base.edges.iter().zip(&r.edges) {
            assert_eq!(a.dual_length, b.dual_length);
        }
    }
}
