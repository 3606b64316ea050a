//! Matrix `A` sampled from an analytic velocity field, and the consistency
//! residual `‖S(A P f) + df·u‖∞`.

use crate::mesh::{Mesh, Point};

use super::SparseA;

/// 3-point Gauss–Legendre on `[0, 1]`.
const GAUSS3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_3, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// Degree-2 interior rule, barycentric coordinates and weights.
const TRI3: [([f64; 3], f64); 3] = [
    ([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0], 1.0 / 3.0),
];

/// Degree-5 seven-point rule, used for cell averages of test functions.
const TRI7: [([f64; 3], f64); 7] = {
    const A1: f64 = 0.059_715_871_789_769_8;
    const B1: f64 = 0.470_142_064_105_115_1;
    const A2: f64 = 0.797_426_985_353_087_3;
    const B2: f64 = 0.101_286_507_323_456_3;
    const W0: f64 = 0.225;
    const W1: f64 = 0.132_394_152_788_506_2;
    const W2: f64 = 0.125_939_180_544_827_2;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], W0),
        ([A1, B1, B1], W1),
        ([B1, A1, B1], W1),
        ([B1, B1, A1], W1),
        ([A2, B2, B2], W2),
        ([B2, A2, B2], W2),
        ([B2, B2, A2], W2),
    ]
};

fn bary(p: &[Point; 3], l: [f64; 3]) -> Point {
    [
        l[0] * p[0][0] + l[1] * p[1][0] + l[2] * p[2][0],
        l[0] * p[0][1] + l[1] * p[1][1] + l[2] * p[2][1],
    ]
}

/// `A^u` with `A_ij = -(1/2Ω_ii) ∫_{D_ij} u·n_ij dS` and
/// `A_ii = (1/2Ω_ii) ∫_{C_i} div u dx`.
pub fn sample_a_from_field(
    mesh: &Mesh,
    u: impl Fn(Point) -> Point,
    div_u: impl Fn(Point) -> f64,
) -> SparseA {
    let mut diag = Vec::with_capacity(mesh.n_cells());
    let mut off = Vec::with_capacity(mesh.n_cells());
    for (i, c) in mesh.cells.iter().enumerate() {
        let p = mesh.cell_vertices(i);
        let mut row = [0.0; 3];
        for k in 0..3 {
            let ed = &mesh.edges[c.edges[k]];
            let a = p[(k + 1) % 3];
            let b = p[(k + 2) % 3];
            let n = [c.signs[k] * ed.normal[0], c.signs[k] * ed.normal[1]];
            let flux: f64 = GAUSS3
                .iter()
                .map(|&(t, w)| {
                    let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                    let v = u(x);
                    w * (v[0] * n[0] + v[1] * n[1])
                })
                .sum::<f64>()
                * ed.length;
            row[k] = -flux / (2.0 * c.area);
        }
        let div: f64 = TRI3
            .iter()
            .map(|&(l, w)| w * div_u(bary(&p, l)))
            .sum::<f64>()
            * c.area;
        diag.push(div / (2.0 * c.area));
        off.push(row);
    }
    SparseA { diag, off }
}

/// Cell averages `P(f)_i` by the seven-point rule.
pub fn cell_averages(mesh: &Mesh, f: impl Fn(Point) -> f64) -> Vec<f64> {
    (0..mesh.n_cells())
        .map(|i| {
            let p = mesh.cell_vertices(i);
            TRI7.iter().map(|&(l, w)| w * f(bary(&p, l))).sum()
        })
        .collect()
}

/// `max_i max_{x ∈ C_i} |(A F)_i + ∇f(x)·u(x)|`, with `x` ranging over the
/// vertices, edge midpoints and barycenter of each cell.
pub fn consistency_residual(
    mesh: &Mesh,
    a: &SparseA,
    f: impl Fn(Point) -> f64,
    grad_f: impl Fn(Point) -> Point,
    u: impl Fn(Point) -> Point,
) -> f64 {
    let avg = cell_averages(mesh, f);
    let af = a.apply(mesh, &avg);
    let mut worst = 0.0_f64;
    for i in 0..mesh.n_cells() {
        let p = mesh.cell_vertices(i);
        let third = 1.0 / 3.0;
        let samples = [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.5, 0.5, 0.0],
            [0.0, 0.5, 0.5],
            [0.5, 0.0, 0.5],
            [third, third, third],
        ];
        for l in samples {
            let x = bary(&p, l);
            let g = grad_f(x);
            let v = u(x);
            let r = af[i] + g[0] * v[0] + g[1] * v[1];
            worst = worst.max(r.abs());
        }
    }
    worst
}
