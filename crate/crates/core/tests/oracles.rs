mod common;

use common::*;
use rand::Rng;
use vsw_core::dynamics::{continuity_rhs, kinetic_energy_density, momentum_rhs, PhysParams};
use vsw_core::integrator::DensityOperator;
use vsw_core::operators::dense::{
    dense_flat, lie_derivative_oracle, project_p, DenseOperators, Matrix,
};
use vsw_core::operators::{flat_edge, lie_derivative_stencil, weighted_divergence};
use vsw_core::{CellField, EdgeField, Error, Mesh};

fn meshes() -> Vec<(&'static str, Mesh)> {
    vec![
        ("regular 2x4^2", regular(4)),
        ("regular 2x8^2", regular(8)),
        ("jittered 2x8^2", jittered(8, 0.08, 11)),
        ("refined 2x8^2", refined(8)),
    ]
}

#[test]
fn stencil_matches_dense_lie_derivative() {
    let mut worst = 0.0_f64;
    for (seed, n) in (0..20).map(|s| (s, if s % 2 == 0 { 4 } else { 8 })) {
        let m = regular(n);
        let mut r = rng(seed);
        let v = random_velocity(&m, &mut r, 1500.0);
        let d = random_depth(&m, &mut r, 0.3, 1.2);
        let w = random_velocity(&m, &mut r, 300.0);
        let s = lie_derivative_stencil(&m, &v, &d, &w);
        let o = lie_derivative_oracle(&m, &v, &d, &w).unwrap();
        let e = rel(s.max_diff(&o), o.max_abs());
        assert!(
            e <= 1e-12,
            "instance {seed} on 2x{n}^2: relative difference {e:e}"
        );
        worst = worst.max(e);
    }
    eprintln!("worst relative stencil/oracle difference {worst:e}");
}

#[test]
fn stencil_matches_dense_on_irregular_meshes() {
    for (name, m) in meshes() {
        let mut r = rng(99);
        let v = random_velocity(&m, &mut r, 1000.0);
        let d = random_depth(&m, &mut r, 0.5, 1.5);
        let w = flat_edge(&m, &v);
        let s = lie_derivative_stencil(&m, &v, &d, &w);
        let o = lie_derivative_oracle(&m, &v, &d, &w).unwrap();
        let e = rel(s.max_diff(&o), o.max_abs());
        assert!(e <= 1e-12, "{name}: {e:e}");
    }
}

/// Without rotation the momentum tendency is the coadjoint form
/// `D̄ h ∂t V = P(Ω⁻¹[Aᵀ, Ω D A♭]) - ½(div_i + div_j) A♭ + D̄ (F_j - F_i)`
/// with `F_i = KE_i - ε'_i`.
#[test]
fn momentum_tendency_is_euler_poincare_form() {
    for (name, m) in meshes() {
        let mut r = rng(7);
        let v = random_velocity(&m, &mut r, 1000.0);
        let d = random_depth(&m, &mut r, 0.5, 1.5);
        let b = random_depth(&m, &mut r, 0.0, 0.2);
        let p = PhysParams::new(&m, G, 0.0, 1.0).unwrap().with_topography(b);
        let rhs = momentum_rhs(&m, &v, &d, &p).unwrap();

        let fl = flat_edge(&m, &v);
        let lie = lie_derivative_oracle(&m, &v, &d, &fl).unwrap();
        let div = weighted_divergence(&m, &v, &d);
        let ke = kinetic_energy_density(&m, &v);
        let eps = p.energy_derivative(&d);
        let mut worst = 0.0_f64;
        let mut scale = 0.0_f64;
        for (e, ed) in m.edges.iter().enumerate() {
            let [i, j] = ed.cells;
            let dbar = 0.5 * (d[i] + d[j]);
            let lhs = dbar * ed.dual_length * rhs[e];
            let fi = ke[i] - eps[i];
            let fj = ke[j] - eps[j];
            let expect = lie[e] - 0.5 * (div[i] + div[j]) * fl[e] + dbar * (fj - fi);
            worst = worst.max((lhs - expect).abs());
            scale = scale.max(expect.abs());
        }
        assert!(
            rel(worst, scale) <= 1e-12,
            "{name}: {:e}",
            rel(worst, scale)
        );
    }
}

#[test]
fn continuity_matches_dense_density_action() {
    for (name, m) in meshes() {
        let mut r = rng(3);
        let v = random_velocity(&m, &mut r, 1000.0);
        let d = random_depth(&m, &mut r, 0.5, 1.5);
        let ops = DenseOperators::new(&m, &v, &d, &EdgeField::zeros(m.n_edges())).unwrap();
        let dense = CellField(ops.density_action());
        let sparse = continuity_rhs(&m, &v, &d);
        let e = rel(sparse.max_diff(&dense), dense.max_abs());
        assert!(e <= 1e-13, "{name}: {e:e}");
        let op = DensityOperator::from_velocity(&m, &v);
        let e = rel(CellField(op.apply(&d)).max_diff(&dense), dense.max_abs());
        assert!(e <= 1e-13, "{name}: {e:e}");
    }
}

#[test]
fn dense_one_form_closes_around_nodes() {
    let m = jittered(8, 0.05, 5);
    let mut r = rng(17);
    let w = random_velocity(&m, &mut r, 10.0);
    let b = dense_flat(&m, &w).unwrap();
    for i in 0..m.n_cells() {
        assert_eq!(b[(i, i)], 0.0);
        for j in 0..m.n_cells() {
            assert_eq!(b[(i, j)], -b[(j, i)]);
        }
    }
    for (n, node) in m.nodes.iter().enumerate() {
        let omega = m.loop_sum(n, &w);
        let k = node.fan.len();
        for s in 0..k {
            let (ci, cj, ck) = (
                node.fan[s].cell,
                node.fan[(s + 1) % k].cell,
                node.fan[(s + 2) % k].cell,
            );
            let lhs = b[(ci, cj)] + b[(cj, ck)] + b[(ck, ci)];
            assert!((lhs - node.fan[(s + 1) % k].k * omega).abs() < 1e-12 * 10.0);
        }
    }
}

#[test]
fn projector_kills_diagonal_rows() {
    let mut r = rng(1);
    let n = 6;
    let mut l = Matrix::zeros(n);
    for x in l.data.iter_mut() {
        *x = r.gen_range(-1.0..1.0);
    }
    let p = project_p(&l);
    for i in 0..n {
        for j in 0..n {
            let q_ij = l[(i, j)] - l[(i, i)];
            let q_ji = l[(j, i)] - l[(j, j)];
            assert!((p[(i, j)] - 0.5 * (q_ij - q_ji)).abs() < 1e-15);
        }
    }
}

#[test]
fn oracle_refuses_large_meshes() {
    let m = regular(32);
    let z = EdgeField::zeros(m.n_edges());
    let d = CellField::constant(m.n_cells(), 1.0);
    assert!(matches!(
        lie_derivative_oracle(&m, &z, &d, &z),
        Err(Error::TooLarge { cells: 2048, .. })
    ));
}
