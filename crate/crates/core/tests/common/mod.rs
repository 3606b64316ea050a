#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vsw_core::mesh::{
    build_refined_mesh, build_regular_mesh, compute_dual_geometry, Monitor, REFINE_ITERATIONS,
};
use vsw_core::{CellField, EdgeField, Mesh};

pub const LX: f64 = 5000.0;
pub const LY: f64 = 4330.0;
pub const G: f64 = 7.32e7;
pub const F: f64 = 5.3108;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn regular(n: usize) -> Mesh {
    build_regular_mesh(n, LX, LY).unwrap()
}

pub fn refined(n: usize) -> Mesh {
    build_refined_mesh(&regular(n), &Monitor::centered(LX, LY), REFINE_ITERATIONS).unwrap()
}

/// Regular mesh with every node moved by up to `amp` edge lengths.
pub fn jittered(n: usize, amp: f64, seed: u64) -> Mesh {
    let base = regular(n);
    let mut raw = base.raw();
    let step = LX / n as f64;
    let mut r = rng(seed);
    for p in &mut raw.nodes {
        p[0] += amp * step * r.gen_range(-1.0..1.0);
        p[1] += amp * step * r.gen_range(-1.0..1.0);
    }
    compute_dual_geometry(&raw).unwrap()
}

pub fn random_velocity(mesh: &Mesh, r: &mut ChaCha8Rng, scale: f64) -> EdgeField {
    EdgeField::from_fn(mesh.n_edges(), |_| scale * r.gen_range(-1.0..1.0))
}

pub fn random_depth(mesh: &Mesh, r: &mut ChaCha8Rng, lo: f64, hi: f64) -> CellField {
    CellField::from_fn(mesh.n_cells(), |_| r.gen_range(lo..hi))
}

pub fn rel(err: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}
