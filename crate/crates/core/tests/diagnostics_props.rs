mod common;

use common::*;
use std::f64::consts::PI;
use vsw_core::diagnostics::{
    error_norms, match_peaks, observed_order, predict_frequencies, quantities, spectrum,
    SpectrumOptions,
};
use vsw_core::dynamics::PhysParams;
use vsw_core::integrator::State;
use vsw_core::{CellField, EdgeField, Error};

#[test]
fn total_pv_is_f_times_domain_area() {
    for (seed, m) in [regular(8), refined(8), jittered(8, 0.1, 3)]
        .iter()
        .enumerate()
    {
        let mut r = rng(seed as u64);
        let p = PhysParams::new(m, G, F, 1.0).unwrap();
        for _ in 0..10 {
            let s = State::new(
                random_velocity(m, &mut r, 1000.0),
                random_depth(m, &mut r, 0.5, 1.5),
            );
            let q = quantities(m, &s, &p).unwrap();
            let expect = F * LX * LY;
            assert!(rel((q.pv - expect).abs(), expect) <= 1e-12);
        }
    }
}

#[test]
fn energies_of_a_flat_lake() {
    let m = regular(8);
    let p = PhysParams::new(&m, G, F, 0.75).unwrap();
    let s = State::new(
        EdgeField::zeros(m.n_edges()),
        CellField::constant(m.n_cells(), 0.75),
    );
    let q = quantities(&m, &s, &p).unwrap();
    assert_eq!(q.e_kin, 0.0);
    assert!(rel((q.mass - 0.75 * LX * LY).abs(), q.mass) < 1e-14);
    assert!(rel((q.e_pot - 0.5 * G * 0.75 * 0.75 * LX * LY).abs(), q.e_pot) < 1e-14);
    assert!(rel((q.pe - 0.5 * F * F / 0.75 * LX * LY).abs(), q.pe) < 1e-14);
}

#[test]
fn spectrum_finds_a_pure_tone() {
    let dt = 0.01;
    let omega = 12.0;
    let series: Vec<f64> = (0..1000).map(|k| (omega * k as f64 * dt).cos()).collect();
    let s = spectrum(&series, dt, &SpectrumOptions::default()).unwrap();
    assert!((s.resolution - 2.0 * PI / 10.0).abs() < 1e-12);
    let hit = match_peaks(&s.peaks, &[omega], s.resolution);
    assert!(hit[0].is_some(), "{:?}", s.peaks);
}

#[test]
fn spectrum_is_linear_and_ignores_the_mean() {
    let dt = 0.01;
    let base: Vec<f64> = (0..512)
        .map(|k| (10.7 * k as f64 * dt).sin() + 0.3 * (15.2 * k as f64 * dt).cos())
        .collect();
    let scaled: Vec<f64> = base.iter().map(|x| 3.0 * x + 7.0).collect();
    let opts = SpectrumOptions::default();
    let a = spectrum(&base, dt, &opts).unwrap();
    let b = spectrum(&scaled, dt, &opts).unwrap();
    for (x, y) in a.magnitudes.iter().zip(&b.magnitudes) {
        assert!((3.0 * x - y).abs() <= 1e-9 * (1.0 + y));
    }
    assert_eq!(a.peaks, b.peaks);
}

#[test]
fn short_series_are_rejected() {
    let opts = SpectrumOptions {
        lowest_frequency: Some(5.31),
        ..Default::default()
    };
    assert!(matches!(
        spectrum(&[0.0; 100], 0.01, &opts),
        Err(Error::SeriesTooShort { .. })
    ));
}

#[test]
fn predicted_frequencies_exceed_f() {
    let modes = predict_frequencies(F, G, 0.75, LX, LY, 3);
    assert_eq!(modes.len(), 16);
    for m in &modes {
        assert!(m.omega >= F);
        if m.nx + m.ny > 0 {
            assert!(m.omega > F);
        }
    }
    let lowest = modes
        .iter()
        .filter(|m| m.nx + m.ny > 0)
        .map(|m| m.omega)
        .fold(f64::INFINITY, f64::min);
    assert!((lowest - 10.7).abs() < 0.1, "{lowest}");
}

#[test]
fn error_norms_and_orders() {
    let m = regular(4);
    let a = CellField::constant(m.n_cells(), 2.0);
    let b = CellField::from_fn(m.n_cells(), |i| 2.0 + if i == 0 { 0.2 } else { 0.0 });
    let same = error_norms(&m, &a, &a).unwrap();
    assert_eq!((same.l2, same.linf), (0.0, 0.0));
    let n = error_norms(&m, &b, &a).unwrap();
    assert!((n.linf - 0.1).abs() < 1e-12);
    assert!(matches!(
        error_norms(&m, &a, &CellField::zeros(m.n_cells())),
        Err(Error::NormUndefined)
    ));
    assert!(error_norms(&m, &a, &[1.0]).is_err());
    assert!((observed_order(4e-2, 1e-2, 2.0, 1.0) - 2.0).abs() < 1e-12);
}
