mod common;

use common::*;
use vsw_core::cases::{init_lake_at_rest, initialize, CaseName, CaseSpec};
use vsw_core::diagnostics::quantities;
use vsw_core::dynamics::{momentum_rhs, pressure_term, PhysParams};
use vsw_core::integrator::{
    courant_number, density_step, step, MomentumSolver, SolverParams, State,
};
use vsw_core::units::seconds_to_days;
use vsw_core::{CellField, EdgeField, Error};

#[test]
fn lake_at_rest_is_kept_bitwise() {
    let m = refined(8);
    let spec = CaseSpec::lake_at_rest(LX, LY);
    let init = init_lake_at_rest(&m, &spec).unwrap();
    let p = PhysParams::new(&m, G, F, spec.h0)
        .unwrap()
        .with_topography(init.b.clone());
    let solver = SolverParams::new(seconds_to_days(60.0));
    let mut s = init.state.clone();
    for _ in 0..20 {
        s = step(&m, &s, &p, &solver).unwrap().0;
        assert!(s.v.iter().all(|&v| v == 0.0));
        for i in 0..m.n_cells() {
            assert_eq!(s.d[i] + init.b[i], spec.h0);
        }
    }
}

#[test]
fn density_step_conserves_mass_for_random_velocities() {
    let m = jittered(8, 0.08, 21);
    let mut r = rng(5);
    let mut d = random_depth(&m, &mut r, 0.5, 1.5);
    let mass =
        |d: &CellField| -> f64 { m.cells.iter().zip(d.iter()).map(|(c, x)| c.area * x).sum() };
    let m0 = mass(&d);
    let solver = SolverParams::new(seconds_to_days(60.0));
    for _ in 0..20 {
        let v = random_velocity(&m, &mut r, 2000.0);
        d = density_step(&m, &v, &d, &solver).unwrap();
        assert!(rel((mass(&d) - m0).abs(), m0) <= 1e-14);
    }
}

#[test]
fn first_sweep_is_the_explicit_crank_nicolson_predictor() {
    let m = regular(8);
    let mut r = rng(8);
    let v = random_velocity(&m, &mut r, 500.0);
    let d0 = random_depth(&m, &mut r, 0.6, 0.9);
    let p = PhysParams::new(&m, G, F, 0.75).unwrap();
    let dt = seconds_to_days(60.0);
    let d1 = density_step(&m, &v, &d0, &SolverParams::new(dt)).unwrap();
    let mut solver = MomentumSolver::new(&m, &v, &d0, &d1, &p, dt).unwrap();
    let first = solver.sweep(&v);

    // V + Δt/2 [(-Adv + K)(V, D^t) + (-Adv + K)(V, D^{t+1})] - Δt G(D^{t+1})
    let r0 = momentum_rhs(&m, &v, &d0, &p).unwrap();
    let r1 = momentum_rhs(&m, &v, &d1, &p).unwrap();
    let g0 = pressure_term(&m, &d0, &p);
    let g1 = pressure_term(&m, &d1, &p);
    let expect = EdgeField::from_fn(m.n_edges(), |e| {
        v[e] + 0.5 * dt * (r0[e] + g0[e] + r1[e] + g1[e]) - dt * g1[e]
    });
    assert!(rel(first.max_diff(&expect), expect.max_abs()) <= 1e-13);
}

#[test]
fn fixed_point_converges_in_few_sweeps_at_moderate_courant() {
    let m = regular(16);
    let spec = CaseSpec::default_for(CaseName::IsolatedVortex, LX, LY);
    let init = initialize(&m, &spec, G, F).unwrap();
    let p = PhysParams::new(&m, G, F, spec.h0).unwrap();
    let dt = seconds_to_days(120.0);
    assert!(courant_number(&m, spec.h0, dt, G) < 1.0);
    let (_, info) = step(&m, &init.state, &p, &SolverParams::new(dt)).unwrap();
    assert!(info.fp_iterations <= 20, "{}", info.fp_iterations);
}

#[test]
fn huge_time_step_fails_loudly() {
    let m = regular(16);
    let spec = CaseSpec::default_for(CaseName::IsolatedVortex, LX, LY);
    let init = initialize(&m, &spec, G, F).unwrap();
    let p = PhysParams::new(&m, G, F, spec.h0).unwrap();
    let solver = SolverParams {
        max_fp_iterations: 10,
        ..SolverParams::new(0.5)
    };
    match step(&m, &init.state, &p, &solver) {
        Err(Error::FixedPoint { iterations, .. }) => assert_eq!(iterations, 10),
        Err(Error::NonPositiveCellDepth { .. }) => {}
        other => panic!("expected a solver failure, got {:?}", other.map(|(_, i)| i)),
    }
}

#[test]
fn invalid_states_and_parameters_are_rejected() {
    let m = regular(4);
    let mut s = State::new(
        EdgeField::zeros(m.n_edges()),
        CellField::constant(m.n_cells(), 1.0),
    );
    assert!(s.check().is_ok());
    s.d[3] = 0.0;
    assert!(matches!(
        s.check(),
        Err(Error::NonPositiveCellDepth { cell: 3, .. })
    ));
    s.d[3] = 1.0;
    s.v[0] = f64::NAN;
    assert!(matches!(s.check(), Err(Error::NonFinite(_))));
    assert!(SolverParams::new(0.0).validate().is_err());
    assert!(SolverParams::new(-1.0).validate().is_err());
    assert!(SolverParams {
        fp_tol: 0.0,
        ..Default::default()
    }
    .validate()
    .is_err());
}

#[test]
fn total_energy_drift_is_small_over_short_runs() {
    let m = regular(16);
    let spec = CaseSpec::default_for(CaseName::IsolatedVortex, LX, LY);
    let init = initialize(&m, &spec, G, F).unwrap();
    let p = PhysParams::new(&m, G, F, spec.h0).unwrap();
    let solver = SolverParams::new(seconds_to_days(60.0));
    let q0 = quantities(&m, &init.state, &p).unwrap();
    let mut s = init.state;
    for _ in 0..100 {
        s = step(&m, &s, &p, &solver).unwrap().0;
        let e = quantities(&m, &s, &p).unwrap().relative_to(&q0);
        assert!(e.e_tot.abs() < 1e-6, "{}", e.e_tot);
        assert!(e.mass.abs() <= 1e-13);
    }
}
