//! Fixtures shared by the benchmarks in `benches/`.

use vsw_core::cases::{initialize, CaseName, CaseSpec};
use vsw_core::dynamics::PhysParams;
use vsw_core::integrator::State;
use vsw_core::mesh::build_regular_mesh;
use vsw_core::Mesh;

pub const LX: f64 = 5000.0;
pub const LY: f64 = 4330.0;
pub const G: f64 = 7.32e7;
pub const F: f64 = 5.3108;

pub struct Fixture {
    pub mesh: Mesh,
    pub state: State,
    pub params: PhysParams,
}

/// Isolated vortex on a regular 2·n² mesh.
pub fn vortex(n: usize) -> Fixture {
    let mesh = build_regular_mesh(n, LX, LY).expect("regular mesh");
    let spec = CaseSpec::default_for(CaseName::IsolatedVortex, LX, LY);
    let init = initialize(&mesh, &spec, G, F).expect("vortex init");
    let params = PhysParams::new(&mesh, G, F, spec.h0).expect("parameters");
    Fixture {
        mesh,
        state: init.state,
        params,
    }
}
