//! Initial states of the standard test problems.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fields::{CellField, EdgeField, NodeField};
use crate::integrator::State;
use crate::mesh::{CenterKind, Mesh, Point};
use crate::operators::grad_tangential;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseName {
    LakeAtRest,
    DisturbedLake,
    IsolatedVortex,
    VortexPair,
    ShearFlow,
}

impl CaseName {
    pub const ALL: [CaseName; 5] = [
        CaseName::LakeAtRest,
        CaseName::DisturbedLake,
        CaseName::IsolatedVortex,
        CaseName::VortexPair,
        CaseName::ShearFlow,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseName::LakeAtRest => "lake_at_rest",
            CaseName::DisturbedLake => "disturbed_lake",
            CaseName::IsolatedVortex => "isolated_vortex",
            CaseName::VortexPair => "vortex_pair",
            CaseName::ShearFlow => "shear_flow",
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown case `{s}`")))
    }
}

/// How the isolated-vortex velocity is put on the mesh.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VelocityInit {
    /// Analytic velocity at edge midpoints, projected on the normals.
    #[default]
    Velocity,
    /// `V = k × G⊥(Ψ)` with the streamfunction sampled at the nodes.
    Streamfunction,
}

impl FromStr for VelocityInit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "velocity" => Ok(VelocityInit::Velocity),
            "streamfunction" => Ok(VelocityInit::Streamfunction),
            _ => Err(Error::Config(format!(
                "unknown velocity init `{s}` (expected velocity or streamfunction)"
            ))),
        }
    }
}

/// Case parameters. Lengths and depths in km. For the shear flow `sigma_y`
/// and `lambda_x` are fractions of the domain, as in its formula.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseSpec {
    pub name: CaseName,
    pub h0: f64,
    /// Surface disturbance amplitude.
    pub h_prime: f64,
    /// Island height.
    pub b_prime: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    /// Center offset `o`: centers at `(½ ∓ o) L`.
    pub offset: f64,
    pub kappa: f64,
    pub lambda_x: f64,
    pub velocity_init: VelocityInit,
    pub sample_at: CenterKind,
}

impl CaseSpec {
    fn base(name: CaseName, h0: f64) -> Self {
        CaseSpec {
            name,
            h0,
            h_prime: 0.0,
            b_prime: 0.0,
            sigma_x: 0.0,
            sigma_y: 0.0,
            offset: 0.0,
            kappa: 0.0,
            lambda_x: 0.0,
            velocity_init: VelocityInit::Velocity,
            sample_at: CenterKind::Barycenter,
        }
    }

    pub fn lake_at_rest(lx: f64, ly: f64) -> Self {
        CaseSpec {
            b_prime: 0.1,
            sigma_x: 3.0 * lx / 40.0,
            sigma_y: 3.0 * ly / 40.0,
            offset: 0.1,
            ..Self::base(CaseName::LakeAtRest, 0.75)
        }
    }

    pub fn disturbed_lake(_lx: f64, ly: f64) -> Self {
        CaseSpec {
            h_prime: 0.0075,
            sigma_x: 3.0 * ly / 40.0,
            sigma_y: 3.0 * ly / 40.0,
            ..Self::base(CaseName::DisturbedLake, 0.75)
        }
    }

    pub fn isolated_vortex(lx: f64, ly: f64, h0: f64) -> Self {
        CaseSpec {
            h_prime: 0.075,
            sigma_x: 3.0 * lx / 40.0,
            sigma_y: 3.0 * ly / 40.0,
            ..Self::base(CaseName::IsolatedVortex, h0)
        }
    }

    pub fn vortex_pair(lx: f64, ly: f64, h0: f64) -> Self {
        CaseSpec {
            h_prime: 0.075,
            sigma_x: 3.0 * lx / 40.0,
            sigma_y: 3.0 * ly / 40.0,
            offset: 0.1,
            ..Self::base(CaseName::VortexPair, h0)
        }
    }

    pub fn shear_flow() -> Self {
        CaseSpec {
            h_prime: 0.03,
            sigma_y: 1.0 / 12.0,
            kappa: 0.1,
            lambda_x: 0.5,
            ..Self::base(CaseName::ShearFlow, 1.076)
        }
    }

    /// Defaults of `name` for the given domain; `h0` of the vortex cases is
    /// the quasi-geostrophic 0.75 km.
    pub fn default_for(name: CaseName, lx: f64, ly: f64) -> Self {
        match name {
            CaseName::LakeAtRest => Self::lake_at_rest(lx, ly),
            CaseName::DisturbedLake => Self::disturbed_lake(lx, ly),
            CaseName::IsolatedVortex => Self::isolated_vortex(lx, ly, 0.75),
            CaseName::VortexPair => Self::vortex_pair(lx, ly, 0.75),
            CaseName::ShearFlow => Self::shear_flow(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.h0,
            self.h_prime,
            self.b_prime,
            self.sigma_x,
            self.sigma_y,
            self.offset,
            self.kappa,
            self.lambda_x,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("case parameters must be finite".into()));
        }
        if !(self.h0 > 0.0) {
            return Err(Error::Config(format!(
                "H0 must be positive, got {}",
                self.h0
            )));
        }
        if self.h_prime < 0.0 || self.b_prime < 0.0 {
            return Err(Error::Config("amplitudes must be non-negative".into()));
        }
        let needs_sigma_x = !matches!(self.name, CaseName::ShearFlow);
        if (needs_sigma_x && !(self.sigma_x > 0.0)) || !(self.sigma_y > 0.0) {
            return Err(Error::Config(
                "widths sigma_x, sigma_y must be positive".into(),
            ));
        }
        match self.name {
            CaseName::LakeAtRest => {
                if !(self.b_prime < self.h0) {
                    return Err(Error::Config(
                        "island must stay below the surface (B' < H0)".into(),
                    ));
                }
            }
            CaseName::DisturbedLake | CaseName::VortexPair => {
                if !(self.h_prime < self.h0) {
                    return Err(Error::Config("H' must be smaller than H0".into()));
                }
            }
            CaseName::ShearFlow => {
                if !(self.lambda_x > 0.0) {
                    return Err(Error::Config("lambda_x must be positive".into()));
                }
            }
            CaseName::IsolatedVortex => {}
        }
        if matches!(self.name, CaseName::LakeAtRest | CaseName::VortexPair)
            && !(self.offset > 0.0 && self.offset < 0.5)
        {
            return Err(Error::Config(format!(
                "offset must lie in (0, 1/2), got {}",
                self.offset
            )));
        }
        Ok(())
    }

    /// Centers `((½ - o) Lx, (½ - o) Ly)` and `((½ + o) Lx, (½ + o) Ly)`.
    pub fn offset_centers(&self, lx: f64, ly: f64) -> [Point; 2] {
        let o = self.offset;
        [
            [(0.5 - o) * lx, (0.5 - o) * ly],
            [(0.5 + o) * lx, (0.5 + o) * ly],
        ]
    }
}

/// Initial state together with the bottom topography.
#[derive(Clone, Debug, PartialEq)]
pub struct Initial {
    pub state: State,
    pub b: CellField,
}

/// Periodic coordinate `(L/(πσ)) sin(π(x - c)/L)`.
fn periodic_prime(x: f64, c: f64, l: f64, sigma: f64) -> f64 {
    l / (PI * sigma) * (PI / l * (x - c)).sin()
}

fn sample_cells(mesh: &Mesh, kind: CenterKind, f: impl Fn(Point) -> f64) -> CellField {
    CellField::from_fn(mesh.n_cells(), |i| f(mesh.cell_center(i, kind)))
}

fn sample_nodes(mesh: &Mesh, f: impl Fn(Point) -> f64) -> NodeField {
    NodeField::from_fn(mesh.n_nodes(), |n| f(mesh.nodes[n].position))
}

/// `V = -(g/f) G⊥(h)` with `h` sampled at the nodes: discrete geostrophic
/// balance.
pub fn geostrophic_velocity(mesh: &Mesh, h_nodes: &NodeField, g: f64, f: f64) -> Result<EdgeField> {
    if f == 0.0 || !f.is_finite() {
        return Err(Error::Config(
            "geostrophic initialization needs f != 0".into(),
        ));
    }
    Ok(grad_tangential(mesh, h_nodes).scaled(-g / f))
}

/// `V_ij = u(m_ij)·n_ij` at edge midpoints.
pub fn project_velocity(mesh: &Mesh, u: impl Fn(Point) -> Point) -> EdgeField {
    EdgeField::from_fn(mesh.n_edges(), |e| {
        let ed = &mesh.edges[e];
        let v = u(ed.midpoint);
        v[0] * ed.normal[0] + v[1] * ed.normal[1]
    })
}

fn lake_topography(spec: &CaseSpec, mesh: &Mesh) -> impl Fn(Point) -> f64 {
    let c = spec.offset_centers(mesh.lx, mesh.ly)[0];
    let (lx, ly) = (mesh.lx, mesh.ly);
    let (bp, sx, sy) = (spec.b_prime, spec.sigma_x, spec.sigma_y);
    move |p: Point| {
        let dx = crate::mesh::geometry::wrap_delta(p[0] - c[0], lx);
        let dy = crate::mesh::geometry::wrap_delta(p[1] - c[1], ly);
        bp * (-0.5 * (dx * dx / (sx * sx) + dy * dy / (sy * sy))).exp()
    }
}

/// Lake at rest over a Gaussian island: `V = 0`, `D + B = H0` in every cell.
pub fn init_lake_at_rest(mesh: &Mesh, spec: &CaseSpec) -> Result<Initial> {
    spec.validate()?;
    let bf = lake_topography(spec, mesh);
    let mut b = sample_cells(mesh, spec.sample_at, bf);
    let h0 = spec.h0;
    let mut d = CellField::zeros(mesh.n_cells());
    for i in 0..mesh.n_cells() {
        d[i] = h0 - b[i];
        if d[i] + b[i] != h0 {
            b[i] = h0 - d[i];
        }
    }
    Ok(Initial {
        state: State::new(EdgeField::zeros(mesh.n_edges()), d),
        b,
    })
}

/// Analytic surface `h` of the disturbed lake.
pub fn disturbed_lake_surface(spec: &CaseSpec, lx: f64, ly: f64) -> impl Fn(Point) -> f64 {
    let c = [0.5 * lx, 0.5 * ly];
    let s = spec.clone();
    let shift = 4.0 * PI * s.sigma_x * s.sigma_y / (lx * ly);
    move |p: Point| {
        let x1 = periodic_prime(p[0], c[0], lx, s.sigma_x);
        let y1 = periodic_prime(p[1], c[1], ly, s.sigma_y);
        s.h0 - s.h_prime * ((-0.5 * (x1 * x1 + y1 * y1)).exp() - shift)
    }
}

/// Lake at rest with a small Gaussian depression at the domain center.
pub fn init_disturbed_lake(mesh: &Mesh, spec: &CaseSpec) -> Result<Initial> {
    spec.validate()?;
    let h = disturbed_lake_surface(spec, mesh.lx, mesh.ly);
    Ok(Initial {
        state: State::new(
            EdgeField::zeros(mesh.n_edges()),
            sample_cells(mesh, spec.sample_at, h),
        ),
        b: CellField::zeros(mesh.n_cells()),
    })
}

/// Stationary isolated vortex in gradient-wind balance,
/// `V(r) = u₀ (r/r₀) e^{-½(r/r₀)²}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsolatedVortex {
    pub center: Point,
    pub h0: f64,
    pub u0: f64,
    pub r0: f64,
    pub g: f64,
    pub f: f64,
}

impl IsolatedVortex {
    /// `r₀ = ½(σ_x + σ_y)`, `d = 4 r₀`, `u₀ = 2gH′/(fd)`.
    pub fn new(spec: &CaseSpec, lx: f64, ly: f64, g: f64, f: f64) -> Result<Self> {
        if f == 0.0 || !f.is_finite() {
            return Err(Error::Config("the isolated vortex needs f != 0".into()));
        }
        let r0 = 0.5 * (spec.sigma_x + spec.sigma_y);
        let d = 4.0 * r0;
        Ok(IsolatedVortex {
            center: [0.5 * lx, 0.5 * ly],
            h0: spec.h0,
            u0: 2.0 * g * spec.h_prime / (f * d),
            r0,
            g,
            f,
        })
    }

    pub fn speed(&self, r: f64) -> f64 {
        let s = r / self.r0;
        self.u0 * s * (-0.5 * s * s).exp()
    }

    pub fn streamfunction(&self, r: f64) -> f64 {
        let s = r / self.r0;
        -self.u0 * self.r0 * (-0.5 * s * s).exp()
    }

    pub fn depth(&self, r: f64) -> f64 {
        let s = r / self.r0;
        self.h0
            - self.u0 * self.u0 / (2.0 * self.g) * (-s * s).exp()
            - self.f * self.u0 * self.r0 / self.g * (-0.5 * s * s).exp()
    }

    /// `dH/dr`.
    pub fn depth_slope(&self, r: f64) -> f64 {
        let s = r / self.r0;
        let r02 = self.r0 * self.r0;
        self.u0 * self.u0 * r / (self.g * r02) * (-s * s).exp()
            + self.f * self.u0 * r / (self.g * self.r0) * (-0.5 * s * s).exp()
    }

    /// Relative vorticity `(1/r) d(rV)/dr`.
    pub fn vorticity(&self, r: f64) -> f64 {
        let s = r / self.r0;
        self.u0 / self.r0 * (2.0 - s * s) * (-0.5 * s * s).exp()
    }

    fn offset(&self, p: Point) -> (f64, f64, f64) {
        let x = p[0] - self.center[0];
        let y = p[1] - self.center[1];
        (x, y, (x * x + y * y).sqrt())
    }

    pub fn velocity_at(&self, p: Point) -> Point {
        let (x, y, r) = self.offset(p);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let v = self.speed(r) / r;
        [-y * v, x * v]
    }

    pub fn depth_at(&self, p: Point) -> f64 {
        self.depth(self.offset(p).2)
    }

    pub fn q_rel_at(&self, p: Point) -> f64 {
        let r = self.offset(p).2;
        self.vorticity(r) / self.depth(r)
    }

    /// Exact depth sampled like the initial data.
    pub fn exact_depth(&self, mesh: &Mesh, kind: CenterKind) -> CellField {
        sample_cells(mesh, kind, |p| self.depth_at(p))
    }

    pub fn exact_q_rel(&self, mesh: &Mesh) -> NodeField {
        sample_nodes(mesh, |p| self.q_rel_at(p))
    }
}

pub fn init_isolated_vortex(
    mesh: &Mesh,
    spec: &CaseSpec,
    g: f64,
    f: f64,
) -> Result<(Initial, IsolatedVortex)> {
    spec.validate()?;
    let vx = IsolatedVortex::new(spec, mesh.lx, mesh.ly, g, f)?;
    let d = vx.exact_depth(mesh, spec.sample_at);
    let v = match spec.velocity_init {
        VelocityInit::Velocity => project_velocity(mesh, |p| vx.velocity_at(p)),
        VelocityInit::Streamfunction => {
            let psi = sample_nodes(mesh, |p| vx.streamfunction(vx.offset(p).2));
            grad_tangential(mesh, &psi).scaled(-1.0)
        }
    };
    Ok((
        Initial {
            state: State::new(v, d),
            b: CellField::zeros(mesh.n_cells()),
        },
        vx,
    ))
}

/// Analytic surface of the vortex pair.
pub fn vortex_pair_surface(spec: &CaseSpec, lx: f64, ly: f64) -> impl Fn(Point) -> f64 {
    let cs = spec.offset_centers(lx, ly);
    let s = spec.clone();
    let shift = 4.0 * PI * s.sigma_x * s.sigma_y / (lx * ly);
    move |p: Point| {
        let mut bumps = 0.0;
        for c in cs {
            let x = periodic_prime(p[0], c[0], lx, s.sigma_x);
            let y = periodic_prime(p[1], c[1], ly, s.sigma_y);
            bumps += (-0.5 * (x * x + y * y)).exp();
        }
        s.h0 - s.h_prime * (bumps - shift)
    }
}

/// Two identical depressions in discrete geostrophic balance.
pub fn init_vortex_pair(mesh: &Mesh, spec: &CaseSpec, g: f64, f: f64) -> Result<Initial> {
    spec.validate()?;
    let h = vortex_pair_surface(spec, mesh.lx, mesh.ly);
    let v = geostrophic_velocity(mesh, &sample_nodes(mesh, &h), g, f)?;
    Ok(Initial {
        state: State::new(v, sample_cells(mesh, spec.sample_at, &h)),
        b: CellField::zeros(mesh.n_cells()),
    })
}

/// Analytic surface of the perturbed zonal jet.
pub fn shear_flow_surface(spec: &CaseSpec, lx: f64, ly: f64) -> impl Fn(Point) -> f64 {
    let s = spec.clone();
    move |p: Point| {
        let xp = p[0] / lx;
        let arg = PI / ly * (p[1] - 0.5 * ly);
        let yp = arg.sin() / PI;
        let ypp = (2.0 * arg).sin() / (2.0 * PI);
        let sy = s.sigma_y;
        s.h0 - s.h_prime * ypp / sy
            * (-yp * yp / (2.0 * sy * sy) + 0.5).exp()
            * (1.0 + s.kappa * (2.0 * PI * xp / s.lambda_x).sin())
    }
}

/// Unstable zonal jet in discrete geostrophic balance.
pub fn init_shear_flow(mesh: &Mesh, spec: &CaseSpec, g: f64, f: f64) -> Result<Initial> {
    spec.validate()?;
    let h = shear_flow_surface(spec, mesh.lx, mesh.ly);
    let v = geostrophic_velocity(mesh, &sample_nodes(mesh, &h), g, f)?;
    Ok(Initial {
        state: State::new(v, sample_cells(mesh, spec.sample_at, &h)),
        b: CellField::zeros(mesh.n_cells()),
    })
}

/// Initial state of any case.
pub fn initialize(mesh: &Mesh, spec: &CaseSpec, g: f64, f: f64) -> Result<Initial> {
    match spec.name {
        CaseName::LakeAtRest => init_lake_at_rest(mesh, spec),
        CaseName::DisturbedLake => init_disturbed_lake(mesh, spec),
        CaseName::IsolatedVortex => init_isolated_vortex(mesh, spec, g, f).map(|(i, _)| i),
        CaseName::VortexPair => init_vortex_pair(mesh, spec, g, f),
        CaseName::ShearFlow => init_shear_flow(mesh, spec, g, f),
    }
}
