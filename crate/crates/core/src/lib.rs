//! Structure-preserving integrator for the rotating shallow water equations
//! on doubly periodic triangular meshes.
//!
//! The discretization represents the fluid velocity as a row-null matrix `A`
//! acting on cell averages, with one normal velocity `V_ij` per primal edge
//! and one depth `D_i` per triangle. Vorticity lives on the circumcentric
//! dual cells around the mesh nodes.
//!
//! Units throughout are kilometres and days.
//!
//! Module map:
//! - [`mesh`]: periodic triangulations and their circumcentric duals
//! - [`operators`]: discrete calculus and the discrete Lie derivative,
//!   together with a dense-matrix reference implementation
//! - [`dynamics`]: semidiscrete tendencies of momentum and continuity
//! - [`integrator`]: Cayley density update and fixed-point momentum solve
//! - [`diagnostics`]: conserved quantities, error norms, spectra
//! - [`cases`]: initial states of the standard test problems
//! - [`units`]: SI to km/day conversion

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cases;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod integrator;
pub mod linsolve;
pub mod mesh;
pub mod operators;
pub mod units;

pub use error::{Error, Result};
pub use fields::{CellField, EdgeField, NodeField};
pub use mesh::{Mesh, Point};
