use thiserror::Error;

use crate::mesh::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate triangle {cell}: signed area {area:e} km^2")]
    DegenerateCell { cell: usize, area: f64 },

    #[error("invalid mesh topology:\n{0}")]
    Topology(ValidationReport),

    #[error("mesh refinement failed: dual length of edge {edge} is {dual_length:e} km")]
    RefinementFailed { edge: usize, dual_length: f64 },

    #[error("mesh file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("non-positive face depth {depth:e} km on edge {edge}")]
    NonPositiveDepth { edge: usize, depth: f64 },

    #[error("non-positive depth {depth:e} km in cell {cell}")]
    NonPositiveCellDepth { cell: usize, depth: f64 },

    #[error("non-positive dual depth {depth:e} km at node {node}")]
    NonPositiveNodeDepth { node: usize, depth: f64 },

    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    LinearSolve { iterations: usize, residual: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last max-norm change {residual:e} km/day)")]
    FixedPoint { iterations: usize, residual: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("mesh too large for dense evaluation: {cells} cells (limit {limit})")]
    TooLarge { cells: usize, limit: usize },

    #[error("norm undefined: reference field has zero magnitude")]
    NormUndefined,

    #[error("time series too short: {len} samples, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
