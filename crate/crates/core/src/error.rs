use std::io;

use thiserror::Error;

/// Errors raised by the geometry, quadrature and optimizer layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point is not on the unit 3-sphere (|x| = {norm})")]
    NotOnSphere { norm: f64 },
    #[error("coincident points (chordal distance {distance:e})")]
    CoincidentPoints { distance: f64 },
    #[error("tangent vectors are degenerate (rank {rank} < 6)")]
    DegenerateBasis { rank: usize },
    #[error("curve is not immersed at s = {s} (speed {speed:e})")]
    ImmersionFailure { s: f64, speed: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bad polygon: {0}")]
    BadPolygon(String),
    #[error("chart pole lies on a curve (distance {distance:e})")]
    PoleOnCurve { distance: f64 },
    #[error("tangent circles coincide; chart angle is not applicable")]
    NotApplicable,
    #[error("four points are concircular (relative singular value {ratio:e})")]
    DegenerateSphere { ratio: f64 },
    #[error("exterior derivative sign is inconsistent across the grid")]
    SignInconsistency,
    #[error("quadrature did not converge by {n}x{n} (last change {delta:e})")]
    NoConvergence { n: usize, delta: f64 },
    #[error("components intersect or come closer than the separation floor")]
    DisjointnessViolation,
    #[error("descent stalled after {backtracks} backtracks at step {step}")]
    Stalled { step: usize, backtracks: usize },
    #[error("conformal angle cosine {value} outside [-1, 1]")]
    AngleOutOfRange { value: f64 },
    #[error("invalid grid size {0}: must be a power of two in [32, 1024]")]
    GridSize(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
