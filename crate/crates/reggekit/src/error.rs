//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point:?} is outside the domain of the field: {detail}")]
    Domain { point: Vec<f64>, detail: String },
    #[error("connection field is not abelian along the path (sampled commutator norm {norm:.3e})")]
    NonAbelian { norm: f64 },
    #[error("path is not closed (gap {gap:.3e})")]
    NotClosed { gap: f64 },
    #[error("supplied derivative of the gauge field is inconsistent with finite differences (relative defect {defect:.3e} at {point:?})")]
    InconsistentDerivative { point: Vec<f64>, defect: f64 },
    #[error("point {point:?} lies outside the rectangle")]
    OutOfRectangle { point: Vec<f64> },
    #[error("radial gauge condition violated: {detail}")]
    GaugeCondition { detail: String },
    #[error("simplex {simplex:?} is not realizable from the given squared lengths: {detail}")]
    NotRealizable { simplex: Vec<usize>, detail: String },
    #[error("hinge {hinge:?} is not interior (its link is not a single circle)")]
    BoundaryHinge { hinge: Vec<usize> },
    #[error("optimizer did not converge after {iterations} iterations (gradient norm {grad_norm:.3e})")]
    NoConvergence { iterations: usize, grad_norm: f64 },
    #[error("degenerate sector: {detail}")]
    DegenerateSector { detail: String },
    #[error("quadrature resolution too low: {detail}")]
    QuadratureResolution { detail: String },
    #[error("metric is singular or not positive definite: {detail}")]
    SingularMetric { detail: String },
    #[error("loop radius {radius} does not exceed the curvature support radius {support}")]
    RadiusTooSmall { radius: f64, support: f64 },
    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
