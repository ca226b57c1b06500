use thiserror::Error;

use crate::base_geometry::FieldRole;
use crate::expr::ExprError;
use crate::jets::JetError;

/// Errors raised while evaluating geometry at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("metric of `{manifold}` is not positive definite at {point:?}")]
    NotPositiveDefinite { manifold: String, point: Vec<f64> },
    #[error("metric of `{manifold}` is singular at {point:?}")]
    SingularMetric { manifold: String, point: Vec<f64> },
    #[error("expected a {expected} field, got a {found}")]
    RoleMismatch { expected: FieldRole, found: FieldRole },
    #[error("expected {expected} components, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("point {point:?} lies outside the sampling box of `{manifold}`")]
    OutOfBox { manifold: String, point: Vec<f64> },
    #[error("phase vectors are based at different points")]
    BaseMismatch,
    #[error("invalid manifold `{manifold}`: {reason}")]
    InvalidManifold { manifold: String, reason: String },
    #[error("no valid sample for `{manifold}` after {attempts} draws; last rejected point {point:?}")]
    SamplingExhausted {
        manifold: String,
        attempts: usize,
        point: Vec<f64>,
    },
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
