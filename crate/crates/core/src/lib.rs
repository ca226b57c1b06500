//! Lifts of the Levi-Civita connection of a Riemannian manifold to its
//! cotangent bundle, evaluated pointwise with truncated Taylor arithmetic and
//! checked against the identities they satisfy.

// Index loops mirror the tensor notation; negated comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod base_geometry;
pub mod catalog;
pub mod cli;
pub mod cotangent;
pub mod error;
pub mod expr;
pub mod jets;
pub mod lifted_connections;
pub mod scalar;
pub mod tensor;
pub mod verify;

pub use base_geometry::{BasePoint, ConnectionValue, CurvatureValue, FieldRole, FieldSpec, Interval, ManifoldSpec};
pub use cotangent::{PhasePoint, PhaseVector};
pub use error::{Error, Result};
pub use expr::{parse, Expr, ExprError};
pub use jets::{Jet, JetError};
pub use lifted_connections::{CurvatureSign, LiftedConnection};
pub use verify::{PropertyReport, ReportEntry, SampleConfig, Suite};
