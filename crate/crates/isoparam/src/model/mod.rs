//! Concrete finite-dimensional orbit models with exact verification of
//! the homogeneous-structure identities.
//!
//! Each model is a matrix Lie algebra over Gaussian rationals with an
//! involution splitting g = k + p, a maximal abelian a in p and a
//! regular point x in a. The tangent space of the orbit through x is
//! the sum of the restricted root spaces, the homogeneous structure is
//! the bracket [X-check, Y] projected back to it, and every identity
//! checked downstream is an exact rational equation.

mod cartan;
mod cmat;
mod gamma;
mod reconstruct;
mod verify;

pub use cartan::{CartanModel, Decomposition, ModelKind, Sphere};
pub use cmat::CMat;
pub use gamma::{GammaSystem, NormalVec, TangentVec};
pub use reconstruct::{nabla_tensor, reconstruct_gamma, NablaData};
pub use verify::{verify_suite, IdentityReport, SuiteReport};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("model invariant failed: {0}")]
    Invariant(String),
    #[error("point is not regular: {0}")]
    DegeneratePoint(String),
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("argument is not supported in a single eigenspace")]
    MixedArgument,
    #[error("decomposition inconsistency: {0}")]
    Inconsistency(String),
    #[error("unknown model name {0}")]
    UnknownModel(String),
}
