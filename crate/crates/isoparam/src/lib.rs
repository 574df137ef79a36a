//! Exact-arithmetic library for affine root systems of hyperplane
//! arrangements and for the homogeneous structure of isoparametric
//! orbit models.
//!
//! Everything downstream of the scalar layer works over exact rationals
//! (Gaussian rationals for the complex matrix models), so all core
//! verification is tolerance-free. Floating point appears only in the
//! spectral block-bound checker, which is explicitly an estimate.

pub mod arrangement;
pub mod blockbound;
pub mod dynkin;
pub mod euclid_scan;
pub mod finite;
pub mod gaussian;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod report;
pub mod root_system;
pub mod scalar;
pub mod slices;
pub mod weyl;

pub use scalar::Rat;
