//! Two-qubit boundary-state geometry for relative entropy of entanglement.
//!
//! Any two-qubit state σ on the entangled/separable boundary (signed
//! concurrence zero) determines, in closed form, the ray of entangled states
//! ρ(x) = σ + xδ for which σ is the closest separable state under quantum
//! relative entropy. This crate constructs such boundary states from local
//! filters and canonical Bell-diagonal weights, evaluates the boundary
//! normal δ and the concurrence growth rate along it, checks every extremal
//! condition the construction must satisfy, and cross-validates the whole
//! picture with an independent Frank-Wolfe minimizer over the separable set
//! that also computes the relative entropy of entanglement for arbitrary
//! states.
//!
//! The numerical core is generic over the floating-point scalar via
//! [`Scalar`]; concrete `f64` aliases are exported at the crate root.

#![forbid(unsafe_code)]

mod error;
mod scalar;

pub mod boundary;
pub mod linalg;
pub mod normal_form;
pub mod oracle;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` aliases for the main types.
pub type CMat64 = linalg::CMat<f64>;
pub type CVec64 = linalg::CVec<f64>;
pub type HermEig64 = linalg::HermEig<f64>;
pub type TakagiFactor64 = linalg::TakagiFactor<f64>;
pub type DensityMatrix64 = states::DensityMatrix<f64>;
pub type SignedConcurrence64 = states::SignedConcurrence<f64>;
pub type WoottersBasis64 = normal_form::WoottersBasis<f64>;
pub type FilterNormalForm64 = normal_form::FilterNormalForm<f64>;
pub type GramMatrices64 = normal_form::GramMatrices<f64>;
pub type BoundaryState64 = boundary::BoundaryState<f64>;
pub type NormalVector64 = boundary::NormalVector<f64>;
pub type RayPoint64 = boundary::RayPoint<f64>;
pub type SeparableEnsemble64 = oracle::SeparableEnsemble<f64>;
pub type OracleReport64 = oracle::OracleReport<f64>;
