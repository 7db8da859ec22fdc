//! Steady-state covariance and Gaussian-entanglement engine for driven
//! cavity-optomechanical models in the linearized regime.
//!
//! The crate covers the full pipeline from raw experimental knobs to an
//! entanglement figure of merit:
//!
//! 1. [`params`] — physical parameters and derived scalars (vacuum coupling,
//!    drive amplitude, thermal occupation, mean fields).
//! 2. [`model`] — drift matrix `A` and diffusion matrix `D` for each model
//!    variant (original, filter, inverse filter, cavity array).
//! 3. [`stability`] — spectral and Routh–Hurwitz stability tests.
//! 4. [`lyapunov`] — the steady-state covariance from `AV + VAᵀ = −D`,
//!    plus two independent oracles (ODE integration, Monte Carlo).
//! 5. [`entanglement`] — logarithmic negativity, the Simon criterion, and
//!    covariance physicality checks.
//!
//! Quadratures are normalized so that the vacuum variance is 1/2; the
//! entanglement threshold `Ξ < 1/2` and the Simon form `4 det V < Σ − 1/4`
//! hold only in this normalization.
//!
//! All frequencies are angular (rad/s). Quantities quoted elsewhere as
//! `π`-multiples (e.g. a cavity decay of `8.8π MHz`) are taken at face value
//! as rad/s; this is the only reading consistent with `ω_c = 2πc/λ` and the
//! quoted finesse `F = πc/Lκ`.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature for embedded use.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod lyapunov;
pub mod model;
pub mod params;
pub mod rng;
pub mod stability;

mod math;

pub use entanglement::{EntanglementReport, PhysicalityReport};
pub use error::CoreError;
pub use linalg::Mat;
pub use lyapunov::CovarianceMatrix;
pub use model::{LinearModel, ModelKind};
pub use params::{DerivedParams, MeanField, PhysicalConstants, PhysicalParams};
pub use stability::StabilityReport;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, CoreError>;
