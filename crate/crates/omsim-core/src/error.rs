//! Error type shared by the numerical pipeline.

use alloc::string::String;

/// Errors surfaced by parameter validation, solvers, and measures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    /// A physical parameter violated its domain.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    /// A derived quantity came out NaN or infinite.
    #[error("non-finite result while computing {what}")]
    NonFinite { what: &'static str },

    /// The QR eigenvalue iteration did not converge within its cap.
    #[error("eigenvalue iteration exceeded {max_iter} iterations at index {index}")]
    EigenNoConvergence { index: usize, max_iter: usize },

    /// A linear system was singular to working precision.
    #[error("singular linear system: {context}")]
    SingularSystem { context: &'static str },

    /// A steady state was requested for a model that is not asymptotically stable.
    #[error("model is not asymptotically stable (max Re eigenvalue = {max_real_eig:e} rad/s)")]
    UnstableModel { max_real_eig: f64 },

    /// The Lyapunov solution failed its residual bound.
    #[error("Lyapunov residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    /// Time integration ran out of horizon before reaching the tolerance.
    #[error("integration horizon exhausted; last residual {residual:e} (target {rtol:e})")]
    HorizonExhausted { residual: f64, rtol: f64 },

    /// A stochastic trajectory diverged (time step too large).
    #[error("stochastic trajectory became non-finite at step {step}; reduce dt")]
    NonFiniteTrajectory { step: usize },

    /// Mode index outside the model's mode count.
    #[error("mode index {index} out of range for {modes} modes")]
    IndexOutOfRange { index: usize, modes: usize },

    /// A covariance block had a complex symplectic spectrum.
    #[error("unphysical covariance: discriminant {discriminant:e} < -eps")]
    UnphysicalCovariance { discriminant: f64 },
}
