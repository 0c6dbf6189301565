//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A quadrature or eigensolver failed to reach the requested tolerance.
    /// Carries the best estimate obtained and an error bound for it.
    #[error("accuracy failure in {context}: best estimate {best:e}, error bound {error_bound:e}")]
    Accuracy {
        context: &'static str,
        best: f64,
        error_bound: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// SCF iteration exceeded its cap without meeting the energy tolerance.
    #[error("SCF did not converge within {iterations} iterations (last residual {last_residual:e})")]
    NonConvergence {
        iterations: usize,
        last_residual: f64,
        residual_history: Vec<f64>,
    },

    /// The ground state carries mass near the grid boundary; the domain must
    /// be enlarged to at least the suggested half extent.
    #[error("grid too small: boundary mass {boundary_mass:e}, suggest half extent >= {suggested_half_extent}")]
    DomainTooSmall {
        boundary_mass: f64,
        suggested_half_extent: f64,
    },

    #[error("problem size exceeds desk-scale guard: {0}")]
    SizeLimit(String),

    /// `log(Z^2/B)` vanishes; the localization radius formula is singular.
    #[error("near-singular logarithm: |log(Z^2/B)| = {0:e} < 1e-6")]
    NearSingularLog(f64),

    /// A declared envelope failed pointwise validation.
    #[error("envelope violation for {which} at x = {worst_x}: deficit {violation:e}")]
    EnvelopeViolation {
        which: String,
        worst_x: f64,
        violation: f64,
    },

    #[error("sampling produced no usable points: {0}")]
    Sampling(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
