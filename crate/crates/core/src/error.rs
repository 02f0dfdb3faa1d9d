use thiserror::Error;

use crate::phase::PhaseTag;

pub type Result<T> = std::result::Result<T, Error>;

/// Error vocabulary shared by the whole toolkit. Variants carry the measured
/// quantity that violated a precondition so callers can report diagnostics
/// without re-deriving them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {n} is invalid: {reason}")]
    InvalidGrid { n: usize, reason: &'static str },

    #[error("antiderivative requires a mean-zero input: |mean| = {mean:e} exceeds {tol:e}")]
    NonZeroMean { mean: f64, tol: f64 },

    #[error("mean/pi = {mean_over_pi} is not within {tol:e} of an integer")]
    NonIntegerMean { mean_over_pi: f64, tol: f64 },

    #[error(
        "state is not on the sine constraint manifold: |∫sin(u)| = {sin_integral:e} > {tol:e}"
    )]
    NotOnMsin { sin_integral: f64, tol: f64 },

    #[error(
        "state is not on the sinh constraint manifold: |∫sinh(u)| = {sinh_integral:e} > {tol:e}"
    )]
    NotOnMsinh { sinh_integral: f64, tol: f64 },

    #[error("moment lies on the ramification locus: |K| = {moment_abs:e} <= {eps:e}{}",
        t.map(|t| format!(" at t = {t}")).unwrap_or_default())]
    OnRamificationLocus {
        moment_abs: f64,
        eps: f64,
        /// Evolution time at which the locus was hit, when raised by a flow.
        t: Option<f64>,
        /// Diagnostic mean-drift value at abort (may be huge; that is the point).
        mu_estimate: Option<f64>,
    },

    #[error("state is on the {found} branch, expected {expected}")]
    WrongBranch { expected: PhaseTag, found: PhaseTag },

    #[error("spectral tail fraction {tail_fraction:e} exceeds {threshold:e} at t = {t}")]
    ResolutionLoss {
        tail_fraction: f64,
        threshold: f64,
        t: f64,
    },

    #[error("ODE stepper failed at lambda = {lambda}: {detail}")]
    OdeStepFailure { lambda: f64, detail: String },

    #[error("metric is degenerate: min |sin(u)| = {min_abs_sin:e} within margin {delta:e} of 0")]
    DegenerateMetric { min_abs_sin: f64, delta: f64 },

    #[error("frame compatibility residual {residual:e} exceeds {threshold:e}; the field is not a solution at this resolution")]
    CompatibilityFailure { residual: f64, threshold: f64 },

    #[error("Newton projection onto {target} did not converge: residual {residual:e}")]
    ProjectionFailure { target: &'static str, residual: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    IoFailure(#[from] std::io::Error),
}
