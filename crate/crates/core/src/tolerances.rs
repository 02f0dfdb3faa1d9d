//! Central tolerance budget.
//!
//! Every threshold that gates a precondition or classifies a state lives here,
//! so the numbers are visible in one place and tests can reference the same
//! constants the implementation uses.

/// Gate for the mean-zero precondition of the antiderivative.
pub const MEAN_TOL: f64 = 1e-8;

/// Gate for "mean(v)/pi is an integer" when extending the antiderivative.
pub const INT_TOL: f64 = 1e-8;

/// Default epsilon for phase classification (distance to the fold and to the
/// constraint manifold).
pub const CLASSIFY_EPS: f64 = 1e-6;

/// Default epsilon on |∫cos(u)| below which the normalizing constant is
/// ill-conditioned and flows must abort.
pub const RAMIFICATION_EPS: f64 = 1e-6;

/// Energy fraction allowed in the top third of wavenumbers before a state is
/// declared under-resolved.
pub const TAIL_THRESHOLD: f64 = 1e-8;

/// Central-difference step for gradient verification.
pub const FD_STEP: f64 = 1e-5;

/// Substeps of the monodromy integrator per grid interval.
pub const HILL_SUBSTEPS: usize = 16;

/// Margin by which surface patches must stay inside (0, pi).
pub const DELTA_RANGE: f64 = 0.05;

/// Frame-vs-position residual above which reconstruction rejects the input
/// field as a non-solution.
pub const COMPAT_THRESHOLD: f64 = 0.02;
