//! Pointwise curvature algebra for oriented 4-manifolds.
//!
//! Given the Riemann tensor of a metric in an orthonormal frame, this crate
//! builds the curvature operator on the 6-dimensional bivector space, the
//! Hodge star operators of Riemannian, Lorentzian, and split-signature
//! deformation metrics, and everything derived from their interplay:
//! commutation ("star-Einstein") residuals, generalized Petrov Types via the
//! complex structure induced by the Lorentzian star, almost-Einstein Ricci
//! patterns, the unique Lorentzian normal form, and critical 2-planes of the
//! various sectional-curvature quadratic forms.
//!
//! All values are immutable and all operations are pure functions, so
//! everything here is safe to call from multiple threads. Batch entry points
//! run on rayon when the `parallel` feature (default) is enabled and fall
//! back to sequential iteration otherwise.

pub mod basis;
pub mod batch;
pub mod catalog;
pub mod classify;
pub mod curvature;
pub mod error;
pub mod format;
pub mod hodge;
pub mod linalg;
pub mod pipeline;
pub mod report;
pub mod sectional;
pub mod verification;

pub use basis::{Lambda2Metric, Lambda2Vector, Signature};
pub use curvature::{CurvatureTensor, OperatorKind, OperatorMatrix, RicciForm, WeylBlocks};
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Default identity tolerance; overridable through `PETROV_TOL`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Tolerances used by the analysis pipeline.
///
/// `identity` is the documented knob (env var `PETROV_TOL`); the remaining
/// fields keep their documented defaults independently of it.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Exact-identity checks on floating data (commutation, pattern matches).
    pub identity: f64,
    /// Relative Bianchi residual accepted without a warning flag.
    pub bianchi: f64,
    /// Rejection threshold for degenerate planes, relative to the plane norm.
    pub degenerate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: DEFAULT_TOL,
            bianchi: 1e-9,
            degenerate: 1e-6,
        }
    }
}

impl Tolerances {
    /// Reads `PETROV_TOL` from the environment, falling back to the defaults.
    pub fn from_env() -> Self {
        let mut t = Tolerances::default();
        if let Ok(s) = std::env::var("PETROV_TOL") {
            if let Ok(v) = s.trim().parse::<f64>() {
                if v.is_finite() && v > 0.0 {
                    t.identity = v;
                }
            }
        }
        t
    }
}
