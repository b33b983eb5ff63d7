//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while analyzing curvature data.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not symmetric: asymmetry {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotSymmetric { residual: f64, tolerance: f64 },

    #[error("degenerate plane: |<P,P>| = {norm:.3e} is below tolerance {tolerance:.3e}")]
    DegeneratePlane { norm: f64, tolerance: f64 },

    #[error("bivector is not a unit decomposable plane: wedge defect {wedge:.3e}, norm defect {norm_defect:.3e}")]
    NotAPlane { wedge: f64, norm_defect: f64 },

    #[error("operator does not commute with the Lorentzian star: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotComplexLinear { residual: f64, tolerance: f64 },

    #[error("star squares to {found}I but the decomposition was requested for {requested}I")]
    SignMismatch { requested: i32, found: i32 },

    #[error("operator does not commute with the deformation star: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotStarEinstein { residual: f64, tolerance: f64 },

    #[error("chart coordinate outside the domain: radicand {radicand:.3e} is not positive")]
    ChartDomainExceeded { radicand: f64 },

    #[error("expected {expected} eigenvalue(s) for this Jordan type, got {got}")]
    BadEigenvalueCount { expected: usize, got: usize },

    #[error("tensor has frame signature {found:?} but {expected:?} is required here")]
    WrongFrameSignature {
        expected: crate::basis::Signature,
        found: crate::basis::Signature,
    },

    #[error("unsupported deformation {deformation:?} for a {frame:?}-frame tensor")]
    InvalidDeformation {
        frame: crate::basis::Signature,
        deformation: crate::basis::Signature,
    },

    #[error("Bianchi residual {residual:.3e} exceeds strict tolerance {tolerance:.3e}")]
    BianchiViolation { residual: f64, tolerance: f64 },

    #[error("eigenvalue iteration did not converge")]
    EigenFailure,

    #[error("{path}:{line}: parse error: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: expected 21 curvature entries, found {found}")]
    WrongEntryCount { path: String, found: usize },

    #[error("{path}:{line}: unknown signature tag '{tag}'")]
    UnknownSignature {
        path: String,
        line: usize,
        tag: String,
    },

    #[error("{path}: file format version {found} is not supported (expected {expected})")]
    VersionMismatch {
        path: String,
        expected: u32,
        found: u32,
    },

    #[error("analysis not applicable: {0}")]
    NotApplicable(String),
}
