//! Error type shared by every module.

use alloc::string::String;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two objects that must share the dimension of `W` do not.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch {
        /// Expected length.
        expected: usize,
        /// Length actually supplied.
        found: usize,
    },
    /// A point required to be interior to the Lorentz cone is not.
    #[error("{what} not in Lorentz cone")]
    NotInCone {
        /// Which argument failed.
        what: &'static str,
    },
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A matrix failed group-membership validation.
    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),
    /// Two points do not share an orbit of the subcone group.
    #[error("not in same G0-orbit: invariants {left} and {right}")]
    NotSameOrbit {
        /// Invariant of the source point.
        left: f64,
        /// Invariant of the target point.
        right: f64,
    },
    /// An analytically nonnegative quantity came out clearly negative.
    #[error("numerical inconsistency: {0}")]
    Numerical(String),
    /// A calibration object does not match the test inputs.
    #[error("calibration mismatch: {0}")]
    CalibrationMismatch(String),
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
