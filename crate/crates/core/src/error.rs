use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Vector or matrix dimensions disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// Dimension zero or above [`crate::MAX_DIM`].
    UnsupportedDimension(usize),
    /// NaN or infinite input entry.
    NonFinite,
    /// Gram determinant of the chart Jacobian at or below the singular floor.
    SingularChart { gram_det: f64 },
    /// Adaptive quadrature could not certify the requested tolerance.
    ToleranceNotMet { bound: f64, tolerance: f64 },
    /// Gaussian tail at the edge of the integration box is too large.
    TruncationNotMet { relative_tail: f64 },
    /// Level value is (numerically) critical on the level set.
    RegularValue { gradient_norm: f64 },
    /// Parameter outside the domain of an operation.
    Domain(&'static str),
    /// Point outside the region foliated by the ball family.
    OutsideFoliation,
    /// Gradient of a level function requested at its vertex (`f = 0`).
    GradientUndefined,
    /// Richardson extrapolation did not settle; carries the raw sequence.
    NonConvergent { sequence: Vec<f64> },
    /// Invalid quadrature or grid specification.
    InvalidSpec(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::UnsupportedDimension(d) => write!(f, "unsupported dimension {d}"),
            Error::NonFinite => f.write_str("non-finite entry"),
            Error::SingularChart { gram_det } => {
                write!(f, "singular chart: Gram determinant {gram_det:e}")
            }
            Error::ToleranceNotMet { bound, tolerance } => write!(
                f,
                "quadrature tolerance not met: achieved bound {bound:e} > {tolerance:e}"
            ),
            Error::TruncationNotMet { relative_tail } => write!(
                f,
                "Gaussian truncation not met: relative tail {relative_tail:e} at box edge"
            ),
            Error::RegularValue { gradient_norm } => write!(
                f,
                "level value is not regular: gradient norm {gradient_norm:e} on the level set"
            ),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::OutsideFoliation => f.write_str("point outside the foliated region"),
            Error::GradientUndefined => f.write_str("gradient undefined at the family vertex"),
            Error::NonConvergent { sequence } => {
                write!(f, "extrapolation did not converge: {sequence:?}")
            }
            Error::InvalidSpec(what) => write!(f, "invalid specification: {what}"),
        }
    }
}

impl core::error::Error for Error {}
