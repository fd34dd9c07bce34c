use core::fmt;

/// Errors raised by every fallible operation in the crate.
///
/// `Display` renders a single machine-parseable line of the form
/// `kind: detail`.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical or numerical parameter is outside its admissible range.
    InvalidParameter {
        /// Parameter name as it appears on the command line.
        name: &'static str,
        /// Human-readable constraint.
        reason: &'static str,
    },
    /// Argument outside the domain of a special function.
    Domain(&'static str),
    /// Pole of the Gamma function.
    Pole,
    /// `Q(m omega) = 0`: the parameters sit exactly on a regime boundary.
    RegimeBoundary,
    /// The requested branch is not admissible for the given parameters.
    InvalidBranch {
        /// Branch tag.
        branch: &'static str,
        /// Violated condition.
        reason: &'static str,
    },
    /// Jacobi exponents give a function that is not square integrable.
    NotNormalizable {
        /// Violated inequality.
        condition: &'static str,
    },
    /// Momentum-square expectation value diverges at the `beta p^2 = 1` wall.
    Divergent {
        /// Estimated exponent of the integrand's tail (negative or zero when divergent).
        tail_exponent: f64,
    },
    /// Two grid functions live on different grids.
    GridMismatch,
    /// Grid too small for the requested operation.
    GridTooSmall {
        /// Minimum admissible size.
        min: usize,
        /// Requested size.
        got: usize,
    },
    /// Eigen-solver did not converge.
    NoConvergence(&'static str),
    /// Report sizes do not match.
    LevelMismatch {
        /// Levels available on the left.
        left: usize,
        /// Levels available on the right.
        right: usize,
    },
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid-parameter: {name} {reason}")
            }
            Error::Domain(what) => write!(f, "domain-error: {what}"),
            Error::Pole => write!(f, "pole-error: log_gamma argument must be > 0"),
            Error::RegimeBoundary => write!(
                f,
                "regime-boundary: beta*(m*omega)^2 - 2*m*omega + alpha = 0 excludes every branch"
            ),
            Error::InvalidBranch { branch, reason } => {
                write!(f, "invalid-branch: {branch} {reason}")
            }
            Error::NotNormalizable { condition } => {
                write!(f, "not-normalizable: {condition}")
            }
            Error::Divergent { tail_exponent } => write!(
                f,
                "divergent: momentum-square integrand tail exponent {tail_exponent:.3} <= 0 (requires xi_tilde > 1/2)"
            ),
            Error::GridMismatch => write!(f, "grid-mismatch: functions live on different grids"),
            Error::GridTooSmall { min, got } => {
                write!(f, "grid-too-small: need at least {min} points, got {got}")
            }
            Error::NoConvergence(what) => write!(f, "no-convergence: {what}"),
            Error::LevelMismatch { left, right } => {
                write!(f, "level-mismatch: {left} levels vs {right} levels")
            }
        }
    }
}

impl core::error::Error for Error {}
