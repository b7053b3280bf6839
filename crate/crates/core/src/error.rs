use core::fmt;

/// Crate-wide error type.
///
/// Every failure mode is a named domain violation or a convergence failure;
/// callers that drive a process exit map `NonConvergence` to a distinct exit
/// code, so the distinction is part of the public contract.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was outside the stated domain of the routine.
    /// `what` names the violated precondition.
    Domain { what: &'static str },
    /// A pole or zero of an intermediate factor was hit (or approached within
    /// the guard distance), making the requested value meaningless.
    Singular { what: &'static str },
    /// An iterative scheme exhausted its refinement budget before reaching the
    /// requested tolerance; `achieved` is the last error estimate.
    NonConvergence { what: &'static str, achieved: f64 },
    /// A truncation bound certified by the caller's budget exceeds the
    /// requested tolerance; `bound` is the certified remainder.
    InsufficientTruncation { what: &'static str, bound: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what } => write!(f, "domain violation: {what}"),
            Error::Singular { what } => write!(f, "singular input: {what}"),
            Error::NonConvergence { what, achieved } => {
                write!(f, "failed to converge: {what} (reached {achieved:.3e})")
            }
            Error::InsufficientTruncation { what, bound } => {
                write!(f, "truncation bound above tolerance: {what} (bound {bound:.3e})")
            }
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
