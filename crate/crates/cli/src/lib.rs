//! Command-line companion to the numerical kernels: configuration handling,
//! per-module verification suites, single-quantity evaluation records, and
//! sweep tables.
//!
//! Everything here is plumbing around `regl4-core`; no mathematics is
//! re-derived in this crate.  Output is deterministic byte-for-byte for a
//! fixed configuration: floats are printed in shortest round-trip form, JSON
//! keys are sorted, and sweep rows are emitted in input order regardless of
//! how the worker pool schedules them.

pub mod config;
pub mod eval;
pub mod format;
pub mod sweep;
pub mod verify;

/// Errors at the artifact boundary, each mapped to a process exit code:
/// 1 for a failed verification, 2 for configuration or domain problems,
/// 3 for numerical non-convergence.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, or arguments outside a routine's domain.
    Usage(String),
    /// A verification suite ran and at least one check failed.
    Check(String),
    /// An iterative kernel gave up before reaching its tolerance.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Check(m) | CliError::Numeric(m) => m,
        }
    }
}

/// Maps kernel errors onto the exit-code contract: domain and singularity
/// problems are configuration mistakes, convergence problems are numerical.
pub fn from_core(e: regl4_core::Error) -> CliError {
    match e {
        regl4_core::Error::Domain { .. } | regl4_core::Error::Singular { .. } => {
            CliError::Usage(e.to_string())
        }
        regl4_core::Error::NonConvergence { .. }
        | regl4_core::Error::InsufficientTruncation { .. } => CliError::Numeric(e.to_string()),
    }
}
