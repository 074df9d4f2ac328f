// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across model construction, solving,
/// inversion, fitting and file handling.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or setter was handed a value outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A bath occupation vector does not match the number of ladder
    /// transitions it is applied to.
    #[error("bath occupation has {got} entries but the ladder has {expected} transitions")]
    BathSizeMismatch { expected: usize, got: usize },

    /// The steady-state linear system could not be solved.
    #[error("steady-state system is singular: {0}")]
    SingularSteadyState(String),

    /// The steady-state solution violated a physicality check.
    #[error("steady-state solution failed validation: {0}")]
    InvalidSteadyState(String),

    /// An iterative routine ran out of iterations before meeting its
    /// tolerance.
    #[error("failed to converge: {0}")]
    NonConvergence(String),

    /// A requested value lies outside the physically meaningful range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A scalar root finder was called without a sign change on the
    /// bracket.
    #[error("root not bracketed: {0}")]
    NotBracketed(String),

    /// A reference trace is too small in magnitude to divide by.
    #[error("reference trace magnitude below threshold at {count} points (first at index {first})")]
    DegenerateReference { count: usize, first: usize },

    /// A data file did not match the expected format.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
