//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by ring, series, and Tate-window operations.
///
/// The CLI maps these onto its exit-code contract: `Parse`, `RingMismatch`,
/// `UnknownGenerator` and `Invalid` are usage errors (exit 2), while
/// `Precision` indicates an insufficient truncation order or t-window
/// (exit 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("precision: {0}")]
    Precision(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
