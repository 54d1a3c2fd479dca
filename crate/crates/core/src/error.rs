//! Error taxonomy shared by the whole crate.
//!
//! Three failure classes matter to callers: domain errors (bad input),
//! resource errors (an enumeration would exceed the word cap) and numeric
//! errors (an iteration failed to converge or produced non-finite values).
//! The CLI maps each class to its own exit code.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A letter falls outside `{-l..-1, 1..l}` for the ambient rank.
    #[error("letter {letter} at position {index} is outside the alphabet for l={l}")]
    LetterOutOfRange { letter: i64, index: usize, l: usize },

    /// Two operands were built over free groups of different rank.
    #[error("rank mismatch: l={lhs} vs l={rhs}")]
    RankMismatch { lhs: usize, rhs: usize },

    /// An enumeration would materialize more words than the configured cap.
    /// `needed` is kept as a decimal string because sphere sizes overflow
    /// any machine integer long before they overflow patience.
    #[error("enumeration cap exceeded: {needed} words needed, cap is {cap}")]
    CapExceeded { needed: String, cap: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
