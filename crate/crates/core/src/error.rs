use thiserror::Error;

use crate::moves::Move;

/// A malformed card token, deal file or solution file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> ParseError {
        ParseError {
            line: None,
            message: message.into(),
        }
    }

    pub fn at(line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    pub(crate) fn with_line(mut self, line: usize) -> ParseError {
        self.line.get_or_insert(line);
        self
    }
}

/// A move that is not legal in the state it was applied to.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("illegal move `{mv}`: {reason}")]
pub struct IllegalMove {
    pub mv: Move,
    pub reason: &'static str,
}

impl IllegalMove {
    pub(crate) fn new(mv: &Move, reason: &'static str) -> IllegalMove {
        IllegalMove { mv: *mv, reason }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid deal: {0}")]
    InvalidDeal(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// A solver result that failed its own re-verification.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
