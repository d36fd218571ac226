use std::fmt;

use crate::language::Var;

/// What went wrong while reading a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownConnective(String),
    ArityMismatch {
        connective: String,
        expected: usize,
        found: usize,
    },
    /// A connective of positive arity used as an atom.
    ConnectiveAsAtom {
        connective: String,
        arity: usize,
    },
    UnknownVariable(String),
    UnexpectedToken(String),
    UnexpectedEnd,
    TrailingInput,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownConnective(name) => write!(f, "unknown connective `{name}`"),
            ParseErrorKind::ArityMismatch {
                connective,
                expected,
                found,
            } => write!(
                f,
                "connective `{connective}` expects {expected} argument(s), found {found}"
            ),
            ParseErrorKind::ConnectiveAsAtom { connective, arity } => write!(
                f,
                "`{connective}` is a connective of arity {arity} and cannot stand alone"
            ),
            ParseErrorKind::UnknownVariable(name) => {
                write!(f, "`{name}` is not a variable of the language")
            }
            ParseErrorKind::UnexpectedToken(tok) => write!(f, "unexpected `{tok}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::TrailingInput => write!(f, "trailing input after formula"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at offset {position}: {kind}")]
    Parse {
        position: usize,
        kind: ParseErrorKind,
    },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("name clash: `{0}` is already in use")]
    NameClash(String),

    #[error("variable `{0}` has no value under the valuation")]
    UnboundVariable(Var),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("filter element {element} is outside the carrier 0..{carrier}")]
    FilterOutOfRange { element: usize, carrier: usize },

    #[error("value {value} is outside the carrier 0..{carrier}")]
    ValueOutOfRange { value: usize, carrier: usize },

    #[error("a matrix class must contain at least one matrix")]
    EmptyClass,

    #[error("an atlas needs at least one filter")]
    NoFilters,

    #[error("resource cap exceeded: {what} needs {requested}, limit is {limit}")]
    ResourceCap {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("fragment too small: {0}")]
    FragmentTooSmall(String),

    #[error("invalid search budget: {0}")]
    InvalidBudget(String),

    #[error("matrix file, line {line}: {message}")]
    MatrixFile { line: usize, message: String },

    #[error("variable `{0}` is not in the language")]
    NotInLanguage(Var),

    #[error("unknown matrix or atlas `{0}`")]
    UnknownName(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn cap(what: &'static str, requested: u128, limit: u128) -> Self {
        Error::ResourceCap {
            what,
            requested,
            limit,
        }
    }
}
