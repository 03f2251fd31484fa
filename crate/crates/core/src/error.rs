use alloc::string::String;
use core::fmt;

use crate::parser::ParseError;
use crate::value::TruthValue;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Parse(ParseError),
    /// A literal that is not an exact rational (`p/q`, or an integer).
    InvalidRational(String),
    /// A rational outside `[0, 1]` where a truth value was required.
    OutOfUnitInterval(String),
    InvalidKSet(String),
    MissingAssignment(String),
    NotPropositional,
    UnknownSymbol(String),
    ArityMismatch { symbol: String, expected: usize, found: usize },
    UnboundVariable(String),
    /// The operation is not defined for this algebra or semantics.
    Unsupported(String),
    /// A precondition on the arguments does not hold.
    Precondition(String),
    Budget { what: &'static str, required: u128, limit: u128 },
    InvalidStructure(String),
    InvalidFilter(String),
    NoUniqueLimit,
    ValueOutsideSet(TruthValue),
    SignatureMismatch(String),
    FactoryNonModel { subset: String, sentence: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "{e}"),
            Error::InvalidRational(s) => write!(f, "invalid rational literal `{s}` (expected p/q or an integer)"),
            Error::OutOfUnitInterval(s) => write!(f, "value {s} is outside [0,1]"),
            Error::InvalidKSet(s) => write!(f, "invalid K-set: {s}"),
            Error::MissingAssignment(a) => write!(f, "no value assigned to atom `{a}`"),
            Error::NotPropositional => f.write_str("formula is not propositional"),
            Error::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            Error::ArityMismatch { symbol, expected, found } => {
                write!(f, "`{symbol}` has arity {expected} but was applied to {found} arguments")
            }
            Error::UnboundVariable(v) => write!(f, "variable `{v}` is unbound"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
            Error::Precondition(s) => write!(f, "precondition violated: {s}"),
            Error::Budget { what, required, limit } => {
                write!(f, "{what} needs {required} but the budget is {limit}")
            }
            Error::InvalidStructure(s) => write!(f, "invalid structure: {s}"),
            Error::InvalidFilter(s) => write!(f, "invalid filter: {s}"),
            Error::NoUniqueLimit => f.write_str("family has no unique limit along the filter"),
            Error::ValueOutsideSet(v) => write!(f, "value {v} lies outside the declared truth-value set"),
            Error::SignatureMismatch(s) => write!(f, "signature mismatch: {s}"),
            Error::FactoryNonModel { subset, sentence } => {
                write!(f, "structure supplied for {subset} does not model `{sentence}`")
            }
        }
    }
}

impl core::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
