use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum QhatmError {
    /// Gamma evaluated at a nonpositive argument.
    GammaDomain { argument: f64 },
    CatalogMismatch,
    UnknownFactor(usize),
    NonFiniteCoefficient(f64),
    /// A Caputo derivative produced a negative power on a nonzero term.
    ExponentUnderflow { exponent: f64 },
    NegativeExponent { exponent: f64 },
    DimensionMismatch { expected: usize, found: usize },
    MissingCoordinate(String),
    UnknownProblem(String),
    InvalidSpec(String),
    InvalidParams(String),
    /// γ outside the problem's admissible range `(low, high]`.
    OrderOutOfRange { gamma: f64, low: f64, high: f64 },
    NoExactSolution(String),
    ExactNotValid { gamma: f64, required: f64 },
    UnsupportedExactForm(String),
    InvalidGrid(String),
    /// Series evaluated at a negative (or NaN) evolution value.
    NegativeEvolution { value: f64 },
}

impl fmt::Display for QhatmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QhatmError::GammaDomain { argument } => {
                write!(f, "gamma function is undefined here: argument {argument} <= 0")
            }
            QhatmError::CatalogMismatch => f.write_str("series are built over different factor catalogs"),
            QhatmError::UnknownFactor(id) => write!(f, "factor index {id} is not in the catalog"),
            QhatmError::NonFiniteCoefficient(c) => write!(f, "non-finite coefficient {c}"),
            QhatmError::ExponentUnderflow { exponent } => {
                write!(f, "caputo derivative left a negative power {exponent} on a nonzero term")
            }
            QhatmError::NegativeExponent { exponent } => {
                write!(f, "operator requires nonnegative exponents, found {exponent}")
            }
            QhatmError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            QhatmError::MissingCoordinate(name) => write!(f, "missing coordinate `{name}`"),
            QhatmError::UnknownProblem(name) => write!(f, "unknown problem `{name}`"),
            QhatmError::InvalidSpec(msg) => write!(f, "invalid problem spec: {msg}"),
            QhatmError::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            QhatmError::OrderOutOfRange { gamma, low, high } => {
                write!(f, "fractional order {gamma} is outside the admissible range ({low}, {high}]")
            }
            QhatmError::NoExactSolution(name) => write!(f, "problem `{name}` has no exact solution attached"),
            QhatmError::ExactNotValid { gamma, required } => {
                write!(f, "exact solution only holds at order {required}, got {gamma}")
            }
            QhatmError::UnsupportedExactForm(msg) => write!(f, "unsupported exact form: {msg}"),
            QhatmError::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            QhatmError::NegativeEvolution { value } => {
                write!(f, "series are only defined for evolution values >= 0, got {value}")
            }
        }
    }
}

impl core::error::Error for QhatmError {}
