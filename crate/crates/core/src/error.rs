use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: exponent {0:.3} outside the representable range")]
    Overflow(f64),

    #[error("degenerate evaluation: {0}")]
    Degenerate(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown function `{name}` at {pos}")]
    UnknownFunction { name: String, pos: usize },

    #[error("undeclared symbol `{name}` at {pos}")]
    UndeclaredSymbol { name: String, pos: usize },

    #[error("unbound symbol `{0}`")]
    Unbound(String),

    #[error("evaluation failed in term {term}, factor {factor}: {source}")]
    Eval {
        term: usize,
        factor: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("non-period shift: {0}")]
    NonPeriodShift(String),

    #[error("multiplier mismatch between terms {terms:?}: {detail}")]
    MultiplierMismatch { terms: Vec<usize>, detail: String },

    #[error("zero count is not a rational multiple of 2πi: leftover {0}")]
    IrreducibleMonomial(String),

    #[error("f vanishes on the contour near {at} (|f| = {abs:.3e})")]
    BoundaryZero {
        at: num_complex::Complex64,
        abs: f64,
    },

    #[error("sample budget of {0} exceeded")]
    BudgetExceeded(usize),

    #[error("inconsistent winding: {0}")]
    InconsistentWinding(String),

    #[error("non-finite value of f at {0}")]
    NonFinite(num_complex::Complex64),

    #[error("no admissible base after {0} attempts")]
    NoAdmissibleBase(usize),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}
