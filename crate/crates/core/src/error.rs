use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register address error: {0}")]
    Address(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("matrix is not unitary (deviation {0:e})")]
    NonUnitary(f64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NonHermitian(f64),
    #[error(
        "exact enumeration needs {needed:e} joint outcomes but the budget is {budget}; use Monte-Carlo mode"
    )]
    BudgetExceeded { needed: f64, budget: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// What went wrong while reading an SGC file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undefined wire `{0}`")]
    UndefinedWire(String),
    #[error("wire `{0}` is referenced before it is defined")]
    OutOfOrder(String),
    #[error("{0}")]
    Limit(String),
}

impl Error {
    /// True for errors caused by desk-scale limits rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_) | Error::BudgetExceeded { .. })
    }

    pub(crate) fn parse(line: usize, kind: ParseErrorKind) -> Self {
        Error::Parse { line, kind }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
