use thiserror::Error;

pub type Result<T> = std::result::Result<T, FlarlError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlarlError {
    #[error("resolution must satisfy m >= 1, got {0}")]
    InvalidResolution(i64),
    #[error("resolution mismatch: m={left} vs m={right}")]
    ResolutionMismatch { left: u32, right: u32 },
    #[error("division by the zero label L0")]
    DivisionByZeroLabel,
    #[error("division by the zero scalar")]
    DivisionByZeroScalar,
    #[error("even root of a negative label")]
    NegativeEvenRoot,
    #[error("{0}")]
    DomainError(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("subspaces do not form a direct sum of the ambient space")]
    NotDirectSum,
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("every input polynomial is zero")]
    AllZeroInputs,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquareMatrix { rows: usize, cols: usize },
    #[error("expected a {expected} matrix, got {found}")]
    WrongSize { expected: String, found: String },
    #[error("ordinary label index {index} outside 0..={top}")]
    OrdinalOutOfRange { index: i64, top: u32 },
    #[error("parse error at position {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
}

impl FlarlError {
    /// Stable variant name, used on diagnostics lines.
    pub fn name(&self) -> &'static str {
        use FlarlError::*;
        match self {
            InvalidResolution(_) => "InvalidResolution",
            ResolutionMismatch { .. } => "ResolutionMismatch",
            DivisionByZeroLabel => "DivisionByZeroLabel",
            DivisionByZeroScalar => "DivisionByZeroScalar",
            NegativeEvenRoot => "NegativeEvenRoot",
            DomainError(_) => "DomainError",
            ShapeMismatch(_) => "ShapeMismatch",
            AmbientMismatch { .. } => "AmbientMismatch",
            NotDirectSum => "NotDirectSum",
            ZeroPolynomialDivisor => "ZeroPolynomialDivisor",
            ZeroPolynomial => "ZeroPolynomial",
            AllZeroInputs => "AllZeroInputs",
            NonSquareMatrix { .. } => "NonSquareMatrix",
            WrongSize { .. } => "WrongSize",
            OrdinalOutOfRange { .. } => "OrdinalOutOfRange",
            ParseError { .. } => "ParseError",
            UnknownFunction(_) => "UnknownFunction",
        }
    }

    /// True for malformed input text, as opposed to a mathematical domain violation.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, FlarlError::ParseError { .. } | FlarlError::UnknownFunction(_))
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        FlarlError::ParseError { pos, msg: msg.into() }
    }
}
