use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("operation undefined on the zero element: {0}")]
    ZeroElement(&'static str),

    #[error("coefficient {coefficient} has negative {prime}-adic valuation")]
    NegativeValuation { prime: u64, coefficient: String },

    #[error("exponent vector {0:?} is divisible by p, so it does not represent an element of Gamma \\ Gamma^p")]
    NotPrimitiveDirection(Vec<i64>),

    #[error("invalid evaluation point: {0}")]
    InvalidEvaluationPoint(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected: {0}")]
    Disconnected(String),

    #[error("graph has {vertices} vertices; the limit for this operation is {limit}")]
    TooLarge { vertices: usize, limit: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("unsupported character group: {0}")]
    UnsupportedGroup(String),

    #[error("identity violated: {identity}: left = {left}, right = {right}")]
    Mismatch {
        identity: String,
        left: String,
        right: String,
    },

    #[error("characteristic element vanishes at layer {layer}, root-of-unity exponents {exponents:?}")]
    Vanishing { layer: u32, exponents: Vec<u64> },

    #[error("{value} is an eigenvalue of the transition matrix at layer {layer}")]
    EigenvalueHit { layer: u32, value: String },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("growth fit is singular: {0}")]
    SingularFit(String),
}

impl Error {
    pub(crate) fn mismatch(
        identity: impl Into<String>,
        left: impl std::fmt::Display,
        right: impl std::fmt::Display,
    ) -> Self {
        Error::Mismatch {
            identity: identity.into(),
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    /// True for failures of an internal identity between two computation
    /// routes (as opposed to bad input).
    pub fn is_verification_failure(&self) -> bool {
        matches!(self, Error::Mismatch { .. })
    }
}
