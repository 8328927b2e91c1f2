use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure kinds. The short codes returned by [`Error::code`] are stable and
/// appear in reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map is not diagonalizable with eigenvalues among the requested powers of q{0}")]
    NotWeightDiagonalizable(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("not simply connected: {0}")]
    NotSimplyConnected(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("lift obstructed: {0}")]
    LiftObstructed(String),
    #[error("eigenvalue weight below degree: {0}")]
    WeightBelowDegree(String),
    #[error("splitting invariant failed: {0}")]
    SplittingInvariantFailed(String),
    #[error("Massey product undefined: {0}")]
    PreconditionNotExact(String),
    #[error("truncation window exceeded: {0}")]
    TruncationExceeded(String),
    #[error("operad hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("not a grading lift: {0}")]
    NotGradingLift(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "INVALID_INPUT",
            Error::NotWeightDiagonalizable(_) => "NOT_WEIGHT_DIAGONALIZABLE",
            Error::NotChainMap(_) => "NOT_CHAIN_MAP",
            Error::NotSimplyConnected(_) => "NOT_SIMPLY_CONNECTED",
            Error::TruncationTooSmall(_) => "TRUNCATION_TOO_SMALL",
            Error::LiftObstructed(_) => "LIFT_OBSTRUCTED",
            Error::WeightBelowDegree(_) => "WEIGHT_BELOW_DEGREE",
            Error::SplittingInvariantFailed(_) => "SPLITTING_INVARIANT_FAILED",
            Error::PreconditionNotExact(_) => "PRECONDITION_NOT_EXACT",
            Error::TruncationExceeded(_) => "TRUNCATION_EXCEEDED",
            Error::HypothesisFailed(_) => "HYPOTHESIS_FAILED",
            Error::NotGradingLift(_) => "NOT_GRADING_LIFT",
        }
    }
}
