use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| exceeds tolerance")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    #[error("degenerate covariates: spread {sigma_n} is numerically zero")]
    DegenerateCovariates { sigma_n: f64 },

    #[error("basis with user-supplied columns cannot be evaluated at complex point {re}{im:+}i")]
    UnsupportedComplexBasis { re: f64, im: f64 },

    #[error("bordered system is singular at pivot {0}")]
    SingularSystem(usize),

    #[error("invalid correlation matrix: {0}")]
    InvalidCorrelation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for failures that come from the mathematics (degenerate designs,
    /// singular systems) rather than from malformed input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::DegenerateDesign(_)
                | Error::DegenerateCovariates { .. }
                | Error::SingularSystem(_)
        )
    }
}
