use thiserror::Error;

pub type Result<T> = std::result::Result<T, LmgError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LmgError {
    #[error("spin J = {two_j}/2 is half-integer; this operation needs integer J")]
    NotIntegerSpin { two_j: u32 },

    #[error("matrix exponential overflow risk: |t|·‖M‖₁ = {norm} exceeds {limit}")]
    OverflowRisk { norm: f64, limit: f64 },

    #[error("degenerate anisotropy: chi2 = {chi2} must be strictly below chi1 = {chi1}")]
    DegenerateAnisotropy { chi1: f64, chi2: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("empty spectrum")]
    EmptySpectrum,

    #[error("dimension {dim} exceeds the limit {limit} for this method")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("off-diagonal sign violation at index {index}: beta = {beta}, gamma = {gamma}")]
    SignViolation { index: usize, beta: f64, gamma: f64 },

    #[error("method unavailable: {0}")]
    MethodUnavailable(String),
}
