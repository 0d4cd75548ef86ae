use num_complex::Complex64;
use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EqgError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("theta series did not converge within {terms} terms at z = {z}")]
    TruncationOverflow { z: Complex64, terms: usize },
    #[error("pole: {what} has |theta| = {magnitude:.3e} below the admissible margin")]
    Pole { what: String, magnitude: f64 },
    #[error("sampling exhausted after {retries} rejections for point {index}")]
    SamplingExhausted { index: usize, retries: usize },
    #[error("resonance: {0}")]
    Resonance(String),
    #[error("determinant is numerically singular at the evaluation point")]
    DeterminantSingular,
    #[error("eta must equal 1/(2N) = {expected} but is {got}")]
    WrongEta { expected: f64, got: Complex64 },
    #[error("sign-twisted coefficients are not N-periodic (residual {residual:.3e})")]
    Periodicity { residual: f64 },
    #[error("words have different net lambda shifts ({left} vs {right})")]
    ShiftMismatch { left: Complex64, right: Complex64 },
    #[error("candidate vector is not singular (c-residual {residual:.3e})")]
    NotSingular { residual: f64 },
    #[error("module has no weight-zero vectors")]
    EmptyWeightZero,
    #[error("f_{{{k},{p}}} vanishes: the tensor product is reducible here")]
    VanishingF { k: usize, p: usize },
    #[error("{0}")]
    Mismatch(String),
    #[error("configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, EqgError>;
