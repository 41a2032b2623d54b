use num_rational::Rational64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ambient dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("rate {index} is zero; diagonal fields need nonzero eigenvalues")]
    ZeroRate { index: usize },

    #[error("time unit must have modulus 1 (got {modulus})")]
    TimeUnitNotUnimodular { modulus: f64 },

    #[error("base point component {index} has modulus {modulus} >= 1")]
    OutsidePolydisk { index: usize, modulus: f64 },

    #[error("spectrum is mixed: eigenvalue ratios are not all positive")]
    MixedSpectrum,

    #[error("field is not in canonical orientation (time unit 1, positive rates); normalize it first")]
    NotNormalized,

    #[error("level bound must be positive (got {0})")]
    NonPositiveLevelBound(Rational64),

    #[error("invalid exponent pair (mu = {mu}, nu = {nu}): both must be non-negative")]
    NegativeExponent { mu: Rational64, nu: Rational64 },

    #[error("level index {index} out of range ({len} levels stored)")]
    LevelIndex { index: usize, len: usize },

    #[error("level grid must start at 0 and be strictly increasing")]
    BadLevelGrid,

    #[error(
        "term with nu = {nu} > 0 at level {level} (mu = {mu}): a holomorphic function cannot have this expansion"
    )]
    NotHolomorphic {
        level: Rational64,
        mu: Rational64,
        nu: Rational64,
    },

    #[error("oracle returned a non-finite value at {point}")]
    NonFiniteSample { point: String },

    #[error("residual grew from {previous:e} to {current:e} after level {level}: oracle is inconsistent with the level grid")]
    ResidualGrowth {
        level: Rational64,
        previous: f64,
        current: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("curve leaves the unit polydisk at zeta = {zeta} (component {index})")]
    CurveLeavesPolydisk { zeta: String, index: usize },

    #[error("no admissible branch exponent: sector arguments [{theta_min}, {theta_max}]")]
    NoBranchExponent { theta_min: f64, theta_max: f64 },

    #[error("level polynomial at {level} has sup {sup:e} exceeding bound {bound:e}")]
    BoundViolation {
        level: Rational64,
        sup: f64,
        bound: f64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
