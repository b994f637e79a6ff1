use num_complex::Complex64;
use thiserror::Error;

/// A single failed structural check on a candidate *-algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `(b_i b_j) b_k != b_i (b_j b_k)`.
    Associativity { i: usize, j: usize, k: usize, residual: f64 },
    /// `(b_i b_j)* != b_j* b_i*`.
    Involution { i: usize, j: usize, residual: f64 },
    /// `b_i** != b_i`.
    NotInvolutive { i: usize, residual: f64 },
    /// `|b_i b_j| > |b_i| |b_j|`.
    Norm { i: usize, j: usize, lhs: f64, rhs: f64 },
    /// The declared unit index does not act as a unit.
    Unit { index: usize, residual: f64 },
    /// The attached matrix realization is not a faithful *-representation.
    Realization { detail: String },
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("algebra data violates {count} invariant(s): {0:?}", count = .0.len())]
    AlgebraViolations(Vec<Violation>),
    #[error("algebra has no unit")]
    NoUnit,
    #[error("spectral radius {radius} is not below 1")]
    SpectralRadiusTooLarge { radius: f64 },
    #[error("denominator root {root} lies within {distance} of spectral point {nearest}")]
    PoleOnSpectrum { root: Complex64, nearest: Complex64, distance: f64 },
    #[error("element is not positive (most negative eigenvalue {min_eigenvalue})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("element is not invertible (smallest singular value {min_singular_value})")]
    NotInvertible { min_singular_value: f64 },
    #[error("element is not Hermitian (defect {defect})")]
    NotHermitian { defect: f64 },
    #[error("Cayley parameter {mu} must exceed the spectral radius {radius}")]
    MuTooSmall { mu: f64, radius: f64 },
    #[error("basis elements {i} and {j} do not commute (residual {residual})")]
    NotCommutative { i: usize, j: usize, residual: f64 },
    #[error("algebra is not semisimple: joint diagonalisation failed")]
    NotSemisimple,
    #[error("Gelfand transform vanishes at t = {t} (|f(t)| = {modulus})")]
    TransformVanishes { t: f64, modulus: f64 },
    #[error("functional is zero")]
    ZeroFunctional,
    #[error("functional has infinite variation")]
    InfiniteVariation,
    #[error("unit value must be at least the variation {variation}")]
    GammaTooSmall { variation: f64 },
    #[error("functional {index} is not a state")]
    NotAState { index: usize },
    #[error("function is undefined at point {label}")]
    MissingPoint { label: Complex64 },
    #[error("operator is not normal (defect {defect})")]
    NotNormal { defect: f64 },
    #[error("representation is zero")]
    ZeroRepresentation,
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector is not cyclic (orbit rank {rank} of {dim})")]
    NotCyclic { rank: usize, dim: usize },
    #[error("no separating vector found after {draws} draws")]
    NoSeparatingVector { draws: usize },
    #[error("vector support {support} exceeds truncation {truncation}")]
    SupportExceedsTruncation { support: usize, truncation: usize },
    #[error("polynomial index {n} too large for exact expansion (max {max})")]
    DegreeTooLarge { n: usize, max: usize },
}

impl Error {
    /// Stable variant name, used by report writers.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidShape(_) => "InvalidShape",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::InvalidInput(_) => "InvalidInput",
            Error::AlgebraViolations(_) => "AlgebraViolations",
            Error::NoUnit => "NoUnit",
            Error::SpectralRadiusTooLarge { .. } => "SpectralRadiusTooLarge",
            Error::PoleOnSpectrum { .. } => "PoleOnSpectrum",
            Error::NotPositive { .. } => "NotPositive",
            Error::NotInvertible { .. } => "NotInvertible",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::MuTooSmall { .. } => "MuTooSmall",
            Error::NotCommutative { .. } => "NotCommutative",
            Error::NotSemisimple => "NotSemisimple",
            Error::TransformVanishes { .. } => "TransformVanishes",
            Error::ZeroFunctional => "ZeroFunctional",
            Error::InfiniteVariation => "InfiniteVariation",
            Error::GammaTooSmall { .. } => "GammaTooSmall",
            Error::NotAState { .. } => "NotAState",
            Error::MissingPoint { .. } => "MissingPoint",
            Error::NotNormal { .. } => "NotNormal",
            Error::ZeroRepresentation => "ZeroRepresentation",
            Error::ZeroVector => "ZeroVector",
            Error::NotCyclic { .. } => "NotCyclic",
            Error::NoSeparatingVector { .. } => "NoSeparatingVector",
            Error::SupportExceedsTruncation { .. } => "SupportExceedsTruncation",
            Error::DegreeTooLarge { .. } => "DegreeTooLarge",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
