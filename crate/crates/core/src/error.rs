use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid base q = {0}: need |q| > 0 and |q| != 1")]
    InvalidQ(Complex64),
    #[error("q = {q} is within {guard:e} of a root of unity of order {order}")]
    NearRootOfUnity { q: Complex64, order: usize, guard: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series division by a divisor with zero constant term")]
    DivisorSingular,
    #[error("|z| = {modulus} lies outside the certified radius {radius}")]
    OutsideSafeRadius { modulus: f64, radius: f64 },
    #[error("the difference quotient is undefined at the origin; use the series path")]
    OriginSingular,
    #[error("point {0} lies outside the sampler domain")]
    OutsideDomain(Complex64),
    #[error("sample values along the q-orbit do not decay: {0}")]
    NonconvergentSample(String),
    #[error("denominator Pochhammer symbol vanishes at order {order}")]
    DenominatorPochhammerZero { order: usize },
    #[error("coefficient has a pole at the origin")]
    CoefficientPoleAtOrigin,
    #[error("bracket product at order {order} underflows the root-of-unity guard")]
    BracketUnderflow { order: usize },
    #[error("circle of radius {radius} passes through a pole at {pole}")]
    PoleOnCircle { radius: f64, pole: Complex64 },
    #[error("target {0} is not supported for this model kind")]
    TargetUnsupported(String),
    #[error("polynomial root finding failed: {0}")]
    RootFindingFailed(String),
    #[error("roots near {0} cluster ambiguously; multiplicity cannot be resolved")]
    MultiplicityAmbiguous(Complex64),
    #[error("rational function is not reduced: numerator and denominator share a root near {0}")]
    NotCoprime(Complex64),
    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),
    #[error("truncation too short: central index {nu} is not below half the order {order}")]
    TruncationTooShort { nu: usize, order: usize },
    #[error("maximum modulus on |z| = {0} is attained at inequivalent points")]
    MaxModulusAmbiguous(f64),
    #[error("degenerate growth: {0}")]
    DegenerateGrowth(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
