use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("total curvature {total:e} is too close to zero to normalize")]
    ZeroTotalCurvature { total: f64 },

    #[error("curvature profile is identically zero")]
    IdenticallyZero,

    #[error("curvature needs at least two local maxima and two local minima (found {maxima} maxima, {minima} minima)")]
    HypothesisViolated { maxima: usize, minima: usize },

    #[error("neither the curvature nor its negative admits values 0 < a < b at four interleaved points")]
    NoPositiveWindow,

    #[error("preliminary diffeomorphism construction failed: {0}")]
    ConstructionFailed(String),

    #[error("curve has {found} samples, at least {needed} are required")]
    TooFewSamples { found: usize, needed: usize },

    #[error("configuration is not reduced (first point must be 1)")]
    NotReduced,

    #[error("loop touches the core (|E| = {magnitude:e})")]
    LoopTouchesCore { magnitude: f64 },

    #[error("geodesics are numerically degenerate (intersection angle {angle:e} rad)")]
    NumericallyDegenerate { angle: f64 },

    #[error("loop passes through the origin at sample {index}")]
    OriginOnLoop { index: usize },

    #[error("loop sampling too coarse: angular step {step:.3} rad at sample {index}")]
    InsufficientDensity { index: usize, step: f64 },

    #[error("error loop at radius {radius} has winding number 0")]
    NoWindingAtRadius { radius: f64 },

    #[error("zero polishing did not converge (best residual {residual:e} at beta = {beta_re} + {beta_im}i)")]
    PolishDiverged {
        beta_re: f64,
        beta_im: f64,
        residual: f64,
    },

    #[error("synthesis failed after {rounds} rounds: {reason}")]
    SynthesisFailed { rounds: usize, reason: String },

    #[error("curvature is constant; vertices are undefined for a circle")]
    ConstantCurvature,

    #[error("curve is not closed (|E| = {gap:e})")]
    NotClosed { gap: f64 },

    #[error("curve is not simple (segments {0} and {1} intersect)")]
    NotSimple(usize, usize),

    #[error("curve does not touch its enclosing circle within the contact band")]
    NoContact,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
