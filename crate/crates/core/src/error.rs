use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("degenerate distribution")]
    Degenerate,

    #[error("size bias requires nonnegative nondegenerate input")]
    SizeBiasDomain,

    #[error("square bias requires a positive second moment")]
    SquareBiasDomain,

    #[error("zero bias requires mean zero (mean = {0:e})")]
    ZeroBiasMean(f64),

    /// A transform result would leave the piecewise-quadratic density class.
    #[error("result has polynomial degree {0}, above the supported maximum of 2")]
    DegreeTooHigh(usize),

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("input is not standardized (mean {mean:e}, second moment {second})")]
    NotStandardized { mean: f64, second: f64 },

    #[error("beta3 = {0} violates the Lyapounov bound beta3 >= 1")]
    Beta3BelowOne(f64),

    #[error("outside stated regime: beta3 * t = {0} is not in [0, pi]")]
    OutsideRegime(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid three-point configuration: {0}")]
    InvalidConfig(String),

    #[error("dominated region, sigma2 >= max(x^2, z^2) is excluded")]
    DominatedRegion,

    #[error("empty admissible grid")]
    EmptyGrid,
}
