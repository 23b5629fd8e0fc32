use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series must contain at least one sample")]
    EmptySeries,
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("expected a non-negative value, got {0}")]
    NegativeValue(f64),
    #[error("circle positions must lie in [0, 1], got {0}")]
    PositionOutOfRange(f64),
    #[error("support must be non-empty")]
    EmptySupport,
    #[error("support indices must be distinct, strictly increasing and within [1, p]")]
    InvalidSupport,
    #[error("support has {support} indices but {amplitudes} amplitudes")]
    AmplitudeCountMismatch { support: usize, amplitudes: usize },
    #[error("minimum separation {min_sep} is infeasible for {s} atoms (needs s * min_sep < 1 and s <= p)")]
    InfeasibleSeparation { s: usize, min_sep: f64 },
    #[error("support sampler failed to meet the separation condition within {attempts} attempts")]
    SupportSamplerExhausted { attempts: usize },
    #[error("signal strength parameter r must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("grid size p must be at least 2, got {0}")]
    GridTooSmall(u64),
    #[error("transform length q must be at least 1")]
    ZeroTransformLength,
    #[error("transform length q = {0} is too short for this statistic")]
    TransformTooShort(usize),
    #[error("series length must be at least 2 to select q, got {0}")]
    SeriesTooShort(usize),
    #[error("q-mode `full` requires the grid size p")]
    MissingGridSize,
    #[error("threshold t = {0} is outside the domain of the exceedance statistic")]
    ThresholdOutOfDomain(f64),
    #[error("invalid threshold interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("higher criticism statistic is undefined: no ordered p-value lies in [1/q, 1/2)")]
    UndefinedStatistic,
    #[error("sigma estimate is zero: the series is identically zero")]
    ZeroSeries,
    #[error("complexification requires an even-length input, got {0}")]
    OddLength(usize),
    #[error("empty null sample set")]
    EmptyNullSamples,
    #[error("level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
