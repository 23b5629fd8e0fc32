//! Detection of sparse periodic components in complex-valued time series by
//! higher criticism over an over-sampled periodogram.
//!
//! The observation model is `y = X beta + z` where the columns of `X` are
//! complex sinusoids at `p` equispaced frequencies with `p` far larger than
//! the sample count `N`, `beta` is sparse, and `z` is circularly-symmetric
//! complex white noise. The test evaluates the spectrum at `q` equispaced
//! frequencies (over-sampling by a logarithmic factor), standardizes the
//! exceedance counts of the intensities, and rejects when the supremum
//! statistic clears a threshold; thresholds come from theory or from Monte
//! Carlo calibration.
//!
//! Modules:
//!
//! - [`math`]: complex-Gaussian sampling, its tail law, circle distances.
//! - [`signal`]: sparse-spectrum alternatives, synthesis, mean spectra.
//! - [`periodogram`]: the over-sampled transform and its null correlation
//!   structure.
//! - [`hc`]: the higher-criticism statistics and the test decision.
//! - [`boundary`]: closed-form detection-boundary curves.
//! - [`harness`]: Monte Carlo calibration, power estimation, q comparison.

pub mod boundary;
pub mod error;
pub mod harness;
pub mod hc;
pub mod math;
mod phase;
pub mod periodogram;
pub mod rng;
pub mod signal;

pub use error::{Error, Result};
pub use harness::{
    calibrate_null, compare_q_modes, empirical_pvalue, estimate_power, Calibration,
    ExperimentConfig, Histogram, PowerRow, PowerTable,
};
pub use hc::{
    estimate_sigma, hc_at, hc_star_interval, hc_star_pvalues, ophc_test, theory_interval,
    theory_threshold, HcForm, HcResult, HcSup, SigmaMode,
};
pub use math::{circle_distance, sample_complex_normal, tail_prob, ComplexSeries};
pub use periodogram::{oversampled_transform, q_rule, Periodogram, QMode};
pub use rng::RngHandle;
pub use signal::{
    amplitude_from_r, complexify, make_alternative, mean_spectrum, min_separation, sample_support,
    synthesize, AlternativeParams, PhaseMode, SparseSpectrum,
};
