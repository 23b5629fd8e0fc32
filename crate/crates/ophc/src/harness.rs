//! Monte Carlo engine: null calibration, power estimation, and the
//! comparison of transform lengths.
//!
//! Every trial owns a dedicated random stream keyed by its index, so results
//! are independent of execution order and of the degree of parallelism:
//!
//! - calibration trial `t` uses stream index `t`;
//! - fresh-null (size-control) batches use `FRESH_NULL_BASE + t`;
//! - power trial `t` uses `POWER_BASE | t`, with per-trial sub-streams for
//!   the support/phase draw and the noise.
//!
//! The three ranges are disjoint, so calibration never shares noise with
//! the runs it thresholds. Power trials deliberately share their draws
//! across `(q, sigma)` cells: every cell tests the same per-trial
//! alternatives, which pairs the cells and keeps cross-cell power
//! comparisons free of independent-sampling noise.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hc::{hc_star_interval, hc_star_pvalues, ophc_test, theory_interval, HcForm, SigmaMode};
use crate::math::sample_complex_normal;
use crate::periodogram::{oversampled_transform, q_rule, QMode};
use crate::rng::RngHandle;
use crate::signal::{make_alternative, synthesize, AlternativeParams};

/// Stream-index base for fresh null batches.
pub const FRESH_NULL_BASE: u64 = 1 << 62;
/// Stream-index base for power trials.
pub const POWER_BASE: u64 = 1 << 63;

/// Full description of one Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub p: u64,
    pub n: usize,
    pub s: usize,
    pub r: f64,
    pub q_mode: QMode,
    pub sigma_mode: SigmaMode,
    pub statistic_form: HcForm,
    pub trials: usize,
    pub level: f64,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    /// The reference simulation setup: `p = 10^6`, `N = 1000`, `s = 20`,
    /// `r = 0.3`, `q = 2N floor(ln N + 1) = 14000`, known unit noise,
    /// p-value form, 1000 trials at level 0.05.
    fn default() -> Self {
        Self {
            p: 1_000_000,
            n: 1000,
            s: 20,
            r: 0.3,
            q_mode: QMode::Simulation,
            sigma_mode: SigmaMode::Known(1.0),
            statistic_form: HcForm::PValue,
            trials: 1000,
            level: 0.05,
            master_seed: 271_828,
        }
    }
}

impl ExperimentConfig {
    /// Transform length implied by the q-mode.
    pub fn q(&self) -> Result<usize> {
        q_rule(self.n, self.q_mode, Some(self.p))
    }

    fn validate(&self) -> Result<()> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidLevel(self.level));
        }
        if self.trials == 0 {
            return Err(Error::EmptyNullSamples);
        }
        Ok(())
    }
}

/// HC* of one unit-noise null series under the given form.
fn null_hc_star(n: usize, q: usize, form: HcForm, handle: RngHandle) -> Result<f64> {
    let y = sample_complex_normal(n, 1.0, handle)?;
    let pg = oversampled_transform(&y, q)?;
    let sup = match form {
        HcForm::PValue => hc_star_pvalues(&pg)?,
        HcForm::Interval => {
            let (a, b) = theory_interval(n)?;
            hc_star_interval(&pg, a, b)?
        }
    };
    Ok(sup.hc_star)
}

/// HC* for `trials` null series; trial `t` uses stream `stream_base + t`.
/// An undefined statistic in any trial aborts the batch with its error.
pub fn null_hc_batch(
    n: usize,
    q: usize,
    form: HcForm,
    trials: usize,
    master_seed: u64,
    stream_base: u64,
) -> Result<Vec<f64>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| null_hc_star(n, q, form, RngHandle::new(master_seed, stream_base + t)))
        .collect()
}

/// Upper `(1 - level)` empirical quantile: the `ceil((1-level) B)`-th order
/// statistic of the samples.
pub fn empirical_upper_quantile(samples: &[f64], level: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyNullSamples);
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let b = sorted.len();
    let k = (((1.0 - level) * b as f64).ceil() as usize).clamp(1, b);
    Ok(sorted[k - 1])
}

/// A calibrated null distribution for one `(N, q, form)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub n: usize,
    pub q: usize,
    pub form: HcForm,
    pub level: f64,
    pub trials: usize,
    pub master_seed: u64,
    /// `(1 - level)` empirical quantile of the null HC* samples.
    pub threshold: f64,
    /// Per-trial null HC* values, in trial order.
    pub samples: Vec<f64>,
}

/// Simulates `trials` unit-noise null series, computes HC* per trial, and
/// returns the empirical `(1 - level)` quantile plus all samples.
pub fn calibrate_null(
    n: usize,
    q: usize,
    form: HcForm,
    trials: usize,
    level: f64,
    master_seed: u64,
) -> Result<Calibration> {
    if trials == 0 {
        return Err(Error::EmptyNullSamples);
    }
    let samples = null_hc_batch(n, q, form, trials, master_seed, 0)?;
    let threshold = empirical_upper_quantile(&samples, level)?;
    Ok(Calibration {
        n,
        q,
        form,
        level,
        trials,
        master_seed,
        threshold,
        samples,
    })
}

/// Rejection rate of a fresh batch of null series against a fixed
/// threshold; the batch shares no streams with [`calibrate_null`].
pub fn fresh_null_rejection_rate(
    n: usize,
    q: usize,
    form: HcForm,
    threshold: f64,
    trials: usize,
    master_seed: u64,
) -> Result<f64> {
    let samples = null_hc_batch(n, q, form, trials, master_seed, FRESH_NULL_BASE)?;
    Ok(samples.iter().filter(|&&s| s > threshold).count() as f64 / trials as f64)
}

/// Add-one Monte Carlo p-value: `(1 + #{null >= observed}) / (B + 1)`.
pub fn empirical_pvalue(observed: f64, null_samples: &[f64]) -> Result<f64> {
    if null_samples.is_empty() {
        return Err(Error::EmptyNullSamples);
    }
    let count = null_samples.iter().filter(|&&s| s >= observed).count();
    Ok((1 + count) as f64 / (null_samples.len() + 1) as f64)
}

/// One row of the power table.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub q: usize,
    pub q_mode: QMode,
    pub sigma_mode: SigmaMode,
    pub trials: usize,
    pub rejections: usize,
    pub power: f64,
    pub threshold: f64,
}

/// Estimates power against a calibrated threshold: each trial draws a fresh
/// alternative (support and phases redrawn), synthesizes the observation,
/// and runs the full test. Trial draws depend only on `(master_seed, t)`,
/// never on the cell, so different `(q, sigma)` cells of one study face
/// identical alternatives.
pub fn estimate_power(config: &ExperimentConfig, threshold: f64) -> Result<PowerRow> {
    config.validate()?;
    let q = config.q()?;
    let params = AlternativeParams::new(config.p, config.n, config.s, config.r)?;
    // The generator's true noise scale matches the scale the test assumes
    // known; the estimated mode generates at unit scale.
    let sigma_true = match config.sigma_mode {
        SigmaMode::Known(s) => s,
        SigmaMode::Estimated => 1.0,
    };
    let rejections = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| -> Result<usize> {
            let handle = RngHandle::new(config.master_seed, POWER_BASE | t);
            let spectrum = make_alternative(&params, handle.substream(0))?;
            let y = synthesize(&spectrum, config.n, sigma_true, handle.substream(1))?;
            let outcome = ophc_test(&y, q, config.sigma_mode, config.statistic_form, threshold)?;
            Ok(outcome.reject as usize)
        })
        .try_reduce(|| 0usize, |a, b| Ok(a + b))?;
    Ok(PowerRow {
        q,
        q_mode: config.q_mode,
        sigma_mode: config.sigma_mode,
        trials: config.trials,
        rejections,
        power: rejections as f64 / config.trials as f64,
        threshold,
    })
}

/// The alternative spectrum drawn by power trial `t`; re-derivable because
/// trials are keyed by index and shared across cells. Useful for logging
/// and for replaying a single trial.
pub fn power_trial_spectrum(
    config: &ExperimentConfig,
    trial: u64,
) -> Result<crate::signal::SparseSpectrum> {
    let params = AlternativeParams::new(config.p, config.n, config.s, config.r)?;
    let handle = RngHandle::new(config.master_seed, POWER_BASE | trial);
    make_alternative(&params, handle.substream(0))
}

/// Equal-width histogram; bin edges are part of the output.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` edges, ascending.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

pub fn histogram(samples: &[f64], bins: usize) -> Result<Histogram> {
    if samples.is_empty() || bins == 0 {
        return Err(Error::EmptyNullSamples);
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let edges = (0..=bins).map(|b| lo + width * b as f64).collect();
    let mut counts = vec![0u64; bins];
    for &x in samples {
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Default histogram resolution for null-distribution exports.
pub const HISTOGRAM_BINS: usize = 50;

/// Null distribution attached to one q cell of a power table.
#[derive(Debug, Clone, PartialEq)]
pub struct NullDistribution {
    pub q: usize,
    pub q_mode: QMode,
    pub threshold: f64,
    pub samples: Vec<f64>,
}

/// Power rows for every `(q, sigma)` cell plus the per-q null samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
    pub nulls: Vec<NullDistribution>,
}

/// The q modes compared in the reference study.
pub const COMPARISON_Q_MODES: [QMode; 3] = [QMode::Simulation, QMode::Standard, QMode::Full];

/// Runs calibration plus power estimation for each requested q mode under
/// both known and estimated noise scale; rows appear in
/// `(q_mode) x (known, estimated)` order.
pub fn compare_q_modes(base: &ExperimentConfig, q_modes: &[QMode]) -> Result<PowerTable> {
    base.validate()?;
    let known_sigma = match base.sigma_mode {
        SigmaMode::Known(s) => s,
        SigmaMode::Estimated => 1.0,
    };
    let mut rows = Vec::new();
    let mut nulls = Vec::new();
    for &q_mode in q_modes {
        let q = q_rule(base.n, q_mode, Some(base.p))?;
        let calibration = calibrate_null(
            base.n,
            q,
            base.statistic_form,
            base.trials,
            base.level,
            base.master_seed,
        )?;
        for sigma_mode in [SigmaMode::Known(known_sigma), SigmaMode::Estimated] {
            let cell = ExperimentConfig {
                q_mode,
                sigma_mode,
                ..base.clone()
            };
            rows.push(estimate_power(&cell, calibration.threshold)?);
        }
        nulls.push(NullDistribution {
            q,
            q_mode,
            threshold: calibration.threshold,
            samples: calibration.samples,
        });
    }
    Ok(PowerTable { rows, nulls })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_is_the_kth_order_statistic() {
        let samples: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        let thr = empirical_upper_quantile(&samples, 0.05).unwrap();
        assert_eq!(thr, 950.0);
        let above = samples.iter().filter(|&&s| s > thr).count();
        assert_eq!(above, 50);
        assert!(empirical_upper_quantile(&[], 0.05).is_err());
        assert!(empirical_upper_quantile(&[1.0], 1.5).is_err());
    }

    #[test]
    fn empirical_pvalue_examples() {
        let nulls: Vec<f64> = (1..=999).map(|k| k as f64).collect();
        assert!((empirical_pvalue(1e9, &nulls).unwrap() - 0.001).abs() < 1e-15);
        assert_eq!(empirical_pvalue(-1.0, &nulls).unwrap(), 1.0);
        let mid = empirical_pvalue(500.0, &nulls).unwrap();
        assert!((mid - 0.501).abs() < 1e-12);
        assert!(empirical_pvalue(1.0, &[]).is_err());
    }

    #[test]
    fn calibration_is_deterministic_and_batch_matches_serial() {
        let a = calibrate_null(64, 256, HcForm::PValue, 50, 0.05, 99).unwrap();
        let b = calibrate_null(64, 256, HcForm::PValue, 50, 0.05, 99).unwrap();
        assert_eq!(a, b);
        for (t, &sample) in a.samples.iter().enumerate() {
            let serial = null_hc_star(
                64,
                256,
                HcForm::PValue,
                RngHandle::new(99, t as u64),
            )
            .unwrap();
            assert_eq!(sample, serial);
        }
    }

    #[test]
    fn fresh_null_rejection_tracks_the_level() {
        let (n, q, b) = (64usize, 256usize, 600usize);
        let cal = calibrate_null(n, q, HcForm::PValue, b, 0.05, 7).unwrap();
        let rate = fresh_null_rejection_rate(n, q, HcForm::PValue, cal.threshold, b, 7).unwrap();
        assert!((rate - 0.05).abs() < 0.03, "rate {rate}");
    }

    #[test]
    fn power_run_is_deterministic_and_bounded() {
        let config = ExperimentConfig {
            p: 4096,
            n: 64,
            s: 3,
            r: 0.6,
            trials: 25,
            master_seed: 5,
            ..ExperimentConfig::default()
        };
        let cal = calibrate_null(64, config.q().unwrap(), HcForm::PValue, 100, 0.05, 5).unwrap();
        let row = estimate_power(&config, cal.threshold).unwrap();
        assert_eq!(row, estimate_power(&config, cal.threshold).unwrap());
        assert!(row.power >= 0.0 && row.power <= 1.0);
        assert_eq!(row.trials, 25);
        assert!(row.rejections <= 25);
    }

    #[test]
    fn null_alternative_power_matches_level() {
        // r = 0 disguises the null as an alternative.
        let config = ExperimentConfig {
            p: 4096,
            n: 64,
            s: 3,
            r: 0.0,
            trials: 400,
            master_seed: 31,
            ..ExperimentConfig::default()
        };
        let cal = calibrate_null(64, config.q().unwrap(), HcForm::PValue, 800, 0.05, 31).unwrap();
        let row = estimate_power(&config, cal.threshold).unwrap();
        assert!((row.power - 0.05).abs() < 0.04, "power {}", row.power);
    }

    #[test]
    fn comparison_smoke_run_populates_all_cells() {
        let base = ExperimentConfig {
            p: 4096,
            n: 64,
            s: 3,
            r: 0.6,
            trials: 2,
            master_seed: 77,
            ..ExperimentConfig::default()
        };
        let table = compare_q_modes(&base, &COMPARISON_Q_MODES).unwrap();
        assert_eq!(table.rows.len(), 6);
        assert_eq!(table.nulls.len(), 3);
        assert_eq!(table.rows[0].q, 640);
        assert_eq!(table.rows[2].q, 64);
        assert_eq!(table.rows[4].q, 4096);
        let again = compare_q_modes(&base, &COMPARISON_Q_MODES).unwrap();
        assert_eq!(table, again);
    }

    #[test]
    fn histogram_records_edges_and_totals() {
        let samples: Vec<f64> = (0..100).map(|k| k as f64 / 10.0).collect();
        let h = histogram(&samples, 5).unwrap();
        assert_eq!(h.edges.len(), 6);
        assert_eq!(h.counts.iter().sum::<u64>(), 100);
        assert_eq!(h.edges[0], 0.0);
        assert!((h.edges[5] - 9.9).abs() < 1e-12);
        let flat = histogram(&[2.0, 2.0, 2.0], 4).unwrap();
        assert_eq!(flat.counts.iter().sum::<u64>(), 3);
    }

    #[test]
    fn power_is_monotone_in_signal_strength() {
        // Desk-scale version of the reference setup.
        let base = ExperimentConfig {
            trials: 300,
            master_seed: 12,
            ..ExperimentConfig::default()
        };
        let q = base.q().unwrap();
        let cal = calibrate_null(base.n, q, HcForm::PValue, 600, 0.05, 12).unwrap();
        let mut powers = Vec::new();
        for r in [0.1, 0.3, 0.6] {
            let cfg = ExperimentConfig { r, ..base.clone() };
            powers.push(estimate_power(&cfg, cal.threshold).unwrap().power);
        }
        assert!(
            powers[0] <= powers[1] && powers[1] <= powers[2],
            "powers {powers:?}"
        );
    }
}
