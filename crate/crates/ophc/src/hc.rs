//! Higher-criticism statistics over periodogram intensities, noise
//! normalization, and the accept/reject decision.
//!
//! For a threshold `t` the standardized exceedance count is
//!
//! ```text
//! HC(t) = (#{m : sqrt(I_m) >= t} - q tail(t)) / sqrt(q tail(t) (1 - tail(t)))
//! ```
//!
//! with `tail(t) = exp(-t^2)`. Two suprema are provided: the interval form
//! over `t in [a, b]`, and the ordered p-value form maximized over ranks `m`
//! with `1/q <= P_(m) < 1/2`, `P_m = exp(-I_m)`. On matched domains
//! (`a = sqrt(ln 2)`, `b = sqrt(ln q)`) the two coincide.
//!
//! All comparisons run in intensity space (`I >= t^2` rather than
//! `sqrt(I) >= t`) so both forms make identical inclusion decisions.

use crate::error::{Error, Result};
use crate::math::{tail_prob, ComplexSeries};
use crate::periodogram::{oversampled_transform, Periodogram};

/// Which supremum defines HC*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HcForm {
    /// Supremum over a threshold interval `[a, b]`.
    Interval,
    /// Maximum over ordered p-values with `1/q <= P_(m) < 1/2`.
    PValue,
}

impl HcForm {
    pub fn as_str(&self) -> &'static str {
        match self {
            HcForm::Interval => "interval",
            HcForm::PValue => "pvalue",
        }
    }
}

impl std::fmt::Display for HcForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Noise-scale handling at test time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaMode {
    Known(f64),
    /// Root mean square of `|y_t|`; consistent under the null.
    Estimated,
}

impl SigmaMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SigmaMode::Known(_) => "known",
            SigmaMode::Estimated => "estimated",
        }
    }
}

/// A supremum of HC over its candidate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HcSup {
    pub hc_star: f64,
    /// Threshold `t` at which the maximum is attained.
    pub argmax_t: f64,
    /// Exceedance count at the argmax; equals the p-value rank `m` there.
    pub argmax_count: usize,
}

/// Outcome of the full test on one series.
#[derive(Debug, Clone, PartialEq)]
pub struct HcResult {
    pub hc_star: f64,
    pub argmax_t: f64,
    pub argmax_count: usize,
    pub q: usize,
    pub form: HcForm,
    /// Noise scale actually divided out.
    pub sigma_used: f64,
    pub threshold_used: f64,
    /// `true` iff `hc_star > threshold_used` (strict).
    pub reject: bool,
    pub empirical_pvalue: Option<f64>,
}

fn hc_value(count: usize, q: usize, tail: f64) -> Option<f64> {
    let var = q as f64 * tail * (1.0 - tail);
    if var > 0.0 {
        Some((count as f64 - q as f64 * tail) / var.sqrt())
    } else {
        None
    }
}

/// `HC(t)` for a fixed threshold.
pub fn hc_at(t: f64, pg: &Periodogram) -> Result<f64> {
    let tail = tail_prob(t)?;
    let t2 = t * t;
    let count = pg.intensities().iter().filter(|&&i| i >= t2).count();
    hc_value(count, pg.q(), tail).ok_or(Error::ThresholdOutOfDomain(t))
}

/// Exact supremum of `HC(t)` over the candidate set `{a}` together with
/// every sample point `sqrt(I_m)` in `(a, b]`, each evaluated with the
/// tie-inclusive count `#{sqrt(I) >= t}`. Between sample points `HC` is
/// monotone in `t`, so these candidates dominate any dense grid.
pub fn hc_star_interval(pg: &Periodogram, a: f64, b: f64) -> Result<HcSup> {
    if !(a > 0.0) || !(b >= a) {
        return Err(Error::InvalidInterval { a, b });
    }
    let tail_b = tail_prob(b)?;
    if !(tail_b * (1.0 - tail_b) > 0.0) {
        return Err(Error::InvalidInterval { a, b });
    }
    let q = pg.q();
    let mut sorted: Vec<f64> = pg.intensities().to_vec();
    sorted.sort_unstable_by(|x, y| y.total_cmp(x)); // descending

    let (a2, b2) = (a * a, b * b);
    let count_at_a = sorted.partition_point(|&i| i >= a2);
    let mut best = HcSup {
        hc_star: hc_value(count_at_a, q, tail_prob(a)?)
            .ok_or(Error::ThresholdOutOfDomain(a))?,
        argmax_t: a,
        argmax_count: count_at_a,
    };
    for (idx, &intensity) in sorted.iter().enumerate() {
        if intensity <= a2 {
            break;
        }
        if intensity > b2 {
            continue;
        }
        // Evaluate only at the last index of a tie run: that is the
        // tie-inclusive count, and it dominates the earlier ranks.
        if idx + 1 < q && sorted[idx + 1] == intensity {
            continue;
        }
        let t = intensity.sqrt();
        let tail = (-intensity).exp();
        let value =
            hc_value(idx + 1, q, tail).ok_or(Error::ThresholdOutOfDomain(t))?;
        if value > best.hc_star {
            best = HcSup {
                hc_star: value,
                argmax_t: t,
                argmax_count: idx + 1,
            };
        }
    }
    Ok(best)
}

/// Practical form: maximum of `(m - q P_(m)) / sqrt(q P_(m)(1 - P_(m)))`
/// over ranks with `1/q <= P_(m) < 1/2`, where `P_(m)` are the ascending
/// p-values `exp(-I)`. Errors when no rank is admissible.
pub fn hc_star_pvalues(pg: &Periodogram) -> Result<HcSup> {
    let q = pg.q();
    if q < 2 {
        return Err(Error::TransformTooShort(q));
    }
    let ln_q = (q as f64).ln();
    // P < 1/2 <=> I > ln 2; these occupy the leading ascending-P ranks.
    let mut head: Vec<f64> = pg
        .intensities()
        .iter()
        .copied()
        .filter(|&i| i > std::f64::consts::LN_2)
        .collect();
    head.sort_unstable_by(|x, y| y.total_cmp(x)); // descending I = ascending P
    let qf = q as f64;
    let mut best: Option<HcSup> = None;
    for (idx, &intensity) in head.iter().enumerate() {
        if intensity > ln_q {
            continue; // P_(m) < 1/q: rank counted, not admissible
        }
        let rank = idx + 1;
        let p = (-intensity).exp();
        let value = (rank as f64 - qf * p) / (qf * p * (1.0 - p)).sqrt();
        if best.map_or(true, |b| value > b.hc_star) {
            best = Some(HcSup {
                hc_star: value,
                argmax_t: intensity.sqrt(),
                argmax_count: rank,
            });
        }
    }
    best.ok_or(Error::UndefinedStatistic)
}

/// Root mean square of the series; consistent for sigma under the null.
pub fn estimate_sigma(y: &ComplexSeries) -> Result<f64> {
    let ms = y.mean_square();
    if ms == 0.0 {
        return Err(Error::ZeroSeries);
    }
    Ok(ms.sqrt())
}

/// Theory interval `[1, sqrt(ln(N/3))]` for the interval form.
pub fn theory_interval(n: usize) -> Result<(f64, f64)> {
    let b = ((n as f64) / 3.0).ln();
    if b < 1.0 {
        return Err(Error::InvalidInterval { a: 1.0, b: b.max(0.0).sqrt() });
    }
    Ok((1.0, b.sqrt()))
}

/// Theory threshold `ln^2 N`.
pub fn theory_threshold(n: usize) -> f64 {
    let l = (n as f64).ln();
    l * l
}

/// The full test: normalize by sigma, transform at length `q`, take HC* in
/// the requested form, reject iff it exceeds the threshold strictly.
pub fn ophc_test(
    y: &ComplexSeries,
    q: usize,
    sigma: SigmaMode,
    form: HcForm,
    threshold: f64,
) -> Result<HcResult> {
    if !threshold.is_finite() {
        return Err(Error::ThresholdOutOfDomain(threshold));
    }
    let sigma_used = match sigma {
        SigmaMode::Known(s) => {
            if !(s > 0.0) {
                return Err(Error::NonPositiveSigma(s));
            }
            s
        }
        SigmaMode::Estimated => estimate_sigma(y)?,
    };
    let normalized = y.scaled(1.0 / sigma_used);
    let pg = oversampled_transform(&normalized, q)?;
    let sup = match form {
        HcForm::PValue => hc_star_pvalues(&pg)?,
        HcForm::Interval => {
            let (a, b) = theory_interval(y.len())?;
            hc_star_interval(&pg, a, b)?
        }
    };
    Ok(HcResult {
        hc_star: sup.hc_star,
        argmax_t: sup.argmax_t,
        argmax_count: sup.argmax_count,
        q,
        form,
        sigma_used,
        threshold_used: threshold,
        reject: sup.hc_star > threshold,
        empirical_pvalue: None,
    })
}
