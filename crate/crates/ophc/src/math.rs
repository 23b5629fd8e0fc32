//! Circularly-symmetric complex Gaussian sampling, its tail law, and
//! distances on the unit circle.
//!
//! A complex normal of scale `sigma` has independent real and imaginary
//! parts, each `N(0, sigma^2 / 2)`, so `E|z|^2 = sigma^2` and at unit scale
//! `P(|z| >= t) = exp(-t^2)`.

use num_complex::Complex64;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::rng::RngHandle;

/// A finite complex-valued series: an observation or a noise realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    samples: Vec<Complex64>,
}

impl ComplexSeries {
    /// Wraps samples; the series must be non-empty.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Entrywise multiple of the series.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|z| z * factor).collect(),
        }
    }

    /// Mean of `|y_t|^2`.
    pub fn mean_square(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }
}

/// Draws `n` independent complex normals of scale `sigma`: real and
/// imaginary parts are independent `N(0, sigma^2 / 2)`.
pub fn sample_complex_normal(n: usize, sigma: f64, handle: RngHandle) -> Result<ComplexSeries> {
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveSigma(sigma));
    }
    let component = Normal::new(0.0, sigma / std::f64::consts::SQRT_2).expect("valid std dev");
    let mut rng = handle.rng();
    let samples = (0..n)
        .map(|_| Complex64::new(component.sample(&mut rng), component.sample(&mut rng)))
        .collect();
    Ok(ComplexSeries { samples })
}

/// Tail of the standard complex normal modulus: `P(|z| >= t) = exp(-t^2)`.
pub fn tail_prob(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::NegativeValue(t));
    }
    Ok((-t * t).exp())
}

/// Upper bound on `P(|mu + z| > t)` for `|mu| = mu_abs`:
/// `exp(-((t - mu_abs)_+)^2)`.
pub fn noncentral_tail_upper(t: f64, mu_abs: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::NegativeValue(t));
    }
    if !(mu_abs >= 0.0) {
        return Err(Error::NegativeValue(mu_abs));
    }
    let shifted = (t - mu_abs).max(0.0);
    Ok((-shifted * shifted).exp())
}

/// Wrap-around distance between two positions on the unit circle,
/// `min(|a-b|, 1-|a-b|)`, for `a, b` in `[0, 1]`.
pub fn circle_distance(a: f64, b: f64) -> Result<f64> {
    for &x in &[a, b] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::PositionOutOfRange(x));
        }
    }
    let d = (a - b).abs();
    Ok(d.min(1.0 - d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tail_prob_values() {
        assert_eq!(tail_prob(0.0).unwrap(), 1.0);
        let half = tail_prob(2.0_f64.ln().sqrt()).unwrap();
        assert!((half - 0.5).abs() < 1e-15);
        assert!((tail_prob(1.0).unwrap() - (-1.0_f64).exp()).abs() < 1e-15);
        assert!(tail_prob(-0.1).is_err());
    }

    #[test]
    fn noncentral_tail_values() {
        assert_eq!(noncentral_tail_upper(1.0, 2.0).unwrap(), 1.0);
        assert_eq!(noncentral_tail_upper(2.0, 2.0).unwrap(), 1.0);
        let e4 = (-4.0_f64).exp();
        assert!((noncentral_tail_upper(2.0, 0.0).unwrap() - e4).abs() < 1e-15);
        assert!((noncentral_tail_upper(3.0, 1.0).unwrap() - e4).abs() < 1e-15);
        assert!(noncentral_tail_upper(-1.0, 0.0).is_err());
        assert!(noncentral_tail_upper(1.0, -1.0).is_err());
    }

    #[test]
    fn circle_distance_values() {
        assert!((circle_distance(0.1, 0.9).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(circle_distance(0.37, 0.37).unwrap(), 0.0);
        assert!((circle_distance(0.25, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(circle_distance(0.0, 1.0).unwrap(), 0.0);
        assert!(circle_distance(1.2, 0.5).is_err());
    }

    #[test]
    fn sampling_rejects_bad_arguments() {
        let h = RngHandle::new(0, 0);
        assert!(sample_complex_normal(0, 1.0, h).is_err());
        assert!(sample_complex_normal(1, 0.0, h).is_err());
        assert!(sample_complex_normal(1, -1.0, h).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let h = RngHandle::new(99, 3);
        let a = sample_complex_normal(64, 2.0, h).unwrap();
        let b = sample_complex_normal(64, 2.0, h).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_square_matches_sigma_squared() {
        let h = RngHandle::new(7, 0);
        let z = sample_complex_normal(100_000, 1.0, h).unwrap();
        assert!((z.mean_square() - 1.0).abs() < 0.02);
    }

    #[test]
    fn empirical_tail_matches_tail_prob() {
        let h = RngHandle::new(11, 0);
        let z = sample_complex_normal(100_000, 1.0, h).unwrap();
        for &t in &[0.5, 1.0, 1.5, 2.0] {
            let hits = z.samples().iter().filter(|s| s.norm() >= t).count();
            let freq = hits as f64 / z.len() as f64;
            let expected = tail_prob(t).unwrap();
            assert!(
                (freq - expected).abs() < 0.01,
                "t={t}: empirical {freq} vs {expected}"
            );
        }
    }

    #[test]
    fn noncentral_upper_bound_holds_empirically() {
        let draws = 100_000;
        for (k, &mu) in [0.0, 1.0, 2.0].iter().enumerate() {
            let z = sample_complex_normal(draws, 1.0, RngHandle::new(21, k as u64)).unwrap();
            for &t in &[1.0, 2.0, 3.0] {
                let hits = z
                    .samples()
                    .iter()
                    .filter(|s| (mu + *s).norm() > t)
                    .count();
                let p_hat = hits as f64 / draws as f64;
                let bound = noncentral_tail_upper(t, mu).unwrap();
                let se = (bound.max(1e-12) * (1.0 - bound).max(1e-12) / draws as f64).sqrt();
                assert!(
                    p_hat <= bound + 3.0 * se,
                    "mu={mu} t={t}: {p_hat} > {bound} + 3se"
                );
            }
        }
    }

    #[test]
    fn chord_bounds_hold() {
        // 4 d(a,b) <= |1 - e^{2 pi i (a-b)}| <= 2 pi d(a,b)
        let mut rng = RngHandle::new(5, 0).rng();
        use rand::Rng;
        for _ in 0..1000 {
            let a: f64 = rng.random();
            let b: f64 = rng.random();
            let d = circle_distance(a, b).unwrap();
            let chord = (Complex64::new(1.0, 0.0)
                - Complex64::from_polar(1.0, std::f64::consts::TAU * (a - b)))
            .norm();
            assert!(4.0 * d <= chord + 1e-12, "a={a} b={b}");
            assert!(chord <= std::f64::consts::TAU * d + 1e-12, "a={a} b={b}");
        }
    }

    proptest! {
        #[test]
        fn circle_distance_is_symmetric_and_triangular(
            a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64
        ) {
            let dab = circle_distance(a, b).unwrap();
            let dba = circle_distance(b, a).unwrap();
            prop_assert_eq!(dab, dba);
            prop_assert!(dab <= 0.5 + 1e-15);
            let dac = circle_distance(a, c).unwrap();
            let dcb = circle_distance(c, b).unwrap();
            prop_assert!(dab <= dac + dcb + 1e-12);
        }
    }
}
