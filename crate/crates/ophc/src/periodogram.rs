//! Over-sampled periodogram of a complex series.
//!
//! The analysis matrix has rows `(1/sqrt(N)) exp(+2 pi i (m-1)(j-1)/q)` for
//! `m = 1..q` (synthesis uses the negative exponent; the pair is fixed
//! project-wide). Row normalization is `1/sqrt(N)` regardless of `q`, so
//! under unit noise every `v_m` is standard complex normal and
//! `I_m = |v_m|^2` has unit mean.
//!
//! The transform is computed as a length-`q` FFT of the index-folded series,
//! which agrees with the direct O(Nq) summation to floating precision for
//! every `q >= 1` (zero-padding when `q >= N`, aliasing otherwise). The
//! direct summation is kept as a reference implementation.

use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::math::ComplexSeries;
use crate::phase::root_of_unity;

/// Rule for choosing the transform length `q` from the series length `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QMode {
    /// `q = N floor(ln N + 1)`.
    Theory,
    /// `q = 2 N floor(ln N + 1)`.
    Simulation,
    /// `q = N` (the standard periodogram).
    Standard,
    /// `q = p`; requires the grid size.
    Full,
}

impl QMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            QMode::Theory => "theory",
            QMode::Simulation => "simulation",
            QMode::Standard => "standard",
            QMode::Full => "full",
        }
    }
}

impl std::fmt::Display for QMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Transform length for the given rule; the floor uses natural log.
pub fn q_rule(n: usize, mode: QMode, p: Option<u64>) -> Result<usize> {
    if n < 2 {
        return Err(Error::SeriesTooShort(n));
    }
    let oversampling = ((n as f64).ln() + 1.0).floor() as usize;
    Ok(match mode {
        QMode::Theory => n * oversampling,
        QMode::Simulation => 2 * n * oversampling,
        QMode::Standard => n,
        QMode::Full => p.ok_or(Error::MissingGridSize)? as usize,
    })
}

/// Spectrum `v = U y` at `q` equispaced frequencies plus its intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    q: usize,
    n: usize,
    v: Vec<Complex64>,
    intensities: Vec<f64>,
}

impl Periodogram {
    /// Builds from an explicit spectrum (mainly for fixtures); intensities
    /// are derived.
    pub fn from_spectrum(v: Vec<Complex64>, n: usize) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::ZeroTransformLength);
        }
        if n == 0 {
            return Err(Error::EmptySeries);
        }
        let intensities = v.iter().map(|z| z.norm_sqr()).collect();
        Ok(Self {
            q: v.len(),
            n,
            v,
            intensities,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spectrum(&self) -> &[Complex64] {
        &self.v
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }
}

static PLANNER: Lazy<Mutex<FftPlanner<f64>>> = Lazy::new(|| Mutex::new(FftPlanner::new()));

fn inverse_plan(q: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.lock().expect("planner lock").plan_fft_inverse(q)
}

/// `v_m = (1/sqrt(N)) sum_j exp(+2 pi i (m-1)(j-1)/q) y_j` for `m = 1..q`,
/// via a length-`q` transform of the folded series.
pub fn oversampled_transform(y: &ComplexSeries, q: usize) -> Result<Periodogram> {
    if q == 0 {
        return Err(Error::ZeroTransformLength);
    }
    let n = y.len();
    let mut buffer = vec![Complex64::new(0.0, 0.0); q];
    for (j, &sample) in y.samples().iter().enumerate() {
        buffer[j % q] += sample;
    }
    inverse_plan(q).process(&mut buffer);
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut buffer {
        *v *= scale;
    }
    let intensities = buffer.iter().map(|z| z.norm_sqr()).collect();
    Ok(Periodogram {
        q,
        n,
        v: buffer,
        intensities,
    })
}

/// Direct O(Nq) evaluation of the same sum with exact modular phases;
/// reference implementation for the FFT path.
pub fn oversampled_transform_direct(y: &ComplexSeries, q: usize) -> Result<Periodogram> {
    if q == 0 {
        return Err(Error::ZeroTransformLength);
    }
    let n = y.len();
    let scale = 1.0 / (n as f64).sqrt();
    let v: Vec<Complex64> = (0..q)
        .map(|m0| {
            let sum: Complex64 = y
                .samples()
                .iter()
                .enumerate()
                .map(|(j, &sample)| {
                    let k = (m0 as u128 * j as u128) % q as u128;
                    root_of_unity(k as i128, q as u128) * sample
                })
                .sum();
            sum * scale
        })
        .collect();
    let intensities = v.iter().map(|z| z.norm_sqr()).collect();
    Ok(Periodogram {
        q,
        n,
        v,
        intensities,
    })
}

/// Closed-form null cross-correlation of spectrum entries `m1`, `m2`
/// (1-based): `xi = (1 - e^{2 pi i N (m1-m2)/q}) / (N (1 - e^{2 pi i (m1-m2)/q}))`.
/// Exactly zero whenever `N (m1 - m2) / q` is a nonzero integer, which with
/// `L = q/N` integer means `(m1 - m2)/L` is an integer.
pub fn cross_correlation(n: usize, q: usize, m1: usize, m2: usize) -> Complex64 {
    let delta = m1 as i128 - m2 as i128;
    if delta.rem_euclid(q as i128) == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let one = Complex64::new(1.0, 0.0);
    let top = one - root_of_unity(n as i128 * delta, q as u128);
    let bottom = (one - root_of_unity(delta, q as u128)) * n as f64;
    top / bottom
}

/// Whether `v_{m1}` and `v_{m2}` are exactly independent under the null for
/// this `(N, q)` lattice.
pub fn lattice_independent(n: usize, q: usize, m1: usize, m2: usize) -> bool {
    let delta = m1 as i128 - m2 as i128;
    delta.rem_euclid(q as i128) != 0 && (n as i128 * delta).rem_euclid(q as i128) == 0
}
