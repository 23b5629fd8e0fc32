//! Sparse-spectrum alternatives on an extended DFT grid.
//!
//! An alternative places `s` atoms at grid positions `tau_1 < ... < tau_s`
//! out of `p` frequencies with complex amplitudes `beta_l`. The observed
//! series is
//!
//! ```text
//! y_j = p^{-1/2} sum_l exp(-2 pi i (j-1)(tau_l - 1) / p) beta_l + z_j
//! ```
//!
//! and the deterministic mean of its length-`q` analysis spectrum is
//! available in closed form via per-atom geometric sums.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::math::{sample_complex_normal, ComplexSeries};
use crate::phase::root_of_unity;
use crate::rng::RngHandle;

/// Sparse frequency-domain description of an alternative: grid size `p`,
/// strictly increasing support in `[1, p]`, one complex amplitude per atom.
/// Zero atoms encode the null.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSpectrum {
    p: u64,
    support: Vec<u64>,
    amplitudes: Vec<Complex64>,
}

impl SparseSpectrum {
    pub fn new(p: u64, support: Vec<u64>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::GridTooSmall(p));
        }
        if support.len() != amplitudes.len() {
            return Err(Error::AmplitudeCountMismatch {
                support: support.len(),
                amplitudes: amplitudes.len(),
            });
        }
        let in_range = support.iter().all(|&t| (1..=p).contains(&t));
        let increasing = support.windows(2).all(|w| w[0] < w[1]);
        if !in_range || !increasing {
            return Err(Error::InvalidSupport);
        }
        Ok(Self {
            p,
            support,
            amplitudes,
        })
    }

    /// The null model: no atoms.
    pub fn null(p: u64) -> Self {
        Self {
            p,
            support: Vec::new(),
            amplitudes: Vec::new(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }
}

/// How atom phases are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseMode {
    /// Independent uniform phases on `[0, 2 pi)`.
    Uniform,
    /// All atoms share this phase; for deterministic tests.
    Fixed(f64),
}

/// Parameters of the randomized alternative. Amplitudes all have modulus
/// `A = sqrt(r p ln p / N)`; the sparsity exponent `alpha` and grid exponent
/// `gamma` (where `s = p^{1-alpha}`, `N = p^{1-gamma}`) are derived views.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternativeParams {
    pub p: u64,
    pub n: usize,
    pub s: usize,
    pub r: f64,
    /// Minimum wrap-around separation enforced on drawn supports; `0.0`
    /// draws plain uniform supports with distinct indices.
    pub min_sep: f64,
    pub phases: PhaseMode,
}

impl AlternativeParams {
    pub fn new(p: u64, n: usize, s: usize, r: f64) -> Result<Self> {
        if p < 2 {
            return Err(Error::GridTooSmall(p));
        }
        if n == 0 {
            return Err(Error::EmptySeries);
        }
        if !(r >= 0.0) {
            return Err(Error::NonPositiveRate(r));
        }
        Ok(Self {
            p,
            n,
            s,
            r,
            min_sep: 0.0,
            phases: PhaseMode::Uniform,
        })
    }

    /// Builds the parameter set from the sparsity exponent:
    /// `s = round(p^{1-alpha})`.
    pub fn from_sparsity_exponent(p: u64, n: usize, alpha: f64, r: f64) -> Result<Self> {
        if p < 2 {
            return Err(Error::GridTooSmall(p));
        }
        let s = (p as f64).powf(1.0 - alpha).round() as usize;
        Self::new(p, n, s, r)
    }

    pub fn with_min_sep(mut self, min_sep: f64) -> Self {
        self.min_sep = min_sep;
        self
    }

    pub fn with_phases(mut self, phases: PhaseMode) -> Self {
        self.phases = phases;
        self
    }

    /// Grid exponent `gamma` with `N = p^{1-gamma}`.
    pub fn gamma(&self) -> f64 {
        1.0 - (self.n as f64).ln() / (self.p as f64).ln()
    }

    /// Sparsity exponent `alpha` with `s = p^{1-alpha}`.
    pub fn alpha(&self) -> f64 {
        1.0 - (self.s as f64).ln() / (self.p as f64).ln()
    }

    /// Common amplitude modulus `A`.
    pub fn amplitude(&self) -> Result<f64> {
        amplitude_from_r(self.r, self.p, self.n)
    }
}

/// Minimum wrap-around gap of the support, as a fraction of `p`:
/// `min{tau_{l+1} - tau_l, tau_1 + p - tau_s} / p`. A single atom has gap 1.
pub fn min_separation(spectrum: &SparseSpectrum) -> Result<f64> {
    min_gap_fraction(spectrum.support(), spectrum.p())
}

fn min_gap_fraction(support: &[u64], p: u64) -> Result<f64> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let wrap = support[0] + p - support[support.len() - 1];
    let min_gap = support
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(wrap))
        .min()
        .expect("non-empty");
    Ok(min_gap as f64 / p as f64)
}

pub const DEFAULT_SUPPORT_ATTEMPTS: usize = 10_000;

/// Draws a support of `s` indices i.i.d. uniform on `{1,...,p}` and accepts
/// once all are distinct with minimum wrap-around gap at least `min_sep`.
/// Each attempt uses a fresh sub-stream, so the result depends only on the
/// handle.
pub fn sample_support(p: u64, s: usize, min_sep: f64, handle: RngHandle) -> Result<Vec<u64>> {
    sample_support_with_cap(p, s, min_sep, handle, DEFAULT_SUPPORT_ATTEMPTS)
}

pub fn sample_support_with_cap(
    p: u64,
    s: usize,
    min_sep: f64,
    handle: RngHandle,
    max_attempts: usize,
) -> Result<Vec<u64>> {
    if s == 0 {
        return Err(Error::EmptySupport);
    }
    if !(min_sep >= 0.0) {
        return Err(Error::NegativeValue(min_sep));
    }
    if s as f64 * min_sep >= 1.0 || s as u64 > p {
        return Err(Error::InfeasibleSeparation { s, min_sep });
    }
    for attempt in 0..max_attempts {
        let mut rng = handle.substream(attempt as u64).rng();
        let mut draw: Vec<u64> = (0..s).map(|_| rng.random_range(1..=p)).collect();
        draw.sort_unstable();
        let distinct = draw.windows(2).all(|w| w[0] < w[1]);
        if !distinct {
            continue;
        }
        if min_gap_fraction(&draw, p)? >= min_sep {
            return Ok(draw);
        }
    }
    Err(Error::SupportSamplerExhausted {
        attempts: max_attempts,
    })
}

/// Common amplitude modulus `A = sqrt(r p ln p / N)`.
pub fn amplitude_from_r(r: f64, p: u64, n: usize) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRate(r));
    }
    if p < 2 {
        return Err(Error::GridTooSmall(p));
    }
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    Ok((r * p as f64 * (p as f64).ln() / n as f64).sqrt())
}

/// Draws a random alternative: support via [`sample_support`], all
/// amplitudes of modulus `A` with phases per `params.phases`. Zero sparsity
/// or `r = 0` yields the null spectrum.
pub fn make_alternative(params: &AlternativeParams, handle: RngHandle) -> Result<SparseSpectrum> {
    if params.s == 0 || params.r == 0.0 {
        return Ok(SparseSpectrum::null(params.p));
    }
    let amplitude = params.amplitude()?;
    let support = sample_support(params.p, params.s, params.min_sep, handle.substream(0))?;
    let mut phase_rng = handle.substream(1).rng();
    let amplitudes = (0..params.s)
        .map(|_| {
            let phi = match params.phases {
                PhaseMode::Uniform => phase_rng.random::<f64>() * std::f64::consts::TAU,
                PhaseMode::Fixed(phi) => phi,
            };
            Complex64::from_polar(amplitude, phi)
        })
        .collect();
    SparseSpectrum::new(params.p, support, amplitudes)
}

/// Synthesizes an observation of length `n`: the superposition of the
/// spectrum's atoms plus complex noise of scale `sigma` (`sigma = 0` gives
/// the noiseless mean). Cost O(n s).
pub fn synthesize(
    spectrum: &SparseSpectrum,
    n: usize,
    sigma: f64,
    handle: RngHandle,
) -> Result<ComplexSeries> {
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    if !(sigma >= 0.0) {
        return Err(Error::NegativeValue(sigma));
    }
    let p = spectrum.p();
    let scale = 1.0 / (p as f64).sqrt();
    let mut samples = if sigma > 0.0 {
        sample_complex_normal(n, sigma, handle)?.into_samples()
    } else {
        vec![Complex64::new(0.0, 0.0); n]
    };
    for (&tau, &beta) in spectrum.support().iter().zip(spectrum.amplitudes()) {
        let offset = (tau - 1) as u128;
        for (j, y) in samples.iter_mut().enumerate() {
            // exp(-2 pi i (j)(tau-1)/p), exact modular phase
            let k = (j as u128 * offset) % p as u128;
            *y += scale * beta * root_of_unity(-(k as i128), p as u128);
        }
    }
    ComplexSeries::new(samples)
}

/// Deterministic mean of the length-`q` analysis spectrum,
/// `theta_m = (N p)^{-1/2} sum_l beta_l G_N((m-1)/q - (tau_l-1)/p)`,
/// where `G_N` is the length-`N` geometric sum. Cost O(q s).
pub fn mean_spectrum(spectrum: &SparseSpectrum, n: usize, q: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    if q == 0 {
        return Err(Error::ZeroTransformLength);
    }
    let p = spectrum.p();
    let den = q as u128 * p as u128;
    let scale = 1.0 / ((n as f64) * (p as f64)).sqrt();
    let mut theta = vec![Complex64::new(0.0, 0.0); q];
    for (&tau, &beta) in spectrum.support().iter().zip(spectrum.amplitudes()) {
        for (m0, out) in theta.iter_mut().enumerate() {
            // delta = m0/q - (tau-1)/p = num / (q p)
            let num = m0 as i128 * p as i128 - (tau - 1) as i128 * q as i128;
            *out += scale * beta * geometric_sum(num, den, n);
        }
    }
    Ok(theta)
}

/// `sum_{j=0}^{n-1} exp(2 pi i j num/den)` via the closed form, falling back
/// to the explicit sum near the removable singularity.
fn geometric_sum(num: i128, den: u128, n: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let base = root_of_unity(num, den);
    if (one - base).norm() < 1e-12 {
        // Cancellation-prone; sum term by term with exact phases.
        return (0..n as i128)
            .map(|j| root_of_unity(num * j, den))
            .sum();
    }
    let top = root_of_unity(num * n as i128, den);
    (one - top) / (one - base)
}

/// Pairs the halves of a real series of length `2n` into a complex series:
/// `y_t = u_t + i u_{t+n}`.
pub fn complexify(u: &[f64]) -> Result<ComplexSeries> {
    if u.len() % 2 != 0 {
        return Err(Error::OddLength(u.len()));
    }
    if u.is_empty() {
        return Err(Error::EmptySeries);
    }
    let n = u.len() / 2;
    let samples = (0..n).map(|t| Complex64::new(u[t], u[t + n])).collect();
    ComplexSeries::new(samples)
}
