//! Exact roots-of-unity arithmetic.
//!
//! DFT phases are reduced modulo 1 in integer arithmetic before calling trig
//! functions, so on-grid angles come out exactly zero and large index
//! products lose no precision.

use num_complex::Complex64;

/// `e^{2 pi i f}` for a fraction `f` in [0, 1).
pub(crate) fn unit_phase(frac: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * frac)
}

/// `(num mod den) / den` in [0, 1), with exact integer reduction.
pub(crate) fn frac_ratio(num: i128, den: u128) -> f64 {
    debug_assert!(den > 0);
    let den = den as i128;
    num.rem_euclid(den) as f64 / den as f64
}

/// `e^{2 pi i (num / den)}` with exact modular reduction.
pub(crate) fn root_of_unity(num: i128, den: u128) -> Complex64 {
    unit_phase(frac_ratio(num, den))
}
