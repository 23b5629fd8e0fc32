//! Closed-form detection boundaries and region classification.
//!
//! With `s = p^{1-alpha}`, `N = p^{1-gamma}` and amplitude
//! `A = sqrt(r p ln p / N)`, the critical curve separating detectable from
//! undetectable alternatives is `rho_gamma(alpha)`; `rho(alpha)` is the
//! gamma = 0 reference curve.

use crate::error::{Error, Result};

/// Reference boundary: `(1 - sqrt(1-alpha))^2` on `[3/4, 1)`,
/// `alpha - 1/2` on `(1/2, 3/4)`.
pub fn rho_star(alpha: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::PositionOutOfRange(alpha));
    }
    Ok(if alpha >= 0.75 {
        let root = (1.0 - alpha).sqrt();
        (1.0 - root) * (1.0 - root)
    } else {
        alpha - 0.5
    })
}

/// Grid-exponent boundary: `(sqrt(1-gamma) - sqrt(1-alpha))^2` on
/// `[(3+gamma)/4, 1)`, `alpha - 1/2 - gamma/2` on `[(1+gamma)/2, (3+gamma)/4)`.
/// Reduces to [`rho_star`] at `gamma = 0`.
pub fn rho_star_gamma(alpha: f64, gamma: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::PositionOutOfRange(gamma));
    }
    let lo = (1.0 + gamma) / 2.0;
    if !(alpha >= lo && alpha < 1.0) {
        return Err(Error::PositionOutOfRange(alpha));
    }
    Ok(if alpha >= (3.0 + gamma) / 4.0 {
        let diff = (1.0 - gamma).sqrt() - (1.0 - alpha).sqrt();
        diff * diff
    } else {
        alpha - 0.5 - gamma / 2.0
    })
}

/// A `(gamma, alpha, r)` configuration; `alpha` must lie strictly inside
/// the admissible interval `((1+gamma)/2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub gamma: f64,
    pub alpha: f64,
    pub r: f64,
}

impl BoundaryPoint {
    pub fn new(gamma: f64, alpha: f64, r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::PositionOutOfRange(gamma));
        }
        if !(alpha > (1.0 + gamma) / 2.0 && alpha < 1.0) {
            return Err(Error::PositionOutOfRange(alpha));
        }
        if !(r > 0.0) {
            return Err(Error::NonPositiveRate(r));
        }
        Ok(Self { gamma, alpha, r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Detectable,
    Undetectable,
    OnBoundary,
}

const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Classifies a configuration against the boundary: detectable iff
/// `r > rho_gamma(alpha)`, undetectable iff below, on-boundary within
/// absolute tolerance 1e-12.
pub fn classify(point: &BoundaryPoint) -> Result<Region> {
    let critical = rho_star_gamma(point.alpha, point.gamma)?;
    Ok(if (point.r - critical).abs() <= BOUNDARY_TOLERANCE {
        Region::OnBoundary
    } else if point.r > critical {
        Region::Detectable
    } else {
        Region::Undetectable
    })
}

/// `(alpha, rho_star, rho_star_gamma)` rows over a caller-supplied grid,
/// ready for CSV emission.
pub fn boundary_curve(gamma: f64, alphas: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    alphas
        .iter()
        .map(|&alpha| Ok((alpha, rho_star(alpha)?, rho_star_gamma(alpha, gamma)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_star_examples() {
        assert!((rho_star(0.75).unwrap() - 0.25).abs() < 1e-15);
        assert!((rho_star(0.6).unwrap() - 0.1).abs() < 1e-15);
        assert!((rho_star(1.0 - 1e-12).unwrap() - 1.0).abs() < 2e-6);
        assert!(rho_star(0.5).is_err());
        assert!(rho_star(1.0).is_err());
    }

    #[test]
    fn rho_star_gamma_reduces_at_gamma_zero() {
        let mut alpha = 0.51;
        while alpha < 1.0 {
            let a = rho_star(alpha).unwrap();
            let b = rho_star_gamma(alpha, 0.0).unwrap();
            assert!((a - b).abs() < 1e-15, "alpha={alpha}");
            alpha += 0.003;
        }
    }

    #[test]
    fn rho_star_gamma_endpoint_and_knot() {
        assert!(rho_star_gamma(0.65, 0.3).unwrap().abs() < 1e-15);
        assert_eq!(rho_star_gamma(0.75, 0.5).unwrap(), 0.0);
        let knot = (3.0 + 0.3) / 4.0;
        let quadratic = {
            let diff = (1.0f64 - 0.3).sqrt() - (1.0f64 - knot).sqrt();
            diff * diff
        };
        let linear = knot - 0.5 - 0.15;
        assert!((rho_star_gamma(knot, 0.3).unwrap() - 0.175).abs() < 1e-12);
        assert!((quadratic - linear).abs() < 1e-12);
        assert!(rho_star_gamma(0.64, 0.3).is_err());
    }

    #[test]
    fn classification_examples() {
        let d = BoundaryPoint::new(0.3, 0.9, 0.3).unwrap();
        assert_eq!(classify(&d).unwrap(), Region::Detectable);
        let u = BoundaryPoint::new(0.3, 0.9, 0.2).unwrap();
        assert_eq!(classify(&u).unwrap(), Region::Undetectable);
        let r = rho_star_gamma(0.9, 0.3).unwrap();
        let on = BoundaryPoint::new(0.3, 0.9, r).unwrap();
        assert_eq!(classify(&on).unwrap(), Region::OnBoundary);
    }

    #[test]
    fn strict_dominance_for_positive_gamma() {
        for &gamma in &[0.1, 0.3, 0.6] {
            let lo = (1.0 + gamma) / 2.0;
            for k in 1..=50 {
                let alpha = lo + (1.0 - lo) * k as f64 / 51.0;
                assert!(
                    rho_star_gamma(alpha, gamma).unwrap() < rho_star(alpha).unwrap(),
                    "gamma={gamma} alpha={alpha}"
                );
            }
        }
    }

    #[test]
    fn both_curves_nondecreasing() {
        for &gamma in &[0.0, 0.3, 0.6] {
            let lo = ((1.0 + gamma) / 2.0f64).max(0.5) + 1e-9;
            let mut prev_g = -1.0;
            let mut prev_s = -1.0;
            for k in 0..1000 {
                let alpha = lo + (1.0 - 1e-9 - lo) * k as f64 / 999.0;
                let g = rho_star_gamma(alpha, gamma).unwrap();
                let s = rho_star(alpha).unwrap();
                assert!(g >= prev_g - 1e-15 && s >= prev_s - 1e-15, "alpha={alpha}");
                prev_g = g;
                prev_s = s;
            }
        }
    }

    #[test]
    fn curve_rows_match_pointwise_eval() {
        let alphas: Vec<f64> = (651..=999).map(|k| k as f64 / 1000.0).collect();
        let rows = boundary_curve(0.3, &alphas).unwrap();
        assert_eq!(rows.len(), alphas.len());
        for (alpha, rs, rg) in rows {
            assert_eq!(rs, rho_star(alpha).unwrap());
            assert_eq!(rg, rho_star_gamma(alpha, 0.3).unwrap());
            assert!(rg < rs);
        }
        assert!(boundary_curve(0.3, &[0.2]).is_err());
    }
}
