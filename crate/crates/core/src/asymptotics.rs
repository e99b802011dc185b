//! Closed-form limit laws of the projected sample mean.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Standard normal CDF, `Φ(x) = erfc(-x/√2) / 2`.
pub fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x * core::f64::consts::FRAC_1_SQRT_2)
}

/// Limit of `P(t_n ≤ f(s/√n))`: `Φ(s/σ)` for `s ≥ 0`.
pub fn theorem1_limit(s: f64, sigma: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::param("s", s, "must be nonnegative"));
    }
    check_sigma(sigma)?;
    Ok(phi(s / sigma))
}

/// CDF of the limit `T` of `n^{γ/2} t_n` for `f(y) = y^γ`:
/// `Φ(sgn(s) |s|^{1/γ} / σ)`.
pub fn poly_limit_cdf(s: f64, gamma: f64, sigma: f64) -> f64 {
    if s == 0.0 {
        return 0.5;
    }
    phi(s.signum() * s.abs().powf(1.0 / gamma) / sigma)
}

/// Value of a CDF that may jump at the queried point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CdfValue {
    Point(f64),
    /// Left and right limits at a jump.
    Jump { left: f64, right: f64 },
}

impl CdfValue {
    /// The right-continuous value.
    pub fn value(self) -> f64 {
        match self {
            CdfValue::Point(v) => v,
            CdfValue::Jump { right, .. } => right,
        }
    }
}

/// CDF of the two-point law on `{-1, 1}` (limit of `(½ log n)^γ t_n` for
/// the logarithmic family).
pub fn log_limit_cdf(s: f64) -> CdfValue {
    if s < -1.0 {
        CdfValue::Point(0.0)
    } else if s == -1.0 {
        CdfValue::Jump {
            left: 0.0,
            right: 0.5,
        }
    } else if s < 1.0 {
        CdfValue::Point(0.5)
    } else if s == 1.0 {
        CdfValue::Jump {
            left: 0.5,
            right: 1.0,
        }
    } else {
        CdfValue::Point(1.0)
    }
}

/// Masses `(+∞, 0, −∞)` of the limit of `exp((√n/c)^γ) t_n` for the
/// exponential family: `(1 − p, 2p − 1, 1 − p)` with `p = Φ(c/σ)`.
pub fn exp_limit_masses(c: f64, sigma: f64) -> Result<(f64, f64, f64)> {
    if !(c > 0.0) {
        return Err(Error::param("c", c, "must be positive"));
    }
    check_sigma(sigma)?;
    let p = phi(c / sigma);
    let tail = 1.0 - p;
    Ok((tail, 1.0 - 2.0 * tail, tail))
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::param("sigma", sigma, "must be positive and finite"))
    }
}

/// The limit laws as one value type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitLaw {
    /// `N(0, σ²)`: the law of `√n g(t_n)`, and the two-sided extension of
    /// `s ↦ Φ(s/σ)`.
    Theorem1 { sigma: f64 },
    /// Limit of `n^{γ/2} t_n` for polynomial rates.
    PolyT { gamma: f64, sigma: f64 },
    /// Uniform on `{-1, 1}`.
    LogPm1,
    /// Masses at `-∞`, `0`, `+∞`.
    ExpMass { c: f64, sigma: f64 },
}

impl LimitLaw {
    pub fn cdf(&self, s: f64) -> CdfValue {
        match *self {
            LimitLaw::Theorem1 { sigma } => CdfValue::Point(phi(s / sigma)),
            LimitLaw::PolyT { gamma, sigma } => CdfValue::Point(poly_limit_cdf(s, gamma, sigma)),
            LimitLaw::LogPm1 => log_limit_cdf(s),
            LimitLaw::ExpMass { c, sigma } => {
                let p = phi(c / sigma);
                if s < 0.0 {
                    CdfValue::Point(1.0 - p)
                } else if s == 0.0 {
                    CdfValue::Jump {
                        left: 1.0 - p,
                        right: p,
                    }
                } else {
                    CdfValue::Point(p)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Φ(1) from the series erf(x) = 2/√π Σ (-1)^k x^{2k+1} / (k! (2k+1)),
    // summed independently of libm
    fn phi_series(x: f64) -> f64 {
        let z = x / core::f64::consts::SQRT_2;
        let mut term = z;
        let mut sum = z;
        for k in 1..80 {
            term *= -z * z / k as f64;
            sum += term / (2 * k + 1) as f64;
        }
        0.5 + sum / core::f64::consts::PI.sqrt()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(0.0), 0.5);
        assert!(phi(8.0) >= 1.0 - 1e-15);
        assert_abs_diff_eq!(phi(1.0), 0.841_344_746_068_542_9, epsilon = 1e-15);
        for i in -40..=40 {
            let x = i as f64 / 10.0;
            assert_abs_diff_eq!(phi(x), phi_series(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn theorem1_examples() {
        assert_eq!(theorem1_limit(0.0, 1.0).unwrap(), 0.5);
        assert_eq!(theorem1_limit(2.0, 2.0).unwrap(), phi(1.0));
        assert_abs_diff_eq!(theorem1_limit(1.0, 1.0).unwrap(), phi_series(1.0), epsilon = 1e-14);
        assert!(theorem1_limit(-0.1, 1.0).is_err());
        assert!(theorem1_limit(1.0, 0.0).is_err());
    }

    #[test]
    fn poly_limit_examples() {
        for gamma in [0.25, 1.0, 3.0] {
            assert_eq!(poly_limit_cdf(0.0, gamma, 0.7), 0.5);
        }
        for i in -50..=50 {
            let s = i as f64 / 10.0;
            assert_abs_diff_eq!(poly_limit_cdf(s, 1.0, 1.3), phi(s / 1.3), epsilon = 1e-12);
        }
        assert_eq!(poly_limit_cdf(1.0, 2.0, 1.0), phi(1.0));
    }

    #[test]
    fn log_limit_examples() {
        assert_eq!(log_limit_cdf(0.0), CdfValue::Point(0.5));
        assert_eq!(log_limit_cdf(-2.0), CdfValue::Point(0.0));
        assert_eq!(log_limit_cdf(3.0), CdfValue::Point(1.0));
        assert_eq!(log_limit_cdf(1.0), CdfValue::Jump { left: 0.5, right: 1.0 });
        assert_eq!(log_limit_cdf(-1.0), CdfValue::Jump { left: 0.0, right: 0.5 });
    }

    #[test]
    fn exp_masses_examples() {
        let (a, b, c) = exp_limit_masses(50.0, 1.0).unwrap();
        assert_eq!((a, b, c), (0.0, 1.0, 0.0));
        let (a, b, c) = exp_limit_masses(1.3, 1.3).unwrap();
        assert_abs_diff_eq!(a, 0.158_655_253_931_457_05, epsilon = 1e-14);
        assert_abs_diff_eq!(b, 0.682_689_492_137_085_9, epsilon = 1e-14);
        assert_eq!(a, c);
        assert_abs_diff_eq!(a + b + c, 1.0, epsilon = 1e-12);
        assert!(exp_limit_masses(0.0, 1.0).is_err());
    }

    #[test]
    fn cdfs_are_monotone_with_correct_limits() {
        let laws = [
            LimitLaw::Theorem1 { sigma: 0.8 },
            LimitLaw::PolyT { gamma: 0.5, sigma: 1.0 },
            LimitLaw::PolyT { gamma: 3.0, sigma: 2.0 },
            LimitLaw::LogPm1,
            LimitLaw::ExpMass { c: 1.0, sigma: 1.0 },
        ];
        for law in laws {
            let mut prev = 0.0;
            for i in 0..1000 {
                let s = -50.0 + 100.0 * i as f64 / 999.0;
                let v = law.cdf(s).value();
                assert!(v >= prev, "{law:?} at {s}");
                assert!((0.0..=1.0).contains(&v));
                prev = v;
            }
            if !matches!(law, LimitLaw::ExpMass { .. }) {
                assert!(law.cdf(-1e6).value() <= 1e-12);
                assert!(law.cdf(1e6).value() >= 1.0 - 1e-12);
            }
        }
    }
}
