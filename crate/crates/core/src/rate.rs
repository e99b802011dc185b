//! Rate functions `f` and their inverses `g = f⁻¹`.
//!
//! A [`RateFunction`] is a strictly increasing map `f: [0, b] → [0, B]` with
//! `f(0) = 0`. The built-in families cover polynomial, logarithmic and
//! exponential rates; custom functions must come with their own inverse.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Hard cap on `B = f(b)`: the polar curve stays single-valued on `[-B, B]`.
pub const MAX_BOUND: f64 = FRAC_PI_2;

/// Fraction of the admissible range used when no `b` is given.
pub const DEFAULT_BOUND_FRACTION: f64 = 0.9;

/// Floor on `y` for the polynomial and logarithmic families.
pub const GUARD_FLOOR: f64 = 1e-150;

/// Smallest value of `f` considered representable.
pub const F_FLOOR: f64 = 1e-300;

/// Tolerance factor of the round trip `|g(f(y)) - y| <= ROUND_TRIP_TOL (1 + y)`.
pub const ROUND_TRIP_TOL: f64 = 1e-12;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `f(y) = y^γ`
    Poly,
    /// `f(y) = (-log y)^(-γ)`
    Log,
    /// `f(y) = exp(-y^(-γ))`
    Exp,
    Custom,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Poly => "poly",
            Family::Log => "log",
            Family::Exp => "exp",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone)]
pub struct RateFunction {
    family: Family,
    gamma: f64,
    b: f64,
    bound: f64,
    y_min: f64,
    custom: Option<(ScalarFn, ScalarFn)>,
}

impl fmt::Debug for RateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RateFunction")
            .field("family", &self.family)
            .field("gamma", &self.gamma)
            .field("b", &self.b)
            .field("bound", &self.bound)
            .field("y_min", &self.y_min)
            .finish()
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, value, "must be positive and finite"))
    }
}

fn check_bound(bound: f64) -> Result<()> {
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::param("B", bound, "f(b) must be positive and finite"));
    }
    if bound > MAX_BOUND {
        return Err(Error::param("B", bound, "f(b) must not exceed pi/2"));
    }
    Ok(())
}

impl RateFunction {
    /// `f(y) = y^γ`, `g(x) = x^(1/γ)`.
    pub fn poly(gamma: f64, b: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        check_positive("b", b)?;
        let bound = b.powf(gamma);
        check_bound(bound)?;
        Ok(Self {
            family: Family::Poly,
            gamma,
            b,
            bound,
            y_min: GUARD_FLOOR,
            custom: None,
        })
    }

    /// `f(y) = (-log y)^(-γ)`, `g(x) = exp(-x^(-1/γ))`; requires `0 < b < 1`.
    pub fn log(gamma: f64, b: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        check_positive("b", b)?;
        if b >= 1.0 {
            return Err(Error::param("b", b, "log family needs b < 1"));
        }
        let bound = (-b.ln()).powf(-gamma);
        check_bound(bound)?;
        Ok(Self {
            family: Family::Log,
            gamma,
            b,
            bound,
            y_min: GUARD_FLOOR,
            custom: None,
        })
    }

    /// `f(y) = exp(-y^(-γ))`, `g(x) = (-log x)^(-1/γ)`.
    pub fn exp(gamma: f64, b: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        check_positive("b", b)?;
        let bound = (-b.powf(-gamma)).exp();
        check_bound(bound)?;
        Ok(Self {
            family: Family::Exp,
            gamma,
            b,
            bound,
            // exp(-690) ~ 2.9e-300 is the last value above F_FLOOR
            y_min: 690f64.powf(-1.0 / gamma),
            custom: None,
        })
    }

    /// Caller-supplied `f` and its inverse `g`. Nothing is checked beyond the
    /// range cap; run [`RateFunction::validate`] to test monotonicity and the
    /// round trip.
    pub fn custom(f: ScalarFn, g: ScalarFn, b: f64) -> Result<Self> {
        check_positive("b", b)?;
        let bound = f(b);
        check_bound(bound)?;
        Ok(Self {
            family: Family::Custom,
            gamma: 1.0,
            b,
            bound,
            y_min: 0.0,
            custom: Some((f, g)),
        })
    }

    /// Built-in family with `b` chosen so that `B` uses
    /// [`DEFAULT_BOUND_FRACTION`] of `min(sup f, π/2)`.
    pub fn with_default_b(family: Family, gamma: f64) -> Result<Self> {
        let b = Self::default_b(family, gamma)?;
        match family {
            Family::Poly => Self::poly(gamma, b),
            Family::Log => Self::log(gamma, b),
            Family::Exp => Self::exp(gamma, b),
            Family::Custom => unreachable!(),
        }
    }

    pub fn default_b(family: Family, gamma: f64) -> Result<f64> {
        check_positive("gamma", gamma)?;
        let target = DEFAULT_BOUND_FRACTION * MAX_BOUND;
        match family {
            Family::Poly => Ok(target.powf(1.0 / gamma)),
            Family::Log => Ok((-target.powf(-1.0 / gamma)).exp()),
            // sup f = 1 < π/2
            Family::Exp => Ok((-DEFAULT_BOUND_FRACTION.ln()).powf(-1.0 / gamma)),
            Family::Custom => Err(Error::Unsupported("custom rate functions have no default b")),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Right end of the domain of `f`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// `B = f(b)`: right end of the domain of `g` and of the curve parameter.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Underflow floor: `f(y)` is reported as exactly 0 below it.
    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn f(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y < self.y_min {
            return 0.0;
        }
        let gamma = self.gamma;
        match self.family {
            Family::Poly => y.powf(gamma),
            Family::Log => (-y.ln()).powf(-gamma),
            Family::Exp => (-y.powf(-gamma)).exp(),
            Family::Custom => (self.custom.as_ref().unwrap().0)(y),
        }
    }

    pub fn g(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let gamma = self.gamma;
        match self.family {
            Family::Poly => x.powf(1.0 / gamma),
            Family::Log => (-x.powf(-1.0 / gamma)).exp(),
            Family::Exp => (-x.ln()).powf(-1.0 / gamma),
            Family::Custom => (self.custom.as_ref().unwrap().1)(x),
        }
    }

    /// `g'(x)` for `x > 0`; built-in families only.
    pub fn g_derivative(&self, x: f64) -> Result<f64> {
        let inv = 1.0 / self.gamma;
        match self.family {
            Family::Poly => Ok(inv * x.powf(inv - 1.0)),
            Family::Log => {
                if x <= 0.0 {
                    return Ok(0.0);
                }
                Ok(self.g(x) * inv * x.powf(-inv - 1.0))
            }
            Family::Exp => {
                let l = -x.ln();
                Ok(inv * l.powf(-inv - 1.0) / x)
            }
            Family::Custom => Err(Error::Unsupported("g' of a custom rate function")),
        }
    }

    /// Checks the rate-function invariants on a grid of `grid_size` points:
    /// one uniform grid on `[0, b]` and one log-spaced grid on `[y_min, b]`.
    pub fn validate(&self, grid_size: usize) -> ValidationReport {
        let grid_size = grid_size.max(16);
        let lo = self.y_min.max(GUARD_FLOOR);
        let mut grid: Vec<f64> = (0..grid_size)
            .map(|i| self.b * i as f64 / (grid_size - 1) as f64)
            .collect();
        let (llo, lhi) = (lo.ln(), self.b.ln());
        let log_grid: Vec<f64> = (0..grid_size)
            .map(|i| (llo + (lhi - llo) * i as f64 / (grid_size - 1) as f64).exp())
            .collect();

        let mut report = ValidationReport {
            f_zero: self.f(0.0),
            g_zero: self.g(0.0),
            ..ValidationReport::default()
        };

        for points in [&grid, &log_grid] {
            for w in points.windows(2) {
                let (y1, y2) = (w[0], w[1]);
                // values below the floor are pinned to 0 on purpose
                if y2 < self.y_min || self.f(y2) < F_FLOOR {
                    continue;
                }
                if !(self.f(y1) < self.f(y2)) {
                    report.monotonicity_violations.push((y1, y2));
                }
            }
        }

        grid.extend_from_slice(&log_grid);
        for &y in grid.iter().filter(|&&y| y >= self.y_min && y > 0.0 && self.f(y) >= F_FLOOR) {
            let err = (self.g(self.f(y)) - y).abs() / (1.0 + y);
            if !(err <= report.worst_round_trip) {
                report.worst_round_trip = err;
                report.worst_round_trip_at = y;
            }
        }
        report.bound_ok = self.f(self.b) <= MAX_BOUND;
        report
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Consecutive grid pairs `(y1, y2)` with `f(y1) >= f(y2)`.
    pub monotonicity_violations: Vec<(f64, f64)>,
    /// Largest `|g(f(y)) - y| / (1 + y)` over the grid.
    pub worst_round_trip: f64,
    pub worst_round_trip_at: f64,
    pub f_zero: f64,
    pub g_zero: f64,
    pub bound_ok: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.monotonicity_violations.is_empty()
            && self.worst_round_trip <= ROUND_TRIP_TOL
            && self.f_zero == 0.0
            && self.g_zero == 0.0
            && self.bound_ok
    }
}
