//! Planar curves built from a rate function, plus the circle and kink
//! reference sets.
//!
//! The main construction is the polar curve `q(t) = r(|t|) (cos t, sin t)`
//! for `t ∈ [-B, B]` with `r(t) = 1 + ∫₀ᵗ g`. Every curve passes through
//! `(1, 0)` at `t = 0` and is symmetric under reflection in the x-axis.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, CumulativeTable, DEFAULT_MAX_DEPTH};
use crate::rate::{Family, RateFunction};

/// Half the number of intervals of the coarse scan grid used by the
/// projection; the grid has `2 * SCAN_HALF + 1` nodes and contains `t = 0`.
pub const SCAN_HALF: usize = 1024;

/// Default parameter window of the kink curve.
pub const KINK_DEFAULT_RANGE: f64 = 10.0;

const ARC_LENGTH_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist2(self, other: PlanarPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn mirrored(self) -> Self {
        Self::new(self.x, -self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Which one-sided limit to take where the curve is only piecewise smooth
/// (at `t = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Polar curve `r(|t|) (cos t, sin t)`.
    QCurve,
    /// `(1 + |t| g(|t|), t)`.
    SimpleQCurve,
    /// Circle of radius `1 + δ` centered at `(-δ, 0)`, in polar form about the origin.
    Circle,
    /// `(1 + |t|, t)`: the sticky corner.
    Kink,
}

#[derive(Debug, Clone)]
enum Shape {
    Polar(RateFunction),
    Simple(RateFunction),
    Circle { delta: f64 },
    Kink,
}

#[derive(Debug, Clone)]
pub struct Curve {
    shape: Shape,
    half_range: f64,
    table: Option<CumulativeTable>,
    scan_nodes: Vec<f64>,
    scan_points: Vec<PlanarPoint>,
}

impl Curve {
    /// The polar curve of `rf` on `[-B, B]`.
    pub fn qcurve(rf: RateFunction) -> Self {
        let half_range = rf.bound();
        let table = match rf.family() {
            Family::Poly => None,
            _ => Some(CumulativeTable::new(
                &|x| rf.g(x),
                half_range,
                CumulativeTable::DEFAULT_NODES,
                CumulativeTable::DEFAULT_TOL,
            )),
        };
        Self::assemble(Shape::Polar(rf), half_range, table)
    }

    /// The graph-type curve `(1 + |t| g(|t|), t)`. Only offered where it
    /// reproduces the polar construction near `t = 0`: polynomial rates
    /// with `γ > 1` and the logarithmic family.
    pub fn simple_qcurve(rf: RateFunction) -> Result<Self> {
        match rf.family() {
            Family::Poly if rf.gamma() > 1.0 => {}
            Family::Log => {}
            Family::Poly => {
                return Err(Error::param(
                    "gamma",
                    rf.gamma(),
                    "simple construction needs gamma > 1 for the poly family",
                ))
            }
            _ => {
                return Err(Error::Unsupported(
                    "simple construction only for poly (gamma > 1) and log families",
                ))
            }
        }
        let half_range = rf.bound();
        Ok(Self::assemble(Shape::Simple(rf), half_range, None))
    }

    /// Circle through `(1, 0)` with center `(-δ, 0)`, parametrized by the
    /// polar angle on `[-π, π]`.
    pub fn circle(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::param("delta", delta, "must be finite and nonnegative"));
        }
        Ok(Self::assemble(
            Shape::Circle { delta },
            core::f64::consts::PI,
            None,
        ))
    }

    pub fn kink() -> Self {
        Self::assemble(Shape::Kink, KINK_DEFAULT_RANGE, None)
    }

    pub fn kink_with_range(half_range: f64) -> Result<Self> {
        if !(half_range.is_finite() && half_range > 0.0) {
            return Err(Error::param("B", half_range, "must be positive and finite"));
        }
        Ok(Self::assemble(Shape::Kink, half_range, None))
    }

    fn assemble(shape: Shape, half_range: f64, table: Option<CumulativeTable>) -> Self {
        let mut curve = Self {
            shape,
            half_range,
            table,
            scan_nodes: Vec::new(),
            scan_points: Vec::new(),
        };
        let n = SCAN_HALF as f64;
        curve.scan_nodes = (0..=2 * SCAN_HALF)
            .map(|i| half_range * (i as f64 - n) / n)
            .collect();
        curve.scan_points = curve
            .scan_nodes
            .iter()
            .map(|&t| curve.point_unchecked(t))
            .collect();
        curve
    }

    pub fn kind(&self) -> CurveKind {
        match self.shape {
            Shape::Polar(_) => CurveKind::QCurve,
            Shape::Simple(_) => CurveKind::SimpleQCurve,
            Shape::Circle { .. } => CurveKind::Circle,
            Shape::Kink => CurveKind::Kink,
        }
    }

    pub fn rate(&self) -> Option<&RateFunction> {
        match &self.shape {
            Shape::Polar(rf) | Shape::Simple(rf) => Some(rf),
            _ => None,
        }
    }

    pub fn delta(&self) -> Option<f64> {
        match self.shape {
            Shape::Circle { delta } => Some(delta),
            _ => None,
        }
    }

    /// `B`: the parameter ranges over `[-B, B]`.
    pub fn half_range(&self) -> f64 {
        self.half_range
    }

    /// Coarse scan grid: parameters and the matching curve points.
    pub fn scan(&self) -> (&[f64], &[PlanarPoint]) {
        (&self.scan_nodes, &self.scan_points)
    }

    fn check_param(&self, t: f64) -> Result<()> {
        Error::check_range(t, -self.half_range, self.half_range)
    }

    /// Distance of `q(t)` from the origin for `t ∈ [0, B]`; for the polar
    /// kinds this is `r(t)`.
    pub fn radius(&self, t: f64) -> Result<f64> {
        Error::check_range(t, 0.0, self.half_range)?;
        Ok(self.radius_unchecked(t))
    }

    pub(crate) fn radius_unchecked(&self, a: f64) -> f64 {
        match &self.shape {
            Shape::Polar(rf) => self.polar_radius(rf, a),
            Shape::Circle { delta } => circle_radius(*delta, a),
            Shape::Simple(_) | Shape::Kink => self.point_unchecked(a).norm(),
        }
    }

    fn polar_radius(&self, rf: &RateFunction, a: f64) -> f64 {
        match &self.table {
            None => {
                let gamma = rf.gamma();
                1.0 + gamma / (1.0 + gamma) * a.powf((1.0 + gamma) / gamma)
            }
            Some(table) => 1.0 + table.integral_to(&|x| rf.g(x), a),
        }
    }

    /// `ṙ(a)` for `a ≥ 0` on the polar kinds.
    fn growth(&self, a: f64) -> f64 {
        match &self.shape {
            Shape::Polar(rf) | Shape::Simple(rf) => rf.g(a),
            Shape::Circle { delta } => circle_growth(*delta, a),
            Shape::Kink => 1.0,
        }
    }

    /// The rate-scale image of a parameter: `sgn(t) g(|t|)` for curves built
    /// from a rate function and `ṙ(t)` for the circle. `None` for the kink.
    pub fn signed_g(&self, t: f64) -> Option<f64> {
        match &self.shape {
            Shape::Kink => None,
            _ => {
                let v = self.growth(t.abs());
                Some(if t < 0.0 { -v } else { v })
            }
        }
    }

    pub fn point(&self, t: f64) -> Result<PlanarPoint> {
        self.check_param(t)?;
        Ok(self.point_unchecked(t))
    }

    pub(crate) fn point_unchecked(&self, t: f64) -> PlanarPoint {
        let a = t.abs();
        match &self.shape {
            Shape::Polar(_) | Shape::Circle { .. } => {
                let r = self.radius_unchecked(a);
                let (s, c) = t.sin_cos();
                PlanarPoint::new(r * c, r * s)
            }
            Shape::Simple(rf) => PlanarPoint::new(1.0 + a * rf.g(a), t),
            Shape::Kink => PlanarPoint::new(1.0 + a, t),
        }
    }

    /// `q̇(t)`; at `t = 0` the one-sided derivative selected by `side`.
    pub fn tangent(&self, t: f64, side: Side) -> Result<PlanarPoint> {
        self.check_param(t)?;
        Ok(self.tangent_unchecked(t, side))
    }

    pub(crate) fn tangent_unchecked(&self, t: f64, side: Side) -> PlanarPoint {
        let sign = param_sign(t, side);
        let a = t.abs();
        match &self.shape {
            Shape::Polar(_) | Shape::Circle { .. } => {
                let r = self.radius_unchecked(a);
                let rd = sign * self.growth(a);
                let (s, c) = t.sin_cos();
                PlanarPoint::new(rd * c - r * s, rd * s + r * c)
            }
            Shape::Simple(rf) => {
                let dg = if a > 0.0 {
                    rf.g_derivative(a).unwrap_or(0.0)
                } else {
                    0.0
                };
                PlanarPoint::new(sign * (rf.g(a) + a * dg), 1.0)
            }
            Shape::Kink => PlanarPoint::new(sign, 1.0),
        }
    }

    /// `‖q̇(t)‖`, right-sided at `t = 0`.
    pub fn speed(&self, t: f64) -> Result<f64> {
        self.check_param(t)?;
        Ok(self.tangent_unchecked(t, Side::Right).norm())
    }

    /// Signed arc length `∫₀ᵗ ‖q̇‖`.
    pub fn arc_length(&self, t: f64) -> Result<f64> {
        self.check_param(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let side = if t > 0.0 { Side::Right } else { Side::Left };
        let speed = |u: f64| self.tangent_unchecked(u, side).norm();
        let (lo, hi) = if t > 0.0 { (0.0, t) } else { (t, 0.0) };
        let len = adaptive_simpson(&speed, lo, hi, ARC_LENGTH_TOL, DEFAULT_MAX_DEPTH);
        Ok(if t > 0.0 { len } else { -len })
    }

    /// `ℓ(t) = ‖q(t) − z‖²`.
    pub fn loss(&self, z: PlanarPoint, t: f64) -> Result<f64> {
        self.check_param(t)?;
        Ok(self.point_unchecked(t).dist2(z))
    }

    /// `ℓ̇(t)`; right-sided at `t = 0`.
    pub fn loss_derivative(&self, z: PlanarPoint, t: f64) -> Result<f64> {
        self.check_param(t)?;
        Ok(self.loss_derivative_unchecked(z, t, Side::Right))
    }

    pub fn loss_derivative_sided(&self, z: PlanarPoint, t: f64, side: Side) -> Result<f64> {
        self.check_param(t)?;
        Ok(self.loss_derivative_unchecked(z, t, side))
    }

    pub(crate) fn loss_derivative_unchecked(&self, z: PlanarPoint, t: f64, side: Side) -> f64 {
        match &self.shape {
            Shape::Polar(_) | Shape::Circle { .. } => {
                let a = t.abs();
                let r = self.radius_unchecked(a);
                let rd = param_sign(t, side) * self.growth(a);
                let (s, c) = t.sin_cos();
                2.0 * (r * rd - z.x * (c * rd - s * r) - z.y * (s * rd + c * r))
            }
            Shape::Simple(_) | Shape::Kink => {
                let q = self.point_unchecked(t);
                let d = self.tangent_unchecked(t, side);
                2.0 * ((q.x - z.x) * d.x + (q.y - z.y) * d.y)
            }
        }
    }
}

fn param_sign(t: f64, side: Side) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        match side {
            Side::Right => 1.0,
            Side::Left => -1.0,
        }
    }
}

fn circle_radius(delta: f64, t: f64) -> f64 {
    let c = t.cos();
    (c * c * delta * delta + 2.0 * delta + 1.0).sqrt() - c * delta
}

fn circle_growth(delta: f64, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    delta * s - c * s * delta * delta / (c * c * delta * delta + 2.0 * delta + 1.0).sqrt()
}
