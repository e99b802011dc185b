//! Deterministic checks of the small-scale behavior of rate functions and
//! projections: the perturbation ratios behind the regularity assumptions,
//! `g(t_y)/y` and `t_y/f(y)` traces, multiplicities on the negative x-axis,
//! and the linearization of the offset circle.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::{Curve, PlanarPoint};
use crate::error::{Error, Result};
use crate::projection::project;
use crate::rate::{RateFunction, F_FLOOR};

/// Largest admissible relative deviation `|ratio/target − 1|` for a
/// converging verdict.
pub const RATIO_TOL: f64 = 0.05;
/// Number of trailing points whose deviations must not grow.
pub const MONOTONE_WINDOW: usize = 4;
/// Smallest `f(y)` admitted into a default sequence; keeps perturbed values
/// and ratios away from the subnormal range.
pub const ADMISSIBLE_F: f64 = 1e-290;
/// Deepest dyadic level of the default sequences.
pub const MAX_DYADIC_LEVEL: i32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converging,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// `(y, ratio)` pairs with strictly decreasing `y`, judged against `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioTrace {
    pub points: Vec<(f64, f64)>,
    pub target: f64,
    pub verdict: Verdict,
}

impl RatioTrace {
    pub fn new(points: Vec<(f64, f64)>, target: f64) -> Self {
        let verdict = judge(&points, target);
        Self {
            points,
            target,
            verdict,
        }
    }

    pub fn deviations(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(move |&(_, r)| relative_deviation(r, self.target))
    }

    pub fn last_ratio(&self) -> Option<f64> {
        self.points.last().map(|&(_, r)| r)
    }

    pub fn last_deviation(&self) -> Option<f64> {
        self.last_ratio().map(|r| relative_deviation(r, self.target))
    }

    /// Same ratios judged against another limit.
    pub fn retarget(&self, target: f64) -> Self {
        Self::new(self.points.clone(), target)
    }
}

fn relative_deviation(ratio: f64, target: f64) -> f64 {
    (ratio / target - 1.0).abs()
}

fn judge(points: &[(f64, f64)], target: f64) -> Verdict {
    if points.len() < MONOTONE_WINDOW {
        return Verdict::Inconclusive;
    }
    let devs: Vec<f64> = points[points.len() - MONOTONE_WINDOW..]
        .iter()
        .map(|&(_, r)| relative_deviation(r, target))
        .collect();
    if devs.iter().any(|d| !d.is_finite()) {
        return Verdict::Inconclusive;
    }
    let last = devs[devs.len() - 1];
    // ties are allowed: ratios can saturate at a rounding-level deviation
    let shrinking = devs.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-15);
    let growing = devs.windows(2).all(|w| w[1] >= w[0]);
    if last <= RATIO_TOL && shrinking {
        Verdict::Converging
    } else if last > RATIO_TOL && growing {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    }
}

/// `y = 2^{−k}` for `k = 4, …, 60`, keeping only values with `y ≥ y_min`,
/// `y < b` and `f(y) ≥ 1e-290`.
pub fn dyadic_sequence(rf: &RateFunction) -> Vec<f64> {
    (4..=MAX_DYADIC_LEVEL)
        .map(|k| 2f64.powi(-k))
        .filter(|&y| y >= rf.y_min() && y < rf.b() && rf.f(y) >= ADMISSIBLE_F)
        .collect()
}

fn check_sequence(y_sequence: &[f64]) -> Result<()> {
    if y_sequence.is_empty() {
        return Err(Error::param("y_sequence", 0.0, "must not be empty"));
    }
    for w in y_sequence.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::param("y_sequence", w[1], "must be strictly decreasing"));
        }
    }
    Ok(())
}

fn perturbation_trace<P: Fn(f64, f64) -> f64>(
    rf: &RateFunction,
    y_sequence: &[f64],
    target: f64,
    perturb: P,
) -> Result<RatioTrace> {
    check_sequence(y_sequence)?;
    let mut points = Vec::with_capacity(y_sequence.len());
    for &y in y_sequence {
        if y < rf.y_min() || y > rf.b() {
            return Err(Error::OutOfDomain {
                value: y,
                lower: rf.y_min(),
                upper: rf.b(),
            });
        }
        let fy = rf.f(y);
        let shifted = perturb(y, fy);
        if !(0.0..=rf.b()).contains(&shifted) {
            return Err(Error::OutOfDomain {
                value: shifted,
                lower: 0.0,
                upper: rf.b(),
            });
        }
        points.push((y, rf.f(shifted) / fy));
    }
    Ok(RatioTrace::new(points, target))
}

/// Ratios `f(y + c y (y + f(y))) / f(y)` judged against 1.
pub fn check_a1(rf: &RateFunction, c: f64, y_sequence: &[f64]) -> Result<RatioTrace> {
    perturbation_trace(rf, y_sequence, 1.0, |y, fy| y + c * y * (y + fy))
}

/// Ratios `f(y + c y f(y) (y + f(y))) / f(y)` judged against 1.
pub fn check_a1_prime(rf: &RateFunction, c: f64, y_sequence: &[f64]) -> Result<RatioTrace> {
    perturbation_trace(rf, y_sequence, 1.0, |y, fy| y + c * y * fy * (y + fy))
}

/// Where the probe point sits for a given `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeLine {
    /// `z = (0, y)`
    Vertical,
    /// `z = (y, y)`
    Diagonal,
}

impl ProbeLine {
    pub fn point(self, y: f64) -> PlanarPoint {
        match self {
            ProbeLine::Vertical => PlanarPoint::new(0.0, y),
            ProbeLine::Diagonal => PlanarPoint::new(y, y),
        }
    }
}

/// One projected probe: `t_y`, `g(t_y)/y` and `t_y/f(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionSample {
    pub y: f64,
    pub t_y: f64,
    pub g_ratio: f64,
    pub f_ratio: f64,
}

/// Projects `(0, y)` or `(y, y)` for every `y` and tabulates how `t_y`
/// compares with `f(y)` on the parameter and rate scales.
pub fn projection_ratios(
    curve: &Curve,
    rf: &RateFunction,
    line: ProbeLine,
    y_sequence: &[f64],
) -> Result<Vec<ProjectionSample>> {
    check_sequence(y_sequence)?;
    if y_sequence.iter().any(|&y| y <= 0.0) {
        return Err(Error::param("y", y_sequence[y_sequence.len() - 1], "must be positive"));
    }
    let g_of = |t: f64| curve.signed_g(t).ok_or(Error::Unsupported("curve has no rate scale"));
    y_sequence
        .iter()
        .map(|&y| {
            let t_y = project(curve, line.point(y)).t_star;
            let fy = rf.f(y);
            Ok(ProjectionSample {
                y,
                t_y,
                g_ratio: g_of(t_y)? / y,
                f_ratio: if fy >= F_FLOOR { t_y / fy } else { f64::NAN },
            })
        })
        .collect()
}

/// `g(t_y)/y` against 1.
pub fn g_ratio_trace(samples: &[ProjectionSample]) -> RatioTrace {
    RatioTrace::new(samples.iter().map(|s| (s.y, s.g_ratio)).collect(), 1.0)
}

/// `t_y/f(y)` against `target`.
pub fn parameter_trace(samples: &[ProjectionSample], target: f64) -> RatioTrace {
    RatioTrace::new(samples.iter().map(|s| (s.y, s.f_ratio)).collect(), target)
}

/// Projection of `(−δ, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MedialProbe {
    pub delta: f64,
    pub multiplicity: usize,
    /// Ascending.
    pub minimizers: Vec<f64>,
    pub degenerate: bool,
}

/// Projects `(−δ, 0)` for each `δ ∈ (0, 0.5]`; a multiplicity above 1 puts
/// the probe on the medial axis.
pub fn probe_medial_axis(curve: &Curve, deltas: &[f64]) -> Result<Vec<MedialProbe>> {
    deltas
        .iter()
        .map(|&delta| {
            if !(delta > 0.0 && delta <= 0.5) {
                return Err(Error::OutOfDomain {
                    value: delta,
                    lower: 0.0,
                    upper: 0.5,
                });
            }
            let res = project(curve, PlanarPoint::new(-delta, 0.0));
            let minimizers = if res.all_minimizers.is_empty() {
                alloc::vec![res.t_star]
            } else {
                res.all_minimizers.clone()
            };
            Ok(MedialProbe {
                delta,
                multiplicity: res.multiplicity,
                minimizers,
                degenerate: res.degenerate,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleExpansionRow {
    pub t: f64,
    /// `ṙ(t)` of the offset circle.
    pub g: f64,
    /// `δ/(δ+1) · t`
    pub linear: f64,
    /// `g/linear`; 1 for `δ = 0` where both vanish.
    pub ratio: f64,
}

/// `ṙ(t)` of the circle through `(1, 0)` centered at `(−δ, 0)` against its
/// linear term.
pub fn circle_g_expansion(delta: f64, t_list: &[f64]) -> Result<Vec<CircleExpansionRow>> {
    let curve = Curve::circle(delta)?;
    t_list
        .iter()
        .map(|&t| {
            if !(t > 0.0 && t <= 0.5) {
                return Err(Error::OutOfDomain {
                    value: t,
                    lower: 0.0,
                    upper: 0.5,
                });
            }
            let g = curve.signed_g(t).unwrap_or(0.0);
            let linear = delta / (delta + 1.0) * t;
            let ratio = if delta == 0.0 { 1.0 } else { g / linear };
            Ok(CircleExpansionRow { t, g, linear, ratio })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::Family;
    use approx::assert_abs_diff_eq;

    fn rf(family: Family, gamma: f64) -> RateFunction {
        RateFunction::with_default_b(family, gamma).unwrap()
    }

    #[test]
    fn a1_examples() {
        let poly = rf(Family::Poly, 2.0);
        let t = check_a1(&poly, 1.0, &dyadic_sequence(&poly)).unwrap();
        assert_eq!(t.verdict, Verdict::Converging);
        let log = rf(Family::Log, 1.0);
        let t = check_a1(&log, 5.0, &dyadic_sequence(&log)).unwrap();
        assert_eq!(t.verdict, Verdict::Converging);
    }

    #[test]
    fn exp_a1_tends_to_e_to_the_c() {
        let exp = rf(Family::Exp, 1.0);
        let coarse = check_a1(&exp, 1.0, &[0.05, 0.02, 0.01]).unwrap();
        // exp(1/y − 1/(y + y² + y f)) at y = 0.01
        let y: f64 = 0.01;
        let expected = (1.0 / y - 1.0 / (y + y * y + y * exp.f(y))).exp();
        assert_abs_diff_eq!(coarse.last_ratio().unwrap(), expected, epsilon = 1e-9);
        assert!((coarse.last_ratio().unwrap() - core::f64::consts::E).abs() < 0.05);
        for c in [1.0, 2.0] {
            let trace = check_a1(&exp, c, &dyadic_sequence(&exp)).unwrap();
            assert_ne!(trace.verdict, Verdict::Converging);
            assert_eq!(trace.retarget(c.exp()).verdict, Verdict::Converging);
        }
    }

    #[test]
    fn a1_prime_examples() {
        for (family, gamma, c) in [(Family::Exp, 1.0, 1.0), (Family::Poly, 1.0, 3.0), (Family::Log, 2.0, -2.0)] {
            let r = rf(family, gamma);
            let t = check_a1_prime(&r, c, &dyadic_sequence(&r)).unwrap();
            assert_eq!(t.verdict, Verdict::Converging, "{family:?}");
        }
    }

    #[test]
    fn a1_implies_a1_prime() {
        for (family, gamma) in [(Family::Poly, 0.5), (Family::Poly, 3.0), (Family::Log, 1.0), (Family::Log, 2.0)] {
            let r = rf(family, gamma);
            let ys = dyadic_sequence(&r);
            for c in [-1.0, 1.0, 2.0] {
                if check_a1(&r, c, &ys).unwrap().verdict == Verdict::Converging {
                    assert_eq!(check_a1_prime(&r, c, &ys).unwrap().verdict, Verdict::Converging);
                }
            }
        }
    }

    #[test]
    fn perturbation_leaving_domain_is_rejected() {
        let poly = rf(Family::Poly, 1.0);
        assert!(matches!(check_a1(&poly, -100.0, &[0.5]), Err(Error::OutOfDomain { .. })));
        assert!(check_a1(&poly, 1.0, &[0.01, 0.02]).is_err());
        assert!(check_a1(&poly, 1.0, &[]).is_err());
    }

    #[test]
    fn verdict_rules() {
        let pts = |r: &[f64]| r.iter().enumerate().map(|(i, &v)| (1.0 / (i + 1) as f64, v)).collect::<Vec<_>>();
        assert_eq!(RatioTrace::new(pts(&[1.2, 1.1, 1.04, 1.01]), 1.0).verdict, Verdict::Converging);
        assert_eq!(RatioTrace::new(pts(&[1.01, 1.02, 1.04, 1.1]), 1.0).verdict, Verdict::Diverging);
        assert_eq!(RatioTrace::new(pts(&[1.0, 1.03, 1.0, 1.01]), 1.0).verdict, Verdict::Inconclusive);
        assert_eq!(RatioTrace::new(pts(&[1.0, 1.0]), 1.0).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn dyadic_sequence_is_admissible() {
        let exp = rf(Family::Exp, 1.0);
        let ys = dyadic_sequence(&exp);
        assert_eq!(ys.first(), Some(&0.0625));
        assert!(ys.iter().all(|&y| exp.f(y) >= ADMISSIBLE_F));
        assert!(*ys.last().unwrap() > 1.0 / 690.0);
        assert_eq!(dyadic_sequence(&rf(Family::Poly, 2.0)).len(), 57);
    }

    #[test]
    fn reach_dichotomy() {
        for (gamma, mult) in [(0.25, 2), (0.5, 2), (2.0, 1), (4.0, 1)] {
            let curve = Curve::qcurve(rf(Family::Poly, gamma));
            let probe = &probe_medial_axis(&curve, &[0.01]).unwrap()[0];
            assert_eq!(probe.multiplicity, mult, "γ = {gamma}");
            if mult == 2 {
                assert_abs_diff_eq!(probe.minimizers[0], -probe.minimizers[1], epsilon = 1e-10);
            } else {
                assert_eq!(probe.minimizers, [0.0]);
            }
        }
    }

    #[test]
    fn circle_center_is_degenerate() {
        let curve = Curve::circle(0.3).unwrap();
        let probe = &probe_medial_axis(&curve, &[0.3]).unwrap()[0];
        assert!(probe.degenerate);
        assert!(probe_medial_axis(&curve, &[0.6]).is_err());
    }

    #[test]
    fn circle_expansion() {
        let rows = circle_g_expansion(0.3, &[0.01]).unwrap();
        assert!((rows[0].ratio - 1.0).abs() < 0.02);
        let ts: Vec<f64> = (1..=12).map(|k| 2f64.powi(-k)).collect();
        let rows = circle_g_expansion(0.3, &ts).unwrap();
        for w in rows.windows(2) {
            assert!((w[1].ratio - 1.0).abs() <= (w[0].ratio - 1.0).abs());
        }
        for row in circle_g_expansion(0.0, &ts).unwrap() {
            assert_eq!(row.g, 0.0);
            assert_eq!(row.ratio, 1.0);
        }
        assert!(circle_g_expansion(0.3, &[0.0]).is_err());
    }

    #[test]
    fn g_ratio_poly() {
        let r = rf(Family::Poly, 2.0);
        let curve = Curve::qcurve(r.clone());
        let samples = projection_ratios(&curve, &r, ProbeLine::Diagonal, &dyadic_sequence(&r)).unwrap();
        let g_trace = g_ratio_trace(&samples);
        assert_eq!(g_trace.verdict, Verdict::Converging);
        assert!(g_trace.last_deviation().unwrap() < 1e-6);
        assert_eq!(parameter_trace(&samples, 1.0).verdict, Verdict::Converging);
    }
}
