//! Nearest-point projection onto a [`Curve`].
//!
//! `Π(z) = q(t*)` with `t*` a global minimizer of `ℓ(t) = ‖q(t) − z‖²` on
//! `[-B, B]`. The solver scans `ℓ` on the curve's coarse grid, brackets every
//! discrete local minimum and refines it by bisection on the sign of `ℓ̇`.
//! Brackets touching `t = 0` are split there and refined in `log |t|`, so
//! minimizers as small as `1e-300` are located to full relative precision.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::{Curve, PlanarPoint, Side};
use crate::error::Result;

/// Absolute parameter tolerance of linear bisection.
pub const PARAM_TOL: f64 = 1e-14;
/// Width in `log |t|` at which log-space bisection stops.
pub const LOG_PARAM_TOL: f64 = 1e-14;
/// Smallest `|t|` resolved by log-space bisection.
pub const LOG_FLOOR: f64 = 1e-300;
/// Relative loss gap under which two minimizers count as tied.
pub const TIE_TOL: f64 = 1e-10;
/// Minimum parameter distance between distinct minimizers.
pub const MIN_SEPARATION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub t_star: f64,
    pub point: PlanarPoint,
    pub sq_dist: f64,
    /// Number of distinct minimizers; for a degenerate (constant-loss)
    /// query, the number of scan nodes.
    pub multiplicity: usize,
    /// All minimizing parameters, ascending, when `multiplicity > 1`.
    pub all_minimizers: Vec<f64>,
    /// `t_star` is an endpoint `±B`.
    pub at_boundary: bool,
    /// The loss is constant on the scan grid (e.g. the circle's center).
    pub degenerate: bool,
}

pub fn loss(curve: &Curve, z: PlanarPoint, t: f64) -> Result<f64> {
    curve.loss(z, t)
}

pub fn loss_derivative(curve: &Curve, z: PlanarPoint, t: f64) -> Result<f64> {
    curve.loss_derivative(z, t)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    t: f64,
    loss: f64,
    stationary: bool,
}

/// Global minimizer of `ℓ` with smallest-parameter tie breaking.
///
/// `z` must be finite; non-finite input yields a NaN result.
pub fn project(curve: &Curve, z: PlanarPoint) -> ProjectionResult {
    let (nodes, points) = curve.scan();
    let losses: Vec<f64> = points.iter().map(|p| p.dist2(z)).collect();
    let n = losses.len();

    let (lo_loss, hi_loss) = losses
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &l| (a.min(l), b.max(l)));
    if hi_loss - lo_loss <= TIE_TOL * (1.0 + lo_loss) {
        return degenerate_result(curve, z, nodes);
    }

    let mut candidates = Vec::new();
    let mut i = 0;
    while i < n {
        let left_ok = i == 0 || losses[i] <= losses[i - 1];
        let right_ok = i + 1 == n || losses[i] <= losses[i + 1];
        if left_ok && right_ok {
            let lo = nodes[i.saturating_sub(1)];
            let hi = nodes[(i + 1).min(n - 1)];
            refine_bracket(curve, z, lo, hi, &mut candidates);
        }
        i += 1;
    }

    if candidates.is_empty() {
        let i = (0..n).min_by(|&a, &b| losses[a].total_cmp(&losses[b])).unwrap();
        candidates.push(candidate(curve, z, nodes[i], false));
    }
    select(curve, candidates)
}

fn degenerate_result(curve: &Curve, z: PlanarPoint, nodes: &[f64]) -> ProjectionResult {
    let t = nodes[0];
    let point = curve.point_unchecked(t);
    ProjectionResult {
        t_star: t,
        point,
        sq_dist: point.dist2(z),
        multiplicity: nodes.len(),
        all_minimizers: nodes.to_vec(),
        at_boundary: true,
        degenerate: true,
    }
}

fn refine_bracket(curve: &Curve, z: PlanarPoint, lo: f64, hi: f64, out: &mut Vec<Candidate>) {
    if lo < 0.0 && hi > 0.0 {
        refine_interval(curve, z, lo, 0.0, out);
        refine_interval(curve, z, 0.0, hi, out);
    } else if lo < hi {
        refine_interval(curve, z, lo, hi, out);
    } else {
        out.push(candidate(curve, z, lo, false));
    }
}

fn candidate(curve: &Curve, z: PlanarPoint, t: f64, stationary: bool) -> Candidate {
    Candidate {
        t,
        loss: curve.point_unchecked(t).dist2(z),
        stationary,
    }
}

/// One smooth piece `[a, b]` (never straddling 0).
fn refine_interval(curve: &Curve, z: PlanarPoint, a: f64, b: f64, out: &mut Vec<Candidate>) {
    let da = curve.loss_derivative_unchecked(z, a, Side::Right);
    let db = curve.loss_derivative_unchecked(z, b, Side::Left);
    if da < 0.0 && db > 0.0 {
        let t = if b == 0.0 {
            -log_bisect(curve, z, -a, Side::Left)
        } else if a == 0.0 {
            log_bisect(curve, z, b, Side::Right)
        } else {
            linear_bisect(curve, z, a, b)
        };
        out.push(candidate(curve, z, t, true));
        return;
    }
    if da >= 0.0 {
        push_if_local_min(curve, z, a, out);
    }
    if db <= 0.0 {
        push_if_local_min(curve, z, b, out);
    }
}

/// Keeps a bracket endpoint only if the one-sided slopes make it a local
/// minimum (the kink corner, the window ends, exact stationary nodes).
fn push_if_local_min(curve: &Curve, z: PlanarPoint, t: f64, out: &mut Vec<Candidate>) {
    let b = curve.half_range();
    let left = if t <= -b {
        f64::NEG_INFINITY
    } else {
        curve.loss_derivative_unchecked(z, t, Side::Left)
    };
    let right = if t >= b {
        f64::INFINITY
    } else {
        curve.loss_derivative_unchecked(z, t, Side::Right)
    };
    if left <= 0.0 && right >= 0.0 {
        out.push(candidate(curve, z, t, left == 0.0 && right == 0.0));
    }
}

fn linear_bisect(curve: &Curve, z: PlanarPoint, mut a: f64, mut b: f64) -> f64 {
    while b - a > PARAM_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let d = curve.loss_derivative_unchecked(z, m, Side::Right);
        if d < 0.0 {
            a = m;
        } else if d > 0.0 {
            b = m;
        } else {
            return m;
        }
    }
    0.5 * (a + b)
}

/// Root of `ℓ̇` on `(0, extent]` (`side = Right`) or `[-extent, 0)`
/// (`side = Left`), bisecting in `u = log |t|`. Returns `|t|`.
///
/// On the right piece `ℓ̇ < 0` near 0 and `ℓ̇ > 0` at `extent`; on the left
/// piece the signs are mirrored.
fn log_bisect(curve: &Curve, z: PlanarPoint, extent: f64, side: Side) -> f64 {
    let sign = match side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    // d(u) > 0 iff |t| = e^u lies beyond the root
    let beyond = |u: f64| -> Option<bool> {
        let d = sign * curve.loss_derivative_unchecked(z, sign * u.exp(), side);
        if d > 0.0 {
            Some(true)
        } else if d < 0.0 {
            Some(false)
        } else {
            None
        }
    };
    let mut lo = LOG_FLOOR.ln();
    let mut hi = extent.ln();
    match beyond(lo) {
        Some(true) | None => return LOG_FLOOR,
        Some(false) => {}
    }
    while hi - lo > LOG_PARAM_TOL {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        match beyond(m) {
            Some(true) => hi = m,
            Some(false) => lo = m,
            None => return m.exp(),
        }
    }
    (0.5 * (lo + hi)).exp()
}

fn select(curve: &Curve, mut candidates: Vec<Candidate>) -> ProjectionResult {
    let best = candidates
        .iter()
        .map(|c| c.loss)
        .fold(f64::INFINITY, f64::min);
    let cutoff = best + TIE_TOL * (1.0 + best);
    candidates.retain(|c| c.loss <= cutoff);
    candidates.sort_by(|a, b| a.t.total_cmp(&b.t));

    // Nearby candidates describe the same minimizer; keep one per cluster,
    // preferring refined roots over bracket endpoints.
    let mut reps: Vec<Candidate> = Vec::new();
    let mut cluster_end = f64::NEG_INFINITY;
    for c in candidates {
        if c.t - cluster_end <= MIN_SEPARATION {
            let rep = reps.last_mut().unwrap();
            if better(&c, rep) {
                *rep = c;
            }
        } else {
            reps.push(c);
        }
        cluster_end = c.t;
    }

    // Different parameters can name the same point (the circle at ±π).
    let mut distinct: Vec<(Candidate, PlanarPoint)> = Vec::new();
    for c in reps {
        let p = curve.point_unchecked(c.t);
        if !distinct.iter().any(|(_, q)| q.dist2(p) <= 1e-18) {
            distinct.push((c, p));
        }
    }

    let (chosen, point) = distinct[0];
    let multiplicity = distinct.len();
    let b = curve.half_range();
    ProjectionResult {
        t_star: chosen.t,
        point,
        sq_dist: chosen.loss,
        multiplicity,
        all_minimizers: if multiplicity > 1 {
            distinct.iter().map(|(c, _)| c.t).collect()
        } else {
            Vec::new()
        },
        at_boundary: chosen.t == b || chosen.t == -b,
        degenerate: false,
    }
}

fn better(c: &Candidate, rep: &Candidate) -> bool {
    match (c.stationary, rep.stationary) {
        (true, false) => true,
        (false, true) => false,
        _ => c.loss < rep.loss,
    }
}

/// Brute-force reference: `ℓ` on a uniform grid of `n_grid` points over
/// `[-B, B]` with a parabolic refinement around the best node. Slow; meant
/// for cross-checking [`project`].
pub fn project_grid_oracle(curve: &Curve, z: PlanarPoint, n_grid: usize) -> ProjectionResult {
    let n_grid = n_grid.max(3);
    let b = curve.half_range();
    let step = 2.0 * b / (n_grid - 1) as f64;
    let ts: Vec<f64> = (0..n_grid)
        .map(|i| {
            let t = -b + step * i as f64;
            t.clamp(-b, b)
        })
        .collect();
    let ls: Vec<f64> = ts.iter().map(|&t| curve.point_unchecked(t).dist2(z)).collect();

    let mut local: Vec<(f64, f64)> = Vec::new();
    for i in 0..n_grid {
        let left_ok = i == 0 || ls[i] <= ls[i - 1];
        let right_ok = i + 1 == n_grid || ls[i] < ls[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let mut best = (ts[i], ls[i]);
        if i > 0 && i + 1 < n_grid {
            let (l0, l1, l2) = (ls[i - 1], ls[i], ls[i + 1]);
            let denom = l0 - 2.0 * l1 + l2;
            if denom > 0.0 {
                let shift = 0.5 * (l0 - l2) / denom;
                let t = (ts[i] + shift * step).clamp(ts[i - 1], ts[i + 1]);
                let l = curve.point_unchecked(t).dist2(z);
                if l < best.1 {
                    best = (t, l);
                }
            }
        }
        local.push(best);
    }

    let min_loss = local.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let cutoff = min_loss + 1e-9 * (1.0 + min_loss);
    let mut tied: Vec<(f64, f64)> = local.into_iter().filter(|c| c.1 <= cutoff).collect();
    tied.sort_by(|a, b| a.0.total_cmp(&b.0));
    tied.dedup_by(|a, b| (a.0 - b.0).abs() <= 2.0 * step);
    let (t, l) = tied[0];
    ProjectionResult {
        t_star: t,
        point: curve.point_unchecked(t),
        sq_dist: l,
        multiplicity: tied.len(),
        all_minimizers: if tied.len() > 1 {
            tied.iter().map(|c| c.0).collect()
        } else {
            Vec::new()
        },
        at_boundary: t == b || t == -b,
        degenerate: false,
    }
}
