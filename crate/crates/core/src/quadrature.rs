//! Adaptive Simpson quadrature and a cumulative-integral table.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub const DEFAULT_MAX_DEPTH: u32 = 50;

/// `∫ₐᵇ f` by adaptive Simpson with Richardson extrapolation.
///
/// The tolerance is split evenly between the two halves at each level;
/// recursion stops at `max_depth` regardless.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Memoized `t ↦ ∫₀ᵗ g` on `[0, upper]`.
///
/// The integral is tabulated at Chebyshev-spaced nodes (dense near both ends
/// of the interval); queries add an on-demand Simpson refinement from the
/// nearest node below.
#[derive(Debug, Clone)]
pub struct CumulativeTable {
    nodes: Vec<f64>,
    values: Vec<f64>,
    tol: f64,
}

impl CumulativeTable {
    pub const DEFAULT_NODES: usize = 4096;
    pub const DEFAULT_TOL: f64 = 1e-12;

    /// Builds the table with `node_count` nodes and total absolute error
    /// target `tol`.
    pub fn new<F: Fn(f64) -> f64>(g: &F, upper: f64, node_count: usize, tol: f64) -> Self {
        let node_count = node_count.max(2);
        let last = (node_count - 1) as f64;
        let mut nodes: Vec<f64> = (0..node_count)
            .map(|k| {
                let theta = core::f64::consts::PI * k as f64 / last;
                0.5 * upper * (1.0 - theta.cos())
            })
            .collect();
        nodes[0] = 0.0;
        nodes[node_count - 1] = upper;
        let seg_tol = tol / node_count as f64;
        let mut values = Vec::with_capacity(node_count);
        values.push(0.0);
        let mut acc = 0.0;
        for w in nodes.windows(2) {
            acc += adaptive_simpson(g, w[0], w[1], seg_tol, DEFAULT_MAX_DEPTH);
            values.push(acc);
        }
        Self {
            nodes,
            values,
            tol: seg_tol,
        }
    }

    pub fn upper(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `∫₀ᵗ g` for `t` in `[0, upper]` (clamped).
    pub fn integral_to<F: Fn(f64) -> f64>(&self, g: &F, t: f64) -> f64 {
        let t = t.clamp(0.0, self.upper());
        let k = self.nodes.partition_point(|&x| x <= t).saturating_sub(1);
        let base = self.values[k];
        let start = self.nodes[k];
        if t == start {
            return base;
        }
        base + adaptive_simpson(g, start, t, self.tol, DEFAULT_MAX_DEPTH)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn simpson_exact_on_cubics() {
        let f = |x: f64| 3.0 * x * x * x - x + 2.0;
        let v = adaptive_simpson(&f, -1.0, 2.0, 1e-14, 20);
        // ∫ = 3/4 x^4 - x^2/2 + 2x
        let exact = (0.75 * 16.0 - 2.0 + 4.0) - (0.75 - 0.5 - 2.0);
        assert_abs_diff_eq!(v, exact, epsilon = 1e-13);
    }

    #[test]
    fn simpson_smooth_integrand() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, core::f64::consts::PI, 1e-13, 40);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn simpson_empty_interval() {
        assert_eq!(adaptive_simpson(&|x: f64| x, 0.3, 0.3, 1e-12, 10), 0.0);
    }

    #[test]
    fn table_matches_sqrt_closed_form() {
        // ∫₀ᵗ √x = (2/3) t^{3/2}; derivative is unbounded at 0
        let g = |x: f64| x.sqrt();
        let table = CumulativeTable::new(&g, 1.2, 4096, 1e-12);
        for i in 0..=40 {
            let t = 1.2 * (i as f64 / 40.0).powi(3);
            let exact = 2.0 / 3.0 * t.powf(1.5);
            assert_abs_diff_eq!(table.integral_to(&g, t), exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn table_nodes_are_chebyshev() {
        let table = CumulativeTable::new(&|x: f64| x, 1.0, 17, 1e-12);
        let nodes = table.nodes();
        assert_eq!(nodes[0], 0.0);
        assert_eq!(nodes[16], 1.0);
        assert_abs_diff_eq!(nodes[8], 0.5, epsilon = 1e-15);
        assert!(nodes[1] - nodes[0] < nodes[8] - nodes[7]);
    }
}
