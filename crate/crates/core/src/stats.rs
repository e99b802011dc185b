//! Sorted replicate statistics, empirical CDFs and Kolmogorov–Smirnov
//! distances.

use alloc::vec::Vec;

/// Replicate values of one statistic, sorted ascending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmpiricalSummary {
    values: Vec<f64>,
}

impl EmpiricalSummary {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Applies `f` to every value and re-sorts.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    /// Fraction of values `<= threshold`.
    pub fn prob_leq(&self, threshold: f64) -> f64 {
        if self.values.is_empty() {
            return f64::NAN;
        }
        self.values.partition_point(|&v| v <= threshold) as f64 / self.values.len() as f64
    }

    /// Fraction of values `< threshold`.
    pub fn prob_lt(&self, threshold: f64) -> f64 {
        if self.values.is_empty() {
            return f64::NAN;
        }
        self.values.partition_point(|&v| v < threshold) as f64 / self.values.len() as f64
    }

    /// Fraction of values `>= threshold`.
    pub fn prob_geq(&self, threshold: f64) -> f64 {
        if self.values.is_empty() {
            return f64::NAN;
        }
        let below = self.values.partition_point(|&v| v < threshold);
        (self.values.len() - below) as f64 / self.values.len() as f64
    }

    /// `sup_x |F̂(x) − F(x)|` for a continuous reference `F`.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.values.len() as f64;
        self.values
            .iter()
            .enumerate()
            .fold(0.0, |acc: f64, (i, &x)| {
                let fx = cdf(x);
                let above = (i + 1) as f64 / n - fx;
                let below = fx - i as f64 / n;
                acc.max(above).max(below)
            })
    }
}

pub fn empirical_prob_leq(summary: &EmpiricalSummary, threshold: f64) -> f64 {
    summary.prob_leq(threshold)
}

pub fn ks_distance<F: Fn(f64) -> f64>(summary: &EmpiricalSummary, reference_cdf: F) -> f64 {
    summary.ks_distance(reference_cdf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::phi;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn prob_leq_examples() {
        let s = EmpiricalSummary::new(vec![3.0, 1.0, 2.0]);
        assert_eq!(s.prob_leq(2.0), 2.0 / 3.0);
        assert_eq!(s.prob_leq(0.5), 0.0);
        assert_eq!(s.prob_leq(10.0), 1.0);
        assert_eq!(s.prob_lt(2.0), 1.0 / 3.0);
        assert_eq!(s.prob_geq(2.0), 2.0 / 3.0);
    }

    #[test]
    fn ks_examples() {
        let median = EmpiricalSummary::new(vec![0.0]);
        assert_eq!(median.ks_distance(phi), 0.5);
        let constant = EmpiricalSummary::new(vec![0.0; 100]);
        assert_eq!(constant.ks_distance(phi), 0.5);
    }

    #[test]
    fn ks_of_exact_quantiles_is_half_step() {
        // values at F⁻¹((i + ½)/n) give KS exactly 1/(2n)
        let n = 200;
        let values = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let s = EmpiricalSummary::new(values);
        let ks = s.ks_distance(|x: f64| x.clamp(0.0, 1.0));
        assert!((ks - 0.5 / n as f64).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn sorted_and_prob_monotone(values in proptest::collection::vec(-1e3f64..1e3, 1..200), a in -1e3f64..1e3, b in -1e3f64..1e3) {
            let s = EmpiricalSummary::new(values);
            prop_assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(s.prob_leq(lo) <= s.prob_leq(hi));
            prop_assert!(s.prob_lt(lo) <= s.prob_leq(lo));
        }

        #[test]
        fn ks_bounded(values in proptest::collection::vec(-5f64..5.0, 1..100)) {
            let s = EmpiricalSummary::new(values);
            let ks = s.ks_distance(phi);
            prop_assert!((0.0..=1.0).contains(&ks));
            prop_assert!(ks >= 0.5 / s.len() as f64 - 1e-12);
        }
    }
}
