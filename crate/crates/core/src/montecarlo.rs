//! Seeded simulation of projected sample means.
//!
//! Replicate `i` of an experiment draws `Z̄_n` from a ChaCha8 stream keyed by
//! `(seed, i)`, projects it onto the curve and records `t_n` and
//! `m_n = (m1, m2)`. Because every replicate owns its stream, the results do
//! not depend on how replicates are scheduled across threads.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::asymptotics::{phi, poly_limit_cdf};
use crate::curve::{Curve, PlanarPoint};
use crate::error::{Error, Result};
use crate::projection::project;
use crate::rate::{Family, RateFunction, F_FLOOR};
use crate::stats::EmpiricalSummary;

/// Largest admissible `|P̂ − Φ|` in a limit-law table.
pub const THEOREM1_TOL: f64 = 0.02;
/// Largest admissible `P̂(|m1 − 1| ≥ f(s/√n))`.
pub const VANISHING_TOL: f64 = 0.01;
/// Largest admissible KS distance against a limit law.
pub const KS_TOL: f64 = 0.03;
/// Smallest admissible fraction of replicates stuck at `(1, 0)`.
pub const STICKY_MIN: f64 = 0.99;

pub const DEFAULT_S_GRID: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// `X = 0`, `Y ~ N(0, σ²)`.
    NormalY,
    /// Bivariate normal with `sd(X) = σ_x`, `sd(Y) = σ` and correlation `ρ`.
    NormalXY,
    /// `X = 0`, `Y` uniform on `[-σ√3, σ√3]`.
    UniformY,
    /// `X = 0`, `Y = ±σ` with probability ½ each.
    PointMassX0,
}

impl SourceKind {
    pub fn name(self) -> &'static str {
        match self {
            SourceKind::NormalY => "normal_y",
            SourceKind::NormalXY => "normal_xy",
            SourceKind::UniformY => "uniform_y",
            SourceKind::PointMassX0 => "point_mass_x0",
        }
    }
}

/// Centered distribution of one observation `Z = (X, Y)` with `Var(Y) = σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceDistribution {
    kind: SourceKind,
    sigma: f64,
    sigma_x: f64,
    correlation: f64,
}

impl SourceDistribution {
    pub fn new(kind: SourceKind, sigma: f64, sigma_x: f64, correlation: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::param("sigma", sigma, "must be positive and finite"));
        }
        if !(sigma_x.is_finite() && sigma_x >= 0.0) {
            return Err(Error::param("sigma_x", sigma_x, "must be nonnegative and finite"));
        }
        if !(correlation > -1.0 && correlation < 1.0) {
            return Err(Error::param("correlation", correlation, "must lie in (-1, 1)"));
        }
        if kind != SourceKind::NormalXY && (sigma_x != 0.0 || correlation != 0.0) {
            return Err(Error::param(
                "sigma_x",
                sigma_x,
                "only the normal_xy source has an X component",
            ));
        }
        Ok(Self {
            kind,
            sigma,
            sigma_x,
            correlation,
        })
    }

    pub fn normal_y(sigma: f64) -> Result<Self> {
        Self::new(SourceKind::NormalY, sigma, 0.0, 0.0)
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    /// Standard deviation of `Y`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn correlation(&self) -> f64 {
        self.correlation
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.kind, SourceKind::NormalY | SourceKind::NormalXY)
    }

    /// One observation, scaled by `scale` (1 for a single draw, `1/√n` for
    /// the exact law of a Gaussian sample mean).
    fn draw_scaled<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> PlanarPoint {
        match self.kind {
            SourceKind::NormalY => {
                let n1: f64 = rng.sample(StandardNormal);
                PlanarPoint::new(0.0, scale * self.sigma * n1)
            }
            SourceKind::NormalXY => {
                let n1: f64 = rng.sample(StandardNormal);
                let n2: f64 = rng.sample(StandardNormal);
                let rho = self.correlation;
                let x = self.sigma_x * (rho * n1 + (1.0 - rho * rho).sqrt() * n2);
                PlanarPoint::new(scale * x, scale * self.sigma * n1)
            }
            SourceKind::UniformY => {
                let half = self.sigma * 3f64.sqrt();
                let u: f64 = rng.random();
                PlanarPoint::new(0.0, scale * half * (2.0 * u - 1.0))
            }
            SourceKind::PointMassX0 => {
                let y = if rng.random_bool(0.5) { self.sigma } else { -self.sigma };
                PlanarPoint::new(0.0, scale * y)
            }
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> PlanarPoint {
        self.draw_scaled(rng, 1.0)
    }

    /// `Z̄_n`. With `gaussian_shortcut` and a normal source, one draw from the
    /// exact law `N(0, Σ/n)` replaces the `n` observations.
    pub fn draw_sample_mean<R: Rng + ?Sized>(&self, n: u64, rng: &mut R, gaussian_shortcut: bool) -> PlanarPoint {
        let n = n.max(1);
        if gaussian_shortcut && self.is_gaussian() {
            return self.draw_scaled(rng, 1.0 / (n as f64).sqrt());
        }
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..n {
            let z = self.draw(rng);
            sx += z.x;
            sy += z.y;
        }
        PlanarPoint::new(sx / n as f64, sy / n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    Poly,
    Log,
    Exp,
    Circle,
    Kink,
}

impl CurveFamily {
    pub fn name(self) -> &'static str {
        match self {
            CurveFamily::Poly => "poly",
            CurveFamily::Log => "log",
            CurveFamily::Exp => "exp",
            CurveFamily::Circle => "circle",
            CurveFamily::Kink => "kink",
        }
    }

    fn rate_family(self) -> Option<Family> {
        match self {
            CurveFamily::Poly => Some(Family::Poly),
            CurveFamily::Log => Some(Family::Log),
            CurveFamily::Exp => Some(Family::Exp),
            _ => None,
        }
    }
}

/// Everything needed to rebuild a [`Curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSpec {
    pub family: CurveFamily,
    pub gamma: f64,
    /// Right end of the domain of `f`; `None` picks the family default.
    pub b: Option<f64>,
    /// Circle offset.
    pub delta: f64,
    /// Use the graph-type construction `(1 + |t| g(|t|), t)`.
    pub simple: bool,
}

impl CurveSpec {
    pub fn rate(family: CurveFamily, gamma: f64) -> Self {
        Self {
            family,
            gamma,
            b: None,
            delta: 0.0,
            simple: false,
        }
    }

    pub fn circle(delta: f64) -> Self {
        Self {
            family: CurveFamily::Circle,
            gamma: 1.0,
            b: None,
            delta,
            simple: false,
        }
    }

    pub fn kink() -> Self {
        Self {
            family: CurveFamily::Kink,
            gamma: 1.0,
            b: None,
            delta: 0.0,
            simple: false,
        }
    }

    pub fn rate_function(&self) -> Result<Option<RateFunction>> {
        let Some(family) = self.family.rate_family() else {
            return Ok(None);
        };
        let rf = match self.b {
            None => RateFunction::with_default_b(family, self.gamma)?,
            Some(b) => match family {
                Family::Poly => RateFunction::poly(self.gamma, b)?,
                Family::Log => RateFunction::log(self.gamma, b)?,
                Family::Exp => RateFunction::exp(self.gamma, b)?,
                Family::Custom => unreachable!(),
            },
        };
        Ok(Some(rf))
    }

    pub fn build(&self) -> Result<Curve> {
        match self.family {
            CurveFamily::Circle => Curve::circle(self.delta),
            CurveFamily::Kink => match self.b {
                None => Ok(Curve::kink()),
                Some(b) => Curve::kink_with_range(b),
            },
            _ => {
                let rf = self.rate_function()?.unwrap();
                if self.simple {
                    Curve::simple_qcurve(rf)
                } else {
                    Ok(Curve::qcurve(rf))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub curve: CurveSpec,
    pub source: SourceDistribution,
    /// Sample size `n`.
    pub n: u64,
    /// Replicate count `R`.
    pub reps: u64,
    pub seed: u64,
    /// Draw `Z̄_n` from its exact normal law for Gaussian sources.
    pub gaussian_shortcut: bool,
}

impl ExperimentConfig {
    pub fn new(curve: CurveSpec, source: SourceDistribution, n: u64, reps: u64, seed: u64) -> Self {
        Self {
            curve,
            source,
            n,
            reps,
            seed,
            gaussian_shortcut: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", 0.0, "sample size must be at least 1"));
        }
        if self.reps == 0 {
            return Err(Error::param("reps", 0.0, "replicate count must be at least 1"));
        }
        Ok(())
    }

    /// Whether `Z̄_n` is drawn in one step.
    pub fn uses_shortcut(&self) -> bool {
        self.gaussian_shortcut && self.source.is_gaussian()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replicate {
    pub sample_mean: PlanarPoint,
    pub t_n: f64,
    pub m1: f64,
    pub m2: f64,
}

/// The stream of replicate `index`: ChaCha8 seeded from `seed`, stream
/// number `index`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn run_replicate(curve: &Curve, cfg: &ExperimentConfig, index: u64) -> Replicate {
    let mut rng = replicate_rng(cfg.seed, index);
    let mean = cfg
        .source
        .draw_sample_mean(cfg.n, &mut rng, cfg.gaussian_shortcut);
    let proj = project(curve, mean);
    Replicate {
        sample_mean: mean,
        t_n: proj.t_star,
        m1: proj.point.x,
        m2: proj.point.y,
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    /// In replicate-index order.
    pub replicates: Vec<Replicate>,
    pub t_n: EmpiricalSummary,
    pub m1: EmpiricalSummary,
    pub m2: EmpiricalSummary,
}

impl ExperimentOutcome {
    pub fn from_replicates(config: ExperimentConfig, replicates: Vec<Replicate>) -> Self {
        let t_n = EmpiricalSummary::new(replicates.iter().map(|r| r.t_n).collect());
        let m1 = EmpiricalSummary::new(replicates.iter().map(|r| r.m1).collect());
        let m2 = EmpiricalSummary::new(replicates.iter().map(|r| r.m2).collect());
        Self {
            config,
            replicates,
            t_n,
            m1,
            m2,
        }
    }

    /// `√n · ĝ(t_n)` where `ĝ` is the curve's signed rate-scale map
    /// (`None` for the kink).
    pub fn g_scale(&self, curve: &Curve) -> Option<EmpiricalSummary> {
        let root_n = (self.config.n as f64).sqrt();
        let values: Option<Vec<f64>> = self
            .replicates
            .iter()
            .map(|r| curve.signed_g(r.t_n).map(|g| root_n * g))
            .collect();
        values.map(EmpiricalSummary::new)
    }
}

/// Runs all replicates sequentially.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let curve = cfg.curve.build()?;
    let replicates = (0..cfg.reps)
        .map(|i| run_replicate(&curve, cfg, i))
        .collect();
    Ok(ExperimentOutcome::from_replicates(*cfg, replicates))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// `P(t_n ≤ f(s/√n))`
    Tn,
    /// `P(−t_n ≤ f(s/√n))`
    NegTn,
    /// `P(m2 ≤ f(s/√n))`
    M2,
    /// `P(−m2 ≤ f(s/√n))`
    NegM2,
    /// `P(|m1 − 1| ≥ f(s/√n))`
    M1Deviation,
    /// `P(n^{γ/2} t_n ≤ s)`
    ScaledTn,
    /// `P(m_n = (1, 0))`
    Sticky,
}

impl Statistic {
    pub fn label(self) -> &'static str {
        match self {
            Statistic::Tn => "t_n",
            Statistic::NegTn => "-t_n",
            Statistic::M2 => "m2",
            Statistic::NegM2 => "-m2",
            Statistic::M1Deviation => "|m1-1|",
            Statistic::ScaledTn => "scaled_t_n",
            Statistic::Sticky => "m_n=(1,0)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckRow {
    pub statistic: Statistic,
    pub s: f64,
    pub empirical: f64,
    pub theoretical: f64,
    pub abs_diff: f64,
    pub pass: bool,
    /// `s > 0` but `f(s/√n)` is below the representable floor.
    pub underflow: bool,
}

impl CheckRow {
    fn new(statistic: Statistic, s: f64, empirical: f64, theoretical: f64, tol: f64) -> Self {
        let abs_diff = (empirical - theoretical).abs();
        Self {
            statistic,
            s,
            empirical,
            theoretical,
            abs_diff,
            pass: abs_diff <= tol,
            underflow: false,
        }
    }
}

/// Empirical versus limiting probabilities of the projected-mean CLT:
/// `P(±t_n ≤ f(s/√n))` and `P(±m2 ≤ f(s/√n))` against `Φ(s/σ)` for every
/// `s` in `s_values`, and the vanishing probability `P(|m1 − 1| ≥ f(s/√n))`
/// for every positive `s` in `m1_s`.
pub fn theorem1_rows(
    outcome: &ExperimentOutcome,
    rf: &RateFunction,
    s_values: &[f64],
    m1_s: &[f64],
) -> Result<Vec<CheckRow>> {
    let sigma = outcome.config.source.sigma();
    let root_n = (outcome.config.n as f64).sqrt();
    let threshold = |s: f64| -> Result<(f64, bool)> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::param("s", s, "must be nonnegative and finite"));
        }
        let thr = rf.f(s / root_n);
        Ok((thr, s > 0.0 && thr < F_FLOOR))
    };
    let mark = |mut row: CheckRow, underflow: bool| {
        if underflow {
            row.underflow = true;
            row.pass = false;
        }
        row
    };
    let mut rows = Vec::new();
    for &s in s_values {
        let (thr, underflow) = threshold(s)?;
        let theory = phi(s / sigma);
        let batch = [
            (Statistic::Tn, outcome.t_n.prob_leq(thr)),
            (Statistic::NegTn, outcome.t_n.prob_geq(-thr)),
            (Statistic::M2, outcome.m2.prob_leq(thr)),
            (Statistic::NegM2, outcome.m2.prob_geq(-thr)),
        ];
        for (stat, p) in batch {
            rows.push(mark(CheckRow::new(stat, s, p, theory, THEOREM1_TOL), underflow));
        }
    }
    if m1_s.iter().any(|&s| s > 0.0) {
        let dev = EmpiricalSummary::new(outcome.replicates.iter().map(|r| (r.m1 - 1.0).abs()).collect());
        for &s in m1_s {
            let (thr, underflow) = threshold(s)?;
            if s > 0.0 {
                let row = CheckRow::new(Statistic::M1Deviation, s, dev.prob_geq(thr), 0.0, VANISHING_TOL);
                rows.push(mark(row, underflow));
            }
        }
    }
    Ok(rows)
}

/// Largest number of sample-size doublings tried by [`check_theorem1_with`].
pub const MAX_DOUBLINGS: u32 = 10;

/// One pass of the CLT table at a fixed `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Attempt {
    pub n: u64,
    pub rows: Vec<CheckRow>,
}

impl Theorem1Attempt {
    /// All `Φ` rows pass. The `|m1 − 1|` rows do not steer escalation: they
    /// vanish on a different scale.
    pub fn limit_rows_pass(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.statistic != Statistic::M1Deviation)
            .all(|r| r.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Attempts in order; the last one is the reported table.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    pub attempts: Vec<Theorem1Attempt>,
}

impl Theorem1Report {
    pub fn final_attempt(&self) -> &Theorem1Attempt {
        self.attempts.last().expect("at least one attempt")
    }
}

/// Runs the CLT table at `cfg.n`; while some `Φ` row fails and fewer than
/// `max_doublings` doublings were made, doubles `n` and reruns with the same
/// seed. `run` executes one experiment (sequentially or in parallel).
pub fn check_theorem1_with<F>(
    cfg: &ExperimentConfig,
    s_values: &[f64],
    m1_s: &[f64],
    max_doublings: u32,
    mut run: F,
) -> Result<Theorem1Report>
where
    F: FnMut(&ExperimentConfig) -> Result<ExperimentOutcome>,
{
    let rf = cfg
        .curve
        .rate_function()?
        .ok_or(Error::Unsupported("the CLT table needs a curve built from a rate function"))?;
    let mut attempts = Vec::new();
    let mut current = *cfg;
    for k in 0..=max_doublings {
        let outcome = run(&current)?;
        let attempt = Theorem1Attempt {
            n: current.n,
            rows: theorem1_rows(&outcome, &rf, s_values, m1_s)?,
        };
        let done = attempt.limit_rows_pass() || attempt.rows.iter().any(|r| r.underflow);
        attempts.push(attempt);
        if done || k == max_doublings {
            break;
        }
        current.n = current
            .n
            .checked_mul(2)
            .ok_or(Error::param("n", current.n as f64, "doubling overflows"))?;
    }
    Ok(Theorem1Report { attempts })
}

/// [`check_theorem1_with`] using the sequential runner.
pub fn check_theorem1(cfg: &ExperimentConfig, s_values: &[f64], m1_s: &[f64], max_doublings: u32) -> Result<Theorem1Report> {
    check_theorem1_with(cfg, s_values, m1_s, max_doublings, run_experiment)
}

/// `P(n^{γ/2} t_n ≤ s)` against the polynomial-rate limit law, plus the KS
/// distance over all replicates.
pub fn poly_limit_rows(outcome: &ExperimentOutcome, gamma: f64, s_values: &[f64]) -> (Vec<CheckRow>, f64) {
    let sigma = outcome.config.source.sigma();
    let scale = (outcome.config.n as f64).powf(0.5 * gamma);
    let scaled = outcome.t_n.map(|t| scale * t);
    let rows = s_values
        .iter()
        .map(|&s| {
            CheckRow::new(
                Statistic::ScaledTn,
                s,
                scaled.prob_leq(s),
                poly_limit_cdf(s, gamma, sigma),
                KS_TOL,
            )
        })
        .collect();
    let ks = scaled.ks_distance(|s| poly_limit_cdf(s, gamma, sigma));
    (rows, ks)
}

/// Fraction of replicates whose projection is exactly `(1, 0)`.
pub fn sticky_row(outcome: &ExperimentOutcome) -> CheckRow {
    let hits = outcome
        .replicates
        .iter()
        .filter(|r| r.m1 == 1.0 && r.m2 == 0.0)
        .count();
    let frac = hits as f64 / outcome.replicates.len().max(1) as f64;
    let mut row = CheckRow::new(Statistic::Sticky, 0.0, frac, 1.0, 1.0 - STICKY_MIN);
    row.pass = frac >= STICKY_MIN;
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(family: CurveFamily, gamma: f64, n: u64, reps: u64) -> ExperimentConfig {
        ExperimentConfig::new(
            CurveSpec::rate(family, gamma),
            SourceDistribution::normal_y(1.0).unwrap(),
            n,
            reps,
            7,
        )
    }

    #[test]
    fn source_rejects_bad_parameters() {
        assert!(SourceDistribution::normal_y(0.0).is_err());
        assert!(SourceDistribution::new(SourceKind::PointMassX0, 0.0, 0.0, 0.0).is_err());
        assert!(SourceDistribution::new(SourceKind::NormalXY, 1.0, 1.0, 1.0).is_err());
        assert!(SourceDistribution::new(SourceKind::NormalY, 1.0, 0.5, 0.0).is_err());
        assert!(SourceDistribution::new(SourceKind::NormalXY, 1.0, 0.5, -0.3).is_ok());
    }

    #[test]
    fn sample_mean_variance() {
        let src = SourceDistribution::normal_y(1.0).unwrap();
        let m = 20_000;
        let mut rng = replicate_rng(3, 0);
        let ys: Vec<f64> = (0..m).map(|_| src.draw_sample_mean(400, &mut rng, true).y).collect();
        let var = ys.iter().map(|y| y * y).sum::<f64>() / m as f64;
        // sd of the variance estimate ≈ √(2/m)/400
        assert!((var * 400.0 - 1.0).abs() < 0.05, "{var}");
    }

    #[test]
    fn summed_sources_are_centered_with_variance_sigma2() {
        for kind in [SourceKind::UniformY, SourceKind::PointMassX0, SourceKind::NormalY] {
            let src = SourceDistribution::new(kind, 2.0, 0.0, 0.0).unwrap();
            let mut rng = replicate_rng(11, 5);
            let m = 4000;
            let ys: Vec<f64> = (0..m).map(|_| src.draw_sample_mean(25, &mut rng, false).y).collect();
            let mean = ys.iter().sum::<f64>() / m as f64;
            let var = ys.iter().map(|y| y * y).sum::<f64>() / m as f64;
            assert!(mean.abs() < 0.05, "{kind:?} {mean}");
            assert!((var * 25.0 / 4.0 - 1.0).abs() < 0.1, "{kind:?} {var}");
        }
    }

    #[test]
    fn correlated_source() {
        let src = SourceDistribution::new(SourceKind::NormalXY, 1.0, 2.0, 0.5).unwrap();
        let mut rng = replicate_rng(1, 1);
        let m = 20_000;
        let (mut sxx, mut sxy) = (0.0, 0.0);
        for _ in 0..m {
            let z = src.draw(&mut rng);
            sxx += z.x * z.x;
            sxy += z.x * z.y;
        }
        assert!((sxx / m as f64 - 4.0).abs() < 0.2);
        assert!((sxy / m as f64 - 1.0).abs() < 0.1);
    }

    #[test]
    fn replicates_are_reproducible() {
        let c = cfg(CurveFamily::Poly, 2.0, 100, 50);
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(a.replicates, b.replicates);
        let curve = c.curve.build().unwrap();
        assert_eq!(run_replicate(&curve, &c, 17), a.replicates[17]);
    }

    #[test]
    fn single_replicate() {
        let out = run_experiment(&cfg(CurveFamily::Log, 1.0, 10, 1)).unwrap();
        assert_eq!(out.t_n.len(), 1);
        assert!(run_experiment(&cfg(CurveFamily::Log, 1.0, 10, 0)).is_err());
        assert!(run_experiment(&cfg(CurveFamily::Log, 1.0, 0, 3)).is_err());
    }

    #[test]
    fn escalation_doubles_n_until_limit_rows_pass() {
        let mut c = cfg(CurveFamily::Poly, 1.0, 4, 200);
        c.seed = 5;
        let mut calls = 0;
        // a runner that fails every Φ row until n reaches 16
        let report = check_theorem1_with(&c, &[1.0], &[], 5, |cfg| {
            calls += 1;
            let mut out = run_experiment(cfg)?;
            if cfg.n < 16 {
                out.t_n = EmpiricalSummary::new(alloc::vec![1.0; 200]);
            }
            Ok(out)
        })
        .unwrap();
        let ns: Vec<u64> = report.attempts.iter().map(|a| a.n).collect();
        assert_eq!(ns, [4, 8, 16]);
        assert_eq!(calls, 3);
        assert!(report.final_attempt().limit_rows_pass());
        let capped = check_theorem1_with(&c, &[1.0], &[], 1, |cfg| {
            let mut out = run_experiment(cfg)?;
            out.t_n = EmpiricalSummary::new(alloc::vec![1.0; 200]);
            Ok(out)
        })
        .unwrap();
        assert_eq!(capped.attempts.len(), 2);
        assert!(!capped.final_attempt().limit_rows_pass());
    }

    #[test]
    fn check_theorem1_flags_underflow() {
        let mut c = cfg(CurveFamily::Exp, 1.0, 10_000, 20);
        c.seed = 1;
        let report = check_theorem1(&c, &[0.01], &[0.01], 3).unwrap();
        assert_eq!(report.attempts.len(), 1);
        assert!(report.final_attempt().rows.iter().all(|r| r.underflow && !r.pass));
        assert!(check_theorem1(&c, &[-1.0], &[], 0).is_err());
        let circle = ExperimentConfig::new(
            CurveSpec::circle(0.3),
            SourceDistribution::normal_y(1.0).unwrap(),
            10,
            5,
            0,
        );
        assert!(check_theorem1(&circle, &[1.0], &[], 0).is_err());
    }
}
