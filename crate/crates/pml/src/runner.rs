//! Parallel replicate execution.
//!
//! Replicate `i` depends only on `(seed, i)`, and results are collected in
//! index order, so output is bit-identical for every worker count.

use pml_core::montecarlo::{run_replicate, ExperimentConfig, ExperimentOutcome};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

pub const THREADS_ENV: &str = "PML_THREADS";

/// Worker count from `PML_THREADS`; unset or `0` means one per core.
pub fn threads_from_env() -> CliResult<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid value '{s}' for {THREADS_ENV}: expected a nonnegative integer"))),
    }
}

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    pub fn new(threads: usize) -> CliResult<Self> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Self { pool })
    }

    pub fn from_env() -> CliResult<Self> {
        Self::new(threads_from_env()?)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn run(&self, cfg: &ExperimentConfig) -> pml_core::Result<ExperimentOutcome> {
        cfg.validate()?;
        let curve = cfg.curve.build()?;
        let replicates = self
            .pool
            .install(|| (0..cfg.reps).into_par_iter().map(|i| run_replicate(&curve, cfg, i)).collect());
        Ok(ExperimentOutcome::from_replicates(*cfg, replicates))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pml_core::montecarlo::{run_experiment, CurveFamily, CurveSpec, SourceDistribution};

    #[test]
    fn parallel_matches_sequential() {
        let cfg = ExperimentConfig::new(
            CurveSpec::rate(CurveFamily::Log, 1.0),
            SourceDistribution::normal_y(1.0).unwrap(),
            100,
            500,
            42,
        );
        let seq = run_experiment(&cfg).unwrap();
        for threads in [1, 3] {
            let par = Runner::new(threads).unwrap().run(&cfg).unwrap();
            assert_eq!(par.replicates, seq.replicates);
        }
    }
}
