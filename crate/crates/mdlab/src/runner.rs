//! Parallel experiment loops. Every instance draws from its own stream of the
//! seed, and results are collected in instance order, so output does not
//! depend on the thread count.

use mdlab_core::harness::{
    instance_for, instance_ratio, query_growth_row, ExperimentRecord, HarnessError, RatioMechanism,
    RatioSummary,
};
use mdlab_core::{Epsilon, Money};
use rayon::prelude::*;
use rayon::ThreadPool;

pub const THREADS_VAR: &str = "MDLAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum RunnerError {
    #[error("{THREADS_VAR} must be a positive integer, got {0:?}")]
    Threads(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

/// Pool sized by `MDLAB_THREADS` when set, else rayon's default.
pub fn pool_from_env() -> Result<ThreadPool, RunnerError> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(RunnerError::Threads(s)),
        },
        Err(_) => 0,
    };
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?)
}

/// Parallel form of `query_growth_experiment`: same records, same order.
pub fn query_growth(
    pool: &ThreadPool,
    m_list: &[usize],
    eps: Epsilon,
    vmax: Money,
    seed: u64,
) -> Result<Vec<ExperimentRecord>, RunnerError> {
    let rows = pool.install(|| {
        m_list
            .par_iter()
            .enumerate()
            .map(|(i, &m)| query_growth_row(i as u64, m, eps, vmax, seed))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(rows.into_iter().flat_map(|r| [r.exact, r.fptas]).collect())
}

/// Parallel form of `ratio_experiment`.
pub fn ratio(
    pool: &ThreadPool,
    mech: RatioMechanism,
    trials: u64,
    m: usize,
    vmax: Money,
    seed: u64,
) -> Result<RatioSummary, RunnerError> {
    let ratios = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let (v1, v2) = instance_for(seed, i, m, vmax);
                instance_ratio(mech, &v1, &v2)
            })
            .collect::<Result<Vec<_>, _>>()
    });
    let ratios = ratios.map_err(HarnessError::from)?;
    Ok(RatioSummary::summarize(ratios))
}
