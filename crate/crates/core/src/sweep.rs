//! Parallel verification sweeps with an order-independent merge.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::verify_ls_within;
use crate::limits::Limits;
use crate::oracle::VerificationReport;

/// Outcome of a sweep. `passes + failures.len() == total`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub range: String,
    pub total: usize,
    pub passes: usize,
    pub failures: Vec<VerificationReport>,
    pub wall_time_secs: f64,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Default worker count: the available parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs `check` over `cases` on `workers` threads.
///
/// Results are collected in case order, so the summary does not depend on the worker
/// count. The first error in case order aborts the sweep.
pub fn run<T, F>(range: impl Into<String>, cases: &[T], workers: usize, check: F) -> Result<SweepSummary>
where
    T: Sync,
    F: Fn(&T) -> Result<VerificationReport> + Sync + Send,
{
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    let reports: Vec<Result<VerificationReport>> = pool.install(|| cases.par_iter().map(&check).collect());
    let mut failures = Vec::new();
    let mut passes = 0;
    for report in reports {
        let report = report?;
        if report.passed {
            passes += 1;
        } else {
            failures.push(report);
        }
    }
    Ok(SweepSummary {
        range: range.into(),
        total: cases.len(),
        passes,
        failures,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Reciprocity check over the grid `1 ≤ a ≤ max_a`, `1 ≤ b ≤ max_b`.
pub fn verify_ls_grid(max_a: u64, max_b: u64, tol: f64, workers: usize, limits: &Limits) -> Result<SweepSummary> {
    let cases: Vec<(u64, u64)> = (1..=max_a)
        .flat_map(|a| (1..=max_b).map(move |b| (a, b)))
        .collect();
    run(
        format!("1 <= a <= {max_a}, 1 <= b <= {max_b}"),
        &cases,
        workers,
        |&(a, b)| verify_ls_within(a, b, tol, limits),
    )
}
