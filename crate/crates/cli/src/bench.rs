//! The `bench` subcommand: seeded batches of learning trials.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stablearn::circuit::{random_clifford, random_tdepth1};
use stablearn::{CliffordConfig, TDepth1Config};

use crate::args::{parse_range, BenchArgs, Kind};
use crate::commands::write_or_print;
use crate::learn::{backend_name, kind_name, learn_target, LearnSettings, Target};
use crate::report::{ExperimentReport, RNG_NAME};
use crate::CliError;

/// Tolerance on basis fidelities used by every trial.
pub const BENCH_TOL: f64 = 1e-9;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "STABLEARN_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub p50_s: f64,
    pub p90_s: f64,
    pub max_s: f64,
}

/// Aggregate of the trials for one `(n, k)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Lower bound on the success probability claimed for this cell.
    pub bound: f64,
    pub queries_min: u64,
    pub queries_max: u64,
    pub queries_mean: f64,
    pub query_budget: u64,
    pub over_budget: usize,
    pub retries: usize,
    /// Failure counts keyed by axis structure for T-depth-one cells, or by
    /// `"all"` otherwise.
    pub failures: BTreeMap<String, usize>,
    /// Trial indices that failed.
    pub failed_trials: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub suite: String,
    pub seed: u64,
    pub rng: String,
    pub backend: String,
    pub trials_per_cell: usize,
    pub cells: Vec<CellSummary>,
}

/// Stream id of one trial; distinct for every `(n, k, trial)`.
pub fn stream_id(n: usize, k: usize, trial: usize) -> u64 {
    ((n as u64) << 48) | ((k as u64) << 40) | trial as u64
}

/// Runs one seeded trial: draws a target from its own stream and learns it.
pub fn run_trial(
    suite: Kind,
    n: usize,
    k: usize,
    trial: usize,
    settings: &LearnSettings,
) -> Result<ExperimentReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    rng.set_stream(stream_id(n, k, trial));
    let target = match suite {
        Kind::Clifford => Target::Clifford(random_clifford(n, &mut rng)),
        Kind::Tdepth1 => Target::classify(
            random_tdepth1(n, k, &mut rng)
                .map_err(|e| CliError::Usage(e.to_string()))?
                .to_circuit(),
        ),
    };
    let bytes = target.circuit().to_json();
    Ok(learn_target(&target, bytes.as_bytes(), settings, &mut rng)?.1)
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

fn summarize(n: usize, k: usize, suite: Kind, reports: &[ExperimentReport], timing: bool) -> CellSummary {
    let trials = reports.len();
    let successes = reports.iter().filter(|r| r.success).count();
    let queries: Vec<u64> = reports.iter().map(|r| r.total_queries).collect();
    let mut failures = BTreeMap::new();
    let mut failed_trials = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        if !r.success {
            let key = r.axis_structure.clone().unwrap_or_else(|| "all".into());
            *failures.entry(key).or_insert(0) += 1;
            failed_trials.push(i);
        }
    }
    let bound = match suite {
        Kind::Clifford => 1.0 - 2f64.powi(1 - n as i32),
        Kind::Tdepth1 => 1.0 - 3.0 * (-(n as f64)).exp(),
    };
    let timing = timing.then(|| {
        let mut t: Vec<f64> = reports.iter().filter_map(|r| r.wall_time_s).collect();
        t.sort_by(f64::total_cmp);
        Timing {
            p50_s: percentile(&t, 0.5),
            p90_s: percentile(&t, 0.9),
            max_s: *t.last().unwrap_or(&0.0),
        }
    });
    let budget = reports.first().map_or(0, |r| r.query_budget);
    CellSummary {
        n,
        k,
        trials,
        successes,
        success_rate: successes as f64 / trials.max(1) as f64,
        bound,
        queries_min: queries.iter().copied().min().unwrap_or(0),
        queries_max: queries.iter().copied().max().unwrap_or(0),
        queries_mean: queries.iter().sum::<u64>() as f64 / trials.max(1) as f64,
        query_budget: budget,
        over_budget: reports
            .iter()
            .filter(|r| r.net_queries() > r.query_budget)
            .count(),
        retries: reports.iter().map(|r| r.retries).sum(),
        failures,
        failed_trials,
        timing,
    }
}

/// Runs every cell of the suite.
pub fn run_suite(a: &BenchArgs) -> Result<BenchReport, CliError> {
    let (lo, hi) = parse_range(&a.n_range)
        .ok_or_else(|| CliError::Usage(format!("bad --n-range {:?}", a.n_range)))?;
    if lo == 0 || a.trials == 0 {
        return Err(CliError::Usage("n and trials must be positive".into()));
    }
    let settings = LearnSettings {
        algo: a.suite,
        backend: a.backend.into(),
        seed: a.seed,
        tol: BENCH_TOL,
        clifford: CliffordConfig::default(),
        tdepth1: TDepth1Config::default(),
        timing: a.timing,
    };
    let cells: Vec<(usize, usize)> = (lo..=hi)
        .flat_map(|n| {
            let kmax = match a.suite {
                Kind::Clifford => 0,
                Kind::Tdepth1 => a.k_max.min(n),
            };
            (0..=kmax).map(move |k| (n, k))
        })
        .collect();
    let jobs: Vec<(usize, usize, usize)> = cells
        .iter()
        .flat_map(|&(n, k)| (0..a.trials).map(move |t| (n, k, t)))
        .collect();
    let run = || {
        jobs.par_iter()
            .map(|&(n, k, t)| run_trial(a.suite, n, k, t, &settings).map(|r| ((n, k, t), r)))
            .collect::<Result<BTreeMap<_, _>, CliError>>()
    };
    let results = match thread_cap() {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let cells = cells
        .iter()
        .map(|&(n, k)| {
            let reports: Vec<ExperimentReport> = (0..a.trials)
                .map(|t| results[&(n, k, t)].clone())
                .collect();
            summarize(n, k, a.suite, &reports, a.timing)
        })
        .collect();
    Ok(BenchReport {
        suite: kind_name(a.suite).into(),
        seed: a.seed,
        rng: RNG_NAME.into(),
        backend: backend_name(a.backend.into()).into(),
        trials_per_cell: a.trials,
        cells,
    })
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&t: &usize| t > 0)
}

pub fn bench(a: &BenchArgs) -> Result<(), CliError> {
    let report = run_suite(a)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_or_print(a.report.as_deref(), &json)?;
    for c in &report.cells {
        eprintln!(
            "n={} k={} success {}/{} bound {:.4} queries {}..{} budget {}",
            c.n, c.k, c.successes, c.trials, c.bound, c.queries_min, c.queries_max, c.query_budget
        );
    }
    Ok(())
}
