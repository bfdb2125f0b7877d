//! Run reports, ground truth and query-growth sweeps.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::count::binomial;
use crate::engine::{estimate_hyperedges, PhaseRecord};
use crate::error::{Error, Result};
use crate::generate::{for_each_subset, generate, GeneratorSpec};
use crate::hypergraph::Hypergraph;
use crate::oracle::{Oracle, OracleConfig, OracleMode, QueryStats};
use crate::profile::{ConstantsProfile, ProfileMode};
use crate::Vertex;

/// Default cap on d-subsets examined by the ground-truth enumeration.
pub const DEFAULT_BRUTE_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub eps: f64,
    pub profile: ProfileMode,
    pub oracle_mode: OracleMode,
    pub seed: u64,
    pub brute_budget: u128,
    /// Record wall times; off makes reports byte-for-byte reproducible.
    pub timing: bool,
}

impl EstimateOptions {
    pub fn new(eps: f64, seed: u64) -> Self {
        Self {
            eps,
            profile: ProfileMode::Practical,
            oracle_mode: OracleMode::Direct,
            seed,
            brute_budget: DEFAULT_BRUTE_BUDGET,
            timing: true,
        }
    }
}

/// Everything one estimation run produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: usize,
    pub d: usize,
    pub eps: f64,
    pub profile: ProfileMode,
    pub oracle_mode: OracleMode,
    pub seed: u64,
    pub estimate: f64,
    /// The estimate as an exact fraction.
    pub estimate_exact: String,
    pub true_m: Option<u64>,
    pub rel_err: Option<f64>,
    pub queries: QueryStats,
    pub iterations: usize,
    pub trace: Vec<PhaseRecord>,
    pub failures: Vec<String>,
    pub wall_ms: f64,
    pub constants: ConstantsProfile,
}

/// `|estimate - m| / m`, or `None` when `m = 0`.
pub fn relative_error(estimate: f64, m: u64) -> Option<f64> {
    (m > 0).then(|| (estimate - m as f64).abs() / m as f64)
}

/// `m(H)` by testing every d-subset of the vertex set for membership, or
/// `None` when there are more than `budget` of them.
pub fn brute_m(h: &Hypergraph, budget: u128) -> Option<u64> {
    if binomial(h.n() as u64, h.d() as u64) > budget {
        return None;
    }
    let mut count = 0;
    let mut edge: Vec<Vertex> = vec![0; h.d()];
    for_each_subset(h.n(), h.d(), |idx| {
        for (slot, &i) in edge.iter_mut().zip(idx) {
            *slot = i as Vertex;
        }
        if h.contains_edge(&edge) {
            count += 1;
        }
    });
    Some(count)
}

pub fn run_estimate(h: &Hypergraph, opts: &EstimateOptions) -> Result<RunReport> {
    let start = Instant::now();
    let profile = ConstantsProfile::new(opts.profile, h.n(), h.d(), opts.eps, opts.seed)?;
    let config = OracleConfig::new(opts.oracle_mode, profile.gpis1_reps);
    let mut oracle = Oracle::new(h, config, opts.seed);
    let outcome = estimate_hyperedges(&mut oracle, &profile)?;
    let mut queries = oracle.snapshot();
    let true_m = brute_m(h, opts.brute_budget);
    let estimate = outcome.estimate_f64();
    let mut wall_ms = start.elapsed().as_secs_f64() * 1e3;
    if !opts.timing {
        queries.wall_ms = 0.0;
        wall_ms = 0.0;
    }
    Ok(RunReport {
        n: h.n(),
        d: h.d(),
        eps: opts.eps,
        profile: opts.profile,
        oracle_mode: opts.oracle_mode,
        seed: opts.seed,
        estimate,
        estimate_exact: outcome.estimate.to_string(),
        true_m,
        rel_err: true_m.and_then(|m| relative_error(estimate, m)),
        queries,
        iterations: outcome.iterations,
        trace: outcome.trace,
        failures: outcome.failures,
        wall_ms,
        constants: profile,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub d: usize,
    /// Sweep `n = 2^log_n_from, .., 2^log_n_to`.
    pub log_n_from: u32,
    pub log_n_to: u32,
    /// Hyperedges per vertex: `m = density * n`.
    pub density: usize,
    pub estimate: EstimateOptions,
    pub repeat: usize,
    pub jobs: usize,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub d: usize,
    pub eps: f64,
    pub seed: u64,
    pub profile: String,
    pub oracle_mode: String,
    pub gpis: u64,
    pub gpis1: u64,
    pub gpis2: u64,
    pub estimate: f64,
    pub true_m: Option<u64>,
    pub rel_err: Option<f64>,
    pub wall_ms: f64,
}

impl SweepRow {
    /// All queries regardless of kind.
    pub fn total_queries(&self) -> u64 {
        self.gpis + self.gpis1 + self.gpis2
    }
}

/// Runs every (n, repetition) point on a random hypergraph with `density * n`
/// hyperedges. Rows come back in point order whatever `jobs` is.
pub fn run_sweep(opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    if opts.log_n_from > opts.log_n_to || opts.repeat == 0 {
        return Err(Error::InvalidParameter("sweep range is empty".into()));
    }
    if opts.log_n_to >= usize::BITS - 1 {
        return Err(Error::InvalidParameter("n is too large".into()));
    }
    let points: Vec<(usize, u64)> = (opts.log_n_from..=opts.log_n_to)
        .flat_map(|a| (0..opts.repeat as u64).map(move |r| (1usize << a, r)))
        .collect();
    let run_point = |&(n, rep): &(usize, u64)| -> Result<SweepRow> {
        let seed = opts.estimate.seed.wrapping_add(rep);
        let h = generate(&GeneratorSpec::random(n, opts.d, opts.density * n, seed))?;
        let report = run_estimate(&h, &EstimateOptions { seed, ..opts.estimate.clone() })?;
        Ok(SweepRow {
            n,
            d: opts.d,
            eps: opts.estimate.eps,
            seed,
            profile: opts.estimate.profile.name().into(),
            oracle_mode: opts.estimate.oracle_mode.name().into(),
            gpis: report.queries.gpis,
            gpis1: report.queries.gpis1,
            gpis2: report.queries.gpis2,
            estimate: report.estimate,
            true_m: report.true_m,
            rel_err: report.rel_err,
            wall_ms: report.wall_ms,
        })
    };

    let results: Mutex<Vec<Option<Result<SweepRow>>>> =
        Mutex::new((0..points.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = opts.jobs.clamp(1, points.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= points.len() {
                    break;
                }
                let row = run_point(&points[i]);
                results.lock().expect("no worker panics while holding the lock")[i] = Some(row);
            });
        }
    });
    results
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every point ran"))
        .collect()
}

pub const SWEEP_HEADER: &str = "n,d,eps,seed,profile,oracle_mode,gpis,gpis1,gpis2,estimate,true_m,rel_err,wall_ms";

pub fn write_sweep_csv(rows: &[SweepRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Mean total queries per `n`, in sweep order.
pub fn mean_queries_by_n(rows: &[SweepRow]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64, usize)> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some((n, sum, count)) if *n == r.n => {
                *sum += r.total_queries() as f64;
                *count += 1;
            }
            _ => out.push((r.n, r.total_queries() as f64, 1)),
        }
    }
    out.into_iter().map(|(n, sum, c)| (n, sum / c as f64)).collect()
}

/// `queries(2n) / queries(n)` for consecutive sweep points.
pub fn doubling_ratios(rows: &[SweepRow]) -> Vec<(usize, f64)> {
    mean_queries_by_n(rows).windows(2).map(|w| (w[1].0, w[1].1 / w[0].1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_enumeration_agrees_with_edge_count() {
        let h = generate(&GeneratorSpec::random(12, 3, 40, 1)).unwrap();
        assert_eq!(brute_m(&h, DEFAULT_BRUTE_BUDGET), Some(40));
        assert_eq!(brute_m(&h, 10), None);
    }

    #[test]
    fn relative_error_needs_positive_truth() {
        assert_eq!(relative_error(5.0, 0), None);
        assert_eq!(relative_error(90.0, 100), Some(0.1));
    }

    #[test]
    fn reports_without_timing_are_reproducible() {
        let h = generate(&GeneratorSpec::random(64, 2, 300, 2)).unwrap();
        let opts = EstimateOptions { timing: false, ..EstimateOptions::new(0.5, 7) };
        let a = serde_json::to_string(&run_estimate(&h, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&run_estimate(&h, &opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_rows_keep_point_order() {
        let opts = SweepOptions {
            d: 2,
            log_n_from: 4,
            log_n_to: 5,
            density: 2,
            estimate: EstimateOptions { timing: false, ..EstimateOptions::new(0.5, 3) },
            repeat: 2,
            jobs: 3,
        };
        let rows = run_sweep(&opts).unwrap();
        let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![16, 16, 32, 32]);
        assert_ne!(rows[0].seed, rows[1].seed);
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER);
        assert_eq!(text.lines().count(), 5);
        assert_eq!(rows, run_sweep(&SweepOptions { jobs: 1, ..opts }).unwrap());
    }
}
