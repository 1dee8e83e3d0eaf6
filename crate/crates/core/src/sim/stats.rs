//! Grid estimation of termination-time statistics and event frequencies.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{Config, VassMdp};
use crate::sim::event::{ExprError, SafetyEvent, SizeExpr};
use crate::sim::fit::{fit_exponent_tail, FitError};
use crate::sim::run::{run_once, trial_rng, BranchSampler, RunError, RunOptions};
use crate::sim::strategy::Strategy;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("strategy setup failed for n = {n}: {message}")]
    Setup { n: u64, message: String },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("could not build a worker pool: {0}")]
    Pool(String),
}

/// Builds a fresh strategy instance and start configuration for grid value `n`.
pub type StrategyFactory<'a> = dyn Fn(u64) -> Result<(Box<dyn Strategy>, Config), String> + Sync + 'a;

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub grid: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub horizon: SizeExpr,
    pub event: Option<SafetyEvent>,
    /// Worker cap; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Divisor of the scheme length `L(n) = ⌊n / d⌋`, for `L^2` thresholds.
    pub scheme_denominator: Option<u64>,
}

impl SimConfig {
    pub fn new(grid: Vec<u64>, trials: u64, seed: u64) -> Self {
        SimConfig {
            grid,
            trials,
            seed,
            horizon: DEFAULT_HORIZON,
            event: None,
            jobs: None,
            scheme_denominator: None,
        }
    }

    pub fn length(&self, n: u64) -> Option<u64> {
        self.scheme_denominator.map(|d| n / d)
    }
}

/// `64·n²`.
pub const DEFAULT_HORIZON: SizeExpr = SizeExpr::Power { c: 64.0, p: 2.0 };

/// Exact per-`n` accumulator; merging is associative and commutative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Accumulator {
    pub trials: u64,
    pub sum: u128,
    pub sum_sq: u128,
    pub censored: u64,
    pub events: u64,
    pub values: Vec<u64>,
}

impl Accumulator {
    pub fn push(&mut self, value: u64, censored: bool, event: bool) {
        self.trials += 1;
        self.sum += value as u128;
        self.sum_sq += (value as u128) * (value as u128);
        self.censored += censored as u64;
        self.events += event as u64;
        self.values.push(value);
    }

    pub fn merge(mut self, other: Accumulator) -> Accumulator {
        self.trials += other.trials;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.censored += other.censored;
        self.events += other.events;
        self.values.extend(other.values);
        self
    }

    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.trials as f64
    }

    /// Standard error of the mean (sample variance with `k - 1`).
    pub fn stderr(&self) -> f64 {
        if self.trials < 2 {
            return 0.0;
        }
        let k = self.trials as f64;
        // exact numerator: k·Σx² − (Σx)²
        let num = self.trials as u128 * self.sum_sq - self.sum * self.sum;
        let var = num as f64 / (k * (k - 1.0));
        (var / k).sqrt()
    }

    /// Nearest-rank quantile.
    pub fn quantile(&self, q: f64) -> u64 {
        let mut sorted = self.values.clone();
        sorted.sort_unstable();
        let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
        sorted[rank - 1]
    }
}

/// Wilson score interval at `z = 1.96`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96f64;
    let k = trials as f64;
    let p = successes as f64 / k;
    let denom = 1.0 + z * z / k;
    let centre = (p + z * z / (2.0 * k)) / denom;
    let half = z * ((p * (1.0 - p) / k) + z * z / (4.0 * k * k)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub n: u64,
    pub trials: u64,
    pub mean_term: f64,
    pub stderr: f64,
    pub q50: u64,
    pub q90: u64,
    pub q99: u64,
    pub censored: u64,
    pub event_freq: Option<f64>,
    pub event_ci_low: Option<f64>,
    pub event_ci_high: Option<f64>,
    #[serde(skip)]
    pub sum: u128,
    #[serde(skip)]
    pub events: u64,
    #[serde(skip)]
    pub horizon: u64,
}

impl GridRow {
    fn from_acc(n: u64, horizon: u64, acc: &Accumulator, with_event: bool) -> Self {
        let ci = with_event.then(|| wilson_interval(acc.events, acc.trials));
        GridRow {
            n,
            trials: acc.trials,
            mean_term: acc.mean(),
            stderr: acc.stderr(),
            q50: acc.quantile(0.5),
            q90: acc.quantile(0.9),
            q99: acc.quantile(0.99),
            censored: acc.censored,
            event_freq: with_event.then(|| acc.events as f64 / acc.trials as f64),
            event_ci_low: ci.map(|c| c.0),
            event_ci_high: ci.map(|c| c.1),
            sum: acc.sum,
            events: acc.events,
            horizon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    pub seed: u64,
    pub horizon: String,
    pub event: Option<String>,
    pub rows: Vec<GridRow>,
}

impl SimStats {
    /// Truncated means `(n, mean)` for exponent fitting.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.n as f64, r.mean_term)).collect()
    }

    pub fn fitted_exponent(&self) -> Result<f64, FitError> {
        fit_exponent_tail(&self.points())
    }

    /// Event frequencies never drop significantly along the grid: each point's
    /// interval upper end reaches the previous point's lower end.
    pub fn event_trend_nondecreasing(&self) -> Option<bool> {
        let rows: Vec<&GridRow> = self.rows.iter().filter(|r| r.event_freq.is_some()).collect();
        if rows.is_empty() {
            return None;
        }
        Some(rows.windows(2).all(|w| w[1].event_ci_high.unwrap() >= w[0].event_ci_low.unwrap()))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("rows serialize");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
    }
}

fn run_trials(
    model: &VassMdp,
    sampler: &BranchSampler,
    factory: &StrategyFactory<'_>,
    cfg: &SimConfig,
    n: u64,
    horizon: u64,
) -> Result<Accumulator, SimError> {
    let length = cfg.length(n);
    let until_sim_len = cfg.event.as_ref().is_some_and(|e| e.needs_scheme());
    let results: Vec<Result<(u64, bool, bool), SimError>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let (mut strategy, start) = factory(n).map_err(|message| SimError::Setup { n, message })?;
            if until_sim_len && !strategy.tracks_sim_len() {
                return Err(ExprError::MSafeNeedsScheme.into());
            }
            let mut rng = trial_rng(cfg.seed, n, trial);
            let opts = RunOptions {
                horizon,
                record: false,
                until_sim_len,
            };
            let trace = run_once(model, sampler, strategy.as_mut(), &start, opts, &mut rng)?;
            let event = match &cfg.event {
                Some(e) => e.holds(&trace, n, length)?,
                None => false,
            };
            Ok((trace.term.truncated(), trace.term.is_censored(), event))
        })
        .collect();
    let mut acc = Accumulator::default();
    for r in results {
        let (v, c, e) = r?;
        acc.push(v, c, e);
    }
    Ok(acc)
}

/// Runs `cfg.trials` independent trials per grid value. Deterministic in
/// `(seed, grid, trials)` regardless of the worker count.
pub fn estimate_statistics(
    model: &VassMdp,
    factory: &StrategyFactory<'_>,
    cfg: &SimConfig,
) -> Result<SimStats, SimError> {
    if cfg.trials == 0 {
        return Err(SimError::NoTrials);
    }
    if let Some(e) = &cfg.event {
        if e.uses_length() && cfg.scheme_denominator.is_none() {
            return Err(ExprError::NoSchemeLength.into());
        }
    }
    let sampler = BranchSampler::new(model);
    let work = || -> Result<Vec<GridRow>, SimError> {
        cfg.grid
            .iter()
            .map(|&n| {
                let horizon = cfg.horizon.eval_floor(n, cfg.length(n))?.max(1);
                let acc = run_trials(model, &sampler, factory, cfg, n, horizon)?;
                Ok(GridRow::from_acc(n, horizon, &acc, cfg.event.is_some()))
            })
            .collect()
    };
    let rows = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| SimError::Pool(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    Ok(SimStats {
        seed: cfg.seed,
        horizon: cfg.horizon.to_string(),
        event: cfg.event.map(|e| e.to_string()),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventEstimate {
    pub n: u64,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Event frequencies with Wilson intervals along the grid.
pub fn estimate_event(
    model: &VassMdp,
    factory: &StrategyFactory<'_>,
    cfg: &SimConfig,
    event: SafetyEvent,
) -> Result<Vec<EventEstimate>, SimError> {
    let mut cfg = cfg.clone();
    cfg.event = Some(event);
    let stats = estimate_statistics(model, factory, &cfg)?;
    Ok(stats
        .rows
        .iter()
        .map(|r| EventEstimate {
            n: r.n,
            frequency: r.event_freq.unwrap_or(0.0),
            ci_low: r.event_ci_low.unwrap_or(0.0),
            ci_high: r.event_ci_high.unwrap_or(1.0),
        })
        .collect())
}
