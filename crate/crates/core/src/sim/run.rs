//! Single-run semantics and the seeded random streams.
//!
//! Every trial draws from its own ChaCha8 stream: the 32-byte key holds the
//! seed and the grid value `n` (little endian, zero padded) and the stream id
//! is the trial index. Serial and parallel execution therefore see the same
//! draws.

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Config, StateId, TransitionId, VassMdp};
use crate::sim::strategy::{Strategy, StrategyError};

pub fn trial_rng(seed: u64, n: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&n.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Total weight and cumulative `(bound, transition)` pairs.
type BranchTable = (u64, Vec<(u64, TransitionId)>);

/// Exact branch sampling: each probabilistic state gets integer weights over
/// the least common multiple of its denominators.
#[derive(Debug, Clone)]
pub struct BranchSampler {
    tables: Vec<Option<BranchTable>>,
}

impl BranchSampler {
    pub fn new(model: &VassMdp) -> Self {
        let tables = (0..model.num_states())
            .map(|s| {
                if model.is_nondeterministic(s) {
                    return None;
                }
                let probs: Vec<_> = model.outgoing(s).iter().map(|&t| (t, model.transition(t).weight())).collect();
                let lcm = probs
                    .iter()
                    .fold(num_bigint::BigInt::from(1), |acc, (_, p)| acc.lcm(p.denom()));
                let total = lcm.to_u64().expect("denominator LCM fits in u64");
                let mut cum = 0u64;
                let table = probs
                    .iter()
                    .map(|(t, p)| {
                        let w = (p.numer() * (&lcm / p.denom())).to_u64().expect("weight fits");
                        cum += w;
                        (cum, *t)
                    })
                    .collect();
                Some((total, table))
            })
            .collect();
        BranchSampler { tables }
    }

    pub fn sample(&self, s: StateId, rng: &mut impl Rng) -> TransitionId {
        let (total, table) = self.tables[s].as_ref().expect("probabilistic state");
        let x = rng.random_range(0..*total);
        table
            .iter()
            .find(|(cum, _)| x < *cum)
            .map(|(_, t)| *t)
            .expect("weights sum to the total")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermOutcome {
    Terminated(u64),
    Censored(u64),
}

impl TermOutcome {
    /// `min(Term, horizon)`.
    pub fn truncated(&self) -> u64 {
        match *self {
            TermOutcome::Terminated(t) | TermOutcome::Censored(t) => t,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, TermOutcome::Censored(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub transition: TransitionId,
    pub state: StateId,
    pub counters: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub initial: Config,
    /// Present when the run was recorded.
    pub steps: Option<Vec<Step>>,
    pub term: TermOutcome,
    /// Steps executed (may exceed `term` when running on to the end of the scheme).
    pub length: u64,
    pub final_config: Config,
    /// Minimum over prefixes (up to `sim_len` when known) of the running sums
    /// `C^(k) = v_k - v_0`, per counter.
    pub accumulator_min: Vec<i64>,
    pub sim_len: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub horizon: u64,
    pub record: bool,
    /// Keep running after termination until the scheme portion completes.
    pub until_sim_len: bool,
}

impl RunOptions {
    pub fn horizon(horizon: u64) -> Self {
        RunOptions {
            horizon,
            record: false,
            until_sim_len: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("start configuration has {got} counters, model has {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("horizon must be at least 1")]
    ZeroHorizon,
}

pub fn run_once(
    model: &VassMdp,
    sampler: &BranchSampler,
    strategy: &mut dyn Strategy,
    start: &Config,
    options: RunOptions,
    rng: &mut impl Rng,
) -> Result<RunTrace, RunError> {
    if options.horizon == 0 {
        return Err(RunError::ZeroHorizon);
    }
    if start.counters.len() != model.dimension() {
        return Err(RunError::Dimension {
            expected: model.dimension(),
            got: start.counters.len(),
        });
    }
    strategy.start(start);
    let mut state = start.state;
    let mut counters = start.counters.clone();
    let mut term = start.is_terminal().then_some(0u64);
    let mut acc_min = vec![0i64; counters.len()];
    let mut steps = options.record.then(Vec::new);
    let mut length = 0u64;
    while length < options.horizon {
        let scheme_pending = options.until_sim_len && strategy.tracks_sim_len() && strategy.sim_len().is_none();
        if term.is_some() && !scheme_pending {
            break;
        }
        let t = if model.is_nondeterministic(state) {
            let t = strategy.choose(state, &counters)?;
            if model.transition(t).source != state {
                return Err(StrategyError::Incompatible {
                    state: model.state_id(state).to_string(),
                    transition: t,
                }
                .into());
            }
            t
        } else {
            sampler.sample(state, rng)
        };
        let tr = model.transition(t);
        for (c, u) in counters.iter_mut().zip(&tr.label) {
            *c += u;
        }
        let from = state;
        state = tr.target;
        length += 1;
        strategy.on_step(from, t, state, &counters);
        if strategy.sim_len().is_none_or(|l| length <= l) {
            for ((m, c), c0) in acc_min.iter_mut().zip(&counters).zip(&start.counters) {
                *m = (*m).min(c - c0);
            }
        }
        if term.is_none() && counters.iter().any(|&c| c < 0) {
            term = Some(length);
        }
        if let Some(s) = steps.as_mut() {
            s.push(Step {
                transition: t,
                state,
                counters: counters.clone(),
            });
        }
    }
    Ok(RunTrace {
        initial: start.clone(),
        steps,
        term: match term {
            Some(t) => TermOutcome::Terminated(t),
            None => TermOutcome::Censored(options.horizon),
        },
        length,
        final_config: Config::new(state, counters),
        accumulator_min: acc_min,
        sim_len: strategy.sim_len(),
    })
}

/// Independent re-check of a recorded trace: additive updates, consistent
/// states, and `term` the first index with a negative counter.
pub fn audit_trace(model: &VassMdp, trace: &RunTrace) -> Result<(), String> {
    let steps = trace.steps.as_ref().ok_or("trace was not recorded")?;
    let mut state = trace.initial.state;
    let mut v = trace.initial.counters.clone();
    let mut first = if v.iter().any(|&c| c < 0) { Some(0) } else { None };
    for (k, step) in steps.iter().enumerate() {
        let tr = model.transition(step.transition);
        if tr.source != state || tr.target != step.state {
            return Err(format!("step {} does not follow the model graph", k + 1));
        }
        for (c, u) in v.iter_mut().zip(&tr.label) {
            *c += u;
        }
        if v != step.counters {
            return Err(format!("step {} breaks the additive update law", k + 1));
        }
        if first.is_none() && v.iter().any(|&c| c < 0) {
            first = Some(k as u64 + 1);
        }
        state = step.state;
    }
    match (first, trace.term) {
        (Some(a), TermOutcome::Terminated(b)) if a == b => Ok(()),
        (None, TermOutcome::Censored(_)) => Ok(()),
        (a, b) => Err(format!("term mismatch: recomputed {a:?}, recorded {b:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StateKind::Nondeterministic as N;
    use crate::models;
    use crate::oracle::MdStrategy;

    fn run(model: &VassMdp, strat: &mut dyn Strategy, start: Config, horizon: u64, seed: u64) -> RunTrace {
        let sampler = BranchSampler::new(model);
        let mut rng = trial_rng(seed, 0, 0);
        let opts = RunOptions {
            horizon,
            record: true,
            until_sim_len: false,
        };
        run_once(model, &sampler, strat, &start, opts, &mut rng).unwrap()
    }

    #[test]
    fn countdown_terminates_after_n_plus_one() {
        let m = models::countdown();
        let mut s = MdStrategy::first_choices(&m);
        for seed in 0..5 {
            let t = run(&m, &mut s, Config::new(0, vec![5]), 100, seed);
            assert_eq!(t.term, TermOutcome::Terminated(6));
            audit_trace(&m, &t).unwrap();
        }
    }

    #[test]
    fn increasing_loop_is_censored() {
        let m = VassMdp::build(1, &[("s", N)], &[("s", &[1], "s", None)]).unwrap();
        let mut s = MdStrategy::first_choices(&m);
        let t = run(&m, &mut s, Config::new(0, vec![0]), 100, 1);
        assert_eq!(t.term, TermOutcome::Censored(100));
        assert_eq!(t.length, 100);
        audit_trace(&m, &t).unwrap();
    }

    #[test]
    fn a2_deterministic_cycle() {
        let m = models::a2();
        let strategies = crate::oracle::enumerate_md_strategies(&m, 10).unwrap();
        let mut s = strategies[0].clone();
        let t = run(&m, &mut s, Config::new(0, vec![3, 3]), 1000, 0);
        assert_eq!(t.term, TermOutcome::Terminated(4));
        assert_eq!(t.final_config.counters, vec![-1, -1]);
    }

    #[test]
    fn replay_is_bit_identical() {
        let m = models::a1();
        let mut s = crate::oracle::enumerate_md_strategies(&m, 10).unwrap()[3].clone();
        let a = run(&m, &mut s, Config::new(0, vec![20, 20]), 10_000, 42);
        let b = run(&m, &mut s, Config::new(0, vec![20, 20]), 10_000, 42);
        assert_eq!(a, b);
        audit_trace(&m, &a).unwrap();
    }

    #[test]
    fn sampler_respects_probabilities() {
        let m = models::fig4();
        let sampler = BranchSampler::new(&m);
        let r = m.state_index("r").unwrap();
        let mut rng = trial_rng(7, 0, 0);
        let draws = 40_000;
        let to_p1 = (0..draws)
            .filter(|_| m.transition(sampler.sample(r, &mut rng)).target == 0)
            .count();
        let freq = to_p1 as f64 / draws as f64;
        assert!((freq - 0.25).abs() < 0.01, "{freq}");
    }

    #[test]
    fn streams_differ_by_trial() {
        let mut a = trial_rng(1, 10, 0);
        let mut b = trial_rng(1, 10, 1);
        let xa: u64 = a.random();
        let xb: u64 = b.random();
        assert_ne!(xa, xb);
    }
}
