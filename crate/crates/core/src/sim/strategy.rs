//! The strategy interface used by the simulator.

use thiserror::Error;

use crate::model::{Config, StateId, TransitionId};
use crate::oracle::MdStrategy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("no rule fires at state {state} with counters {counters:?}")]
    NoRuleFires { state: String, counters: Vec<i64> },
    #[error("strategy has no choice at state {0}")]
    NoChoice(String),
    #[error("strategy chose transition {transition} which does not leave state {state}")]
    Incompatible { state: String, transition: TransitionId },
}

/// A (possibly history-dependent) strategy. `choose` is consulted at
/// nondeterministic states only; `on_step` observes every step, including
/// probabilistic ones, so controllers can count steps.
pub trait Strategy: Send {
    fn start(&mut self, _config: &Config) {}

    fn choose(&mut self, state: StateId, counters: &[i64]) -> Result<TransitionId, StrategyError>;

    fn on_step(&mut self, _from: StateId, _transition: TransitionId, _to: StateId, _counters: &[i64]) {}

    /// Steps consumed by the scheme portion, once it has completed.
    fn sim_len(&self) -> Option<u64> {
        None
    }

    /// Whether this strategy has a scheme portion at all.
    fn tracks_sim_len(&self) -> bool {
        false
    }
}

impl Strategy for MdStrategy {
    fn choose(&mut self, state: StateId, _counters: &[i64]) -> Result<TransitionId, StrategyError> {
        self.choice
            .get(state)
            .copied()
            .flatten()
            .ok_or_else(|| StrategyError::NoChoice(state.to_string()))
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn start(&mut self, config: &Config) {
        (**self).start(config)
    }
    fn choose(&mut self, state: StateId, counters: &[i64]) -> Result<TransitionId, StrategyError> {
        (**self).choose(state, counters)
    }
    fn on_step(&mut self, from: StateId, transition: TransitionId, to: StateId, counters: &[i64]) {
        (**self).on_step(from, transition, to, counters)
    }
    fn sim_len(&self) -> Option<u64> {
        (**self).sim_len()
    }
    fn tracks_sim_len(&self) -> bool {
        (**self).tracks_sim_len()
    }
}
