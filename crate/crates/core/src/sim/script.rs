//! Rule-based strategies loaded from JSON.
//!
//! ```json
//! {"rules": [
//!   {"state": "p1", "when": [{"counter": 2, "op": ">", "value": 0}], "take": "p1"},
//!   {"state": "p1", "take": "p2"}
//! ]}
//! ```
//!
//! Counters are numbered from 1. A guard value is either an integer or
//! `{"entry": k, "scale": s, "offset": b}`, meaning `s·e + b` where `e` is the
//! value counter `k` had when the run last entered the current state from a
//! different state. The first rule whose state and guards match fires. `take`
//! names the target state; `update` disambiguates parallel transitions.

use serde::Deserialize;
use thiserror::Error;

use crate::model::{Config, StateId, TransitionId, VassMdp};
use crate::sim::strategy::{Strategy, StrategyError};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptedStrategy {
    pub rules: Vec<ScriptRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptRule {
    pub state: String,
    #[serde(default)]
    pub when: Vec<Guard>,
    pub take: String,
    #[serde(default)]
    pub update: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Guard {
    pub counter: usize,
    pub op: Comparison,
    pub value: GuardValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

impl Comparison {
    fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Comparison::Lt => a < b,
            Comparison::Le => a <= b,
            Comparison::Gt => a > b,
            Comparison::Ge => a >= b,
            Comparison::Eq => a == b,
            Comparison::Ne => a != b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum GuardValue {
    Constant(i64),
    Entry {
        entry: usize,
        #[serde(default = "one")]
        scale: i64,
        #[serde(default)]
        offset: i64,
    },
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("invalid script: {0}")]
    Syntax(String),
    #[error("rule {rule}: unknown state {state}")]
    UnknownState { rule: usize, state: String },
    #[error("rule {rule}: state {state} is probabilistic")]
    NotNondeterministic { rule: usize, state: String },
    #[error("rule {rule}: no transition from {from} to {to}{}", .update.as_ref().map(|u| format!(" with update {u:?}")).unwrap_or_default())]
    NoTransition {
        rule: usize,
        from: String,
        to: String,
        update: Option<Vec<i64>>,
    },
    #[error("rule {rule}: counter {counter} out of range 1..={dimension}")]
    CounterOutOfRange { rule: usize, counter: usize, dimension: usize },
    #[error("no rule for nondeterministic state {0}")]
    NotTotal(String),
}

impl ScriptedStrategy {
    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        serde_json::from_str(text).map_err(|e| ScriptError::Syntax(e.to_string()))
    }
}

#[derive(Debug, Clone)]
struct CompiledRule {
    state: StateId,
    guards: Vec<(usize, Comparison, GuardValue)>,
    transition: TransitionId,
}

/// Executable form of a script. One instance per run.
#[derive(Debug, Clone)]
pub struct CompiledScript {
    rules: Vec<CompiledRule>,
    state_names: Vec<String>,
    current: Option<StateId>,
    entry: Vec<i64>,
}

pub fn compile_script(model: &VassMdp, script: &ScriptedStrategy) -> Result<CompiledScript, ScriptError> {
    let d = model.dimension();
    let mut rules = Vec::new();
    for (i, r) in script.rules.iter().enumerate() {
        let rule = i + 1;
        let state = model.state_index(&r.state).ok_or_else(|| ScriptError::UnknownState {
            rule,
            state: r.state.clone(),
        })?;
        if !model.is_nondeterministic(state) {
            return Err(ScriptError::NotNondeterministic {
                rule,
                state: r.state.clone(),
            });
        }
        let target = model.state_index(&r.take).ok_or_else(|| ScriptError::UnknownState {
            rule,
            state: r.take.clone(),
        })?;
        let transition = model
            .outgoing(state)
            .iter()
            .copied()
            .find(|&t| {
                let tr = model.transition(t);
                tr.target == target && r.update.as_ref().is_none_or(|u| *u == tr.label)
            })
            .ok_or_else(|| ScriptError::NoTransition {
                rule,
                from: r.state.clone(),
                to: r.take.clone(),
                update: r.update.clone(),
            })?;
        let mut guards = Vec::new();
        for g in &r.when {
            let counters = match &g.value {
                GuardValue::Entry { entry, .. } => vec![g.counter, *entry],
                GuardValue::Constant(_) => vec![g.counter],
            };
            if let Some(&bad) = counters.iter().find(|&&c| c == 0 || c > d) {
                return Err(ScriptError::CounterOutOfRange {
                    rule,
                    counter: bad,
                    dimension: d,
                });
            }
            guards.push((g.counter - 1, g.op, g.value.clone()));
        }
        rules.push(CompiledRule {
            state,
            guards,
            transition,
        });
    }
    if let Some(s) = model.nondeterministic_states().find(|&s| !rules.iter().any(|r| r.state == s)) {
        return Err(ScriptError::NotTotal(model.state_id(s).to_string()));
    }
    Ok(CompiledScript {
        rules,
        state_names: model.states().iter().map(|s| s.id.clone()).collect(),
        current: None,
        entry: vec![0; d],
    })
}

impl Strategy for CompiledScript {
    fn start(&mut self, config: &Config) {
        self.current = Some(config.state);
        self.entry = config.counters.clone();
    }

    fn choose(&mut self, state: StateId, counters: &[i64]) -> Result<TransitionId, StrategyError> {
        let entry = &self.entry;
        self.rules
            .iter()
            .find(|r| {
                r.state == state
                    && r.guards.iter().all(|(k, op, v)| {
                        let rhs = match v {
                            GuardValue::Constant(c) => *c,
                            GuardValue::Entry { entry: e, scale, offset } => scale * entry[e - 1] + offset,
                        };
                        op.holds(counters[*k], rhs)
                    })
            })
            .map(|r| r.transition)
            .ok_or_else(|| StrategyError::NoRuleFires {
                state: self.state_names[state].clone(),
                counters: counters.to_vec(),
            })
    }

    fn on_step(&mut self, from: StateId, _transition: TransitionId, to: StateId, counters: &[i64]) {
        if from != to {
            self.entry = counters.to_vec();
        }
        self.current = Some(to);
    }
}

/// The doubling strategy on the three-MEC example: loop in `p1` while counter 2
/// is positive, then move to `p2`; loop in `p2` while counter 1 is positive,
/// then move to `r`; loop in `f` forever.
pub const FIG4_DOUBLING: &str = r#"{"rules": [
  {"state": "p1", "when": [{"counter": 2, "op": ">", "value": 0}], "take": "p1"},
  {"state": "p1", "take": "p2"},
  {"state": "p2", "when": [{"counter": 1, "op": ">", "value": 0}], "take": "p2"},
  {"state": "p2", "take": "r"},
  {"state": "f", "take": "f"}
]}
"#;
