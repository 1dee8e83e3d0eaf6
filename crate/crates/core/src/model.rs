//! VASS MDP data model and its JSON model-file format.
//!
//! States are addressed by [`StateId`] indices assigned in declaration order; the
//! textual ids are kept for reports and file round-trips. Transitions are likewise
//! indexed in declaration order, and the outgoing list of each state preserves it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, dot_int, Rational};

pub type StateId = usize;
pub type TransitionId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateKind {
    #[serde(rename = "n")]
    Nondeterministic,
    #[serde(rename = "p")]
    Probabilistic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: String,
    pub kind: StateKind,
}

/// A labelled transition. `probability` is present iff the source is probabilistic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition<L> {
    pub source: StateId,
    pub label: L,
    pub target: StateId,
    pub probability: Option<Rational>,
}

impl<L> Transition<L> {
    /// Probability of taking this transition once its source is entered (1 for
    /// nondeterministic sources, whose choice is made by a strategy).
    pub fn weight(&self) -> Rational {
        self.probability.clone().unwrap_or_else(Rational::one)
    }
}

/// An MDP whose transitions carry labels of type `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mdp<L> {
    dimension: usize,
    states: Vec<State>,
    transitions: Vec<Transition<L>>,
    outgoing: Vec<Vec<TransitionId>>,
    index: HashMap<String, StateId>,
}

/// Integer counter updates of length `dimension`.
pub type VassMdp = Mdp<Vec<i64>>;

/// One-dimensional MDP with rational labels (a weighted VASS MDP).
pub type ScalarMdp = Mdp<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("model has no states")]
    NoStates,
    #[error("duplicate state id {0:?}")]
    DuplicateState(String),
    #[error("transition {index} references unknown state {id:?}")]
    UnknownState { index: usize, id: String },
    #[error("transition {index} references state index {state} out of range")]
    StateOutOfRange { index: usize, state: usize },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("counter index {index} out of range for dimension {dimension}")]
    CounterOutOfRange { index: usize, dimension: usize },
    #[error("weight vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A broken model invariant, naming the offending state or transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoOutgoing {
        state: String,
    },
    ProbabilityOnNondeterministic {
        transition: usize,
        state: String,
    },
    MissingProbability {
        transition: usize,
        state: String,
    },
    NonPositiveProbability {
        transition: usize,
        state: String,
    },
    ProbabilitySum {
        state: String,
        sum: Rational,
    },
    UpdateLength {
        transition: usize,
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoOutgoing { state } => {
                write!(f, "state {state} has no outgoing transition")
            }
            Violation::ProbabilityOnNondeterministic { transition, state } => write!(
                f,
                "probability on nondeterministic transition {transition} (source {state})"
            ),
            Violation::MissingProbability { transition, state } => write!(
                f,
                "missing probability on transition {transition} of probabilistic state {state}"
            ),
            Violation::NonPositiveProbability { transition, state } => write!(
                f,
                "non-positive probability on transition {transition} (source {state})"
            ),
            Violation::ProbabilitySum { state, sum } => write!(
                f,
                "probabilities sum ≠ 1 at state {state} (sum {})",
                rational::format_rational(sum)
            ),
            Violation::UpdateLength {
                transition,
                expected,
                got,
            } => write!(
                f,
                "update of transition {transition} has length {got}, expected {expected}"
            ),
        }
    }
}

impl<L> Mdp<L> {
    /// Builds a model from index-based parts. Only structural problems (unknown
    /// states, duplicate ids) are rejected here; semantic invariants are reported
    /// by [`VassMdp::validate`].
    pub fn from_parts(
        dimension: usize,
        states: Vec<State>,
        transitions: Vec<Transition<L>>,
    ) -> Result<Self, ModelError> {
        if dimension == 0 {
            return Err(ModelError::ZeroDimension);
        }
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let mut index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateState(s.id.clone()));
            }
        }
        let mut outgoing = vec![Vec::new(); states.len()];
        for (i, t) in transitions.iter().enumerate() {
            for s in [t.source, t.target] {
                if s >= states.len() {
                    return Err(ModelError::StateOutOfRange { index: i, state: s });
                }
            }
            outgoing[t.source].push(i);
        }
        Ok(Mdp {
            dimension,
            states,
            transitions,
            outgoing,
            index,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn transitions(&self) -> &[Transition<L>] {
        &self.transitions
    }

    pub fn transition(&self, t: TransitionId) -> &Transition<L> {
        &self.transitions[t]
    }

    pub fn outgoing(&self, s: StateId) -> &[TransitionId] {
        &self.outgoing[s]
    }

    pub fn kind(&self, s: StateId) -> StateKind {
        self.states[s].kind
    }

    pub fn is_nondeterministic(&self, s: StateId) -> bool {
        self.states[s].kind == StateKind::Nondeterministic
    }

    pub fn state_id(&self, s: StateId) -> &str {
        &self.states[s].id
    }

    pub fn state_index(&self, id: &str) -> Option<StateId> {
        self.index.get(id).copied()
    }

    pub fn nondeterministic_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).filter(move |&s| self.is_nondeterministic(s))
    }

    /// Smallest transition probability (1 when there are no probabilistic states).
    pub fn min_probability(&self) -> Rational {
        self.transitions
            .iter()
            .filter_map(|t| t.probability.clone())
            .min()
            .unwrap_or_else(Rational::one)
    }

    /// Same graph, labels replaced by `f`.
    pub fn map_labels<M>(&self, dimension: usize, f: impl Fn(&L) -> M) -> Mdp<M> {
        Mdp {
            dimension,
            states: self.states.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    source: t.source,
                    label: f(&t.label),
                    target: t.target,
                    probability: t.probability.clone(),
                })
                .collect(),
            outgoing: self.outgoing.clone(),
            index: self.index.clone(),
        }
    }

    /// Graph-level strong connectivity (every state reaches every other state).
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.states.len();
        let succ: Vec<Vec<StateId>> = (0..n)
            .map(|s| self.outgoing[s].iter().map(|&t| self.transitions[t].target).collect())
            .collect();
        crate::graph::strongly_connected_components(n, |s| succ[s].clone()).len() == 1
    }

    /// Sub-model induced by `keep`: the kept states (in their original order) and
    /// every transition between them. Probabilistic states are expected to be
    /// closed in `keep` (as in an end component).
    pub fn restrict(&self, keep: &[StateId]) -> SubModel<L>
    where
        L: Clone,
    {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut local = vec![None; self.states.len()];
        for (i, &s) in sorted.iter().enumerate() {
            local[s] = Some(i);
        }
        let states = sorted.iter().map(|&s| self.states[s].clone()).collect();
        let mut transitions = Vec::new();
        let mut transition_map = Vec::new();
        for (ti, t) in self.transitions.iter().enumerate() {
            if let (Some(src), Some(dst)) = (local[t.source], local[t.target]) {
                transitions.push(Transition {
                    source: src,
                    label: t.label.clone(),
                    target: dst,
                    probability: t.probability.clone(),
                });
                transition_map.push(ti);
            }
        }
        let model = Mdp::from_parts(self.dimension, states, transitions)
            .expect("restriction of a well-formed model is well-formed");
        SubModel {
            model,
            state_map: sorted,
            transition_map,
        }
    }
}

/// A restriction of a model with index maps back to the parent.
#[derive(Debug, Clone)]
pub struct SubModel<L> {
    pub model: Mdp<L>,
    /// local state index -> parent state index
    pub state_map: Vec<StateId>,
    /// local transition index -> parent transition index
    pub transition_map: Vec<TransitionId>,
}

impl VassMdp {
    /// Convenience constructor from textual ids, used by tests and examples.
    /// `transitions` are `(from, update, to, probability)` with probabilities as `"a/b"`.
    pub fn build(
        dimension: usize,
        states: &[(&str, StateKind)],
        transitions: &[(&str, &[i64], &str, Option<&str>)],
    ) -> Result<Self, ModelError> {
        let raw = RawModel {
            dimension,
            states: states
                .iter()
                .map(|(id, kind)| RawState {
                    id: id.to_string(),
                    kind: *kind,
                })
                .collect(),
            transitions: transitions
                .iter()
                .map(|(from, update, to, prob)| RawTransition {
                    from: from.to_string(),
                    update: update.to_vec(),
                    to: to.to_string(),
                    prob: prob.map(str::to_string),
                })
                .collect(),
        };
        let model = raw.resolve()?;
        let violations = model.validate();
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    /// Lists every broken invariant. An empty list means the model is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (s, state) in self.states.iter().enumerate() {
            if self.outgoing[s].is_empty() {
                out.push(Violation::NoOutgoing {
                    state: state.id.clone(),
                });
            }
        }
        for (i, t) in self.transitions.iter().enumerate() {
            let src = &self.states[t.source];
            if t.label.len() != self.dimension {
                out.push(Violation::UpdateLength {
                    transition: i,
                    expected: self.dimension,
                    got: t.label.len(),
                });
            }
            match (src.kind, &t.probability) {
                (StateKind::Nondeterministic, Some(_)) => {
                    out.push(Violation::ProbabilityOnNondeterministic {
                        transition: i,
                        state: src.id.clone(),
                    })
                }
                (StateKind::Probabilistic, None) => out.push(Violation::MissingProbability {
                    transition: i,
                    state: src.id.clone(),
                }),
                (StateKind::Probabilistic, Some(p)) if !p.is_positive() => {
                    out.push(Violation::NonPositiveProbability {
                        transition: i,
                        state: src.id.clone(),
                    })
                }
                _ => {}
            }
        }
        for (s, state) in self.states.iter().enumerate() {
            if state.kind != StateKind::Probabilistic || self.outgoing[s].is_empty() {
                continue;
            }
            let sum: Rational = self.outgoing[s]
                .iter()
                .filter_map(|&t| self.transitions[t].probability.clone())
                .sum();
            if !sum.is_one() {
                out.push(Violation::ProbabilitySum {
                    state: state.id.clone(),
                    sum,
                });
            }
        }
        out
    }

    /// Smallest counter update over all transitions and components.
    pub fn min_update(&self) -> i64 {
        self.transitions
            .iter()
            .flat_map(|t| t.label.iter().copied())
            .min()
            .unwrap_or(0)
    }

    /// One-dimensional model keeping only counter `index` (0-based).
    pub fn project_counter(&self, index: usize) -> Result<VassMdp, ModelError> {
        if index >= self.dimension {
            return Err(ModelError::CounterOutOfRange {
                index,
                dimension: self.dimension,
            });
        }
        Ok(self.map_labels(1, |u| vec![u[index]]))
    }

    /// Scalar model whose label at every transition is `u · w`.
    pub fn weight_by(&self, w: &[Rational]) -> Result<ScalarMdp, ModelError> {
        if w.len() != self.dimension {
            return Err(ModelError::LengthMismatch {
                expected: self.dimension,
                got: w.len(),
            });
        }
        Ok(self.map_labels(1, |u| dot_int(u, w)))
    }

    pub fn to_raw(&self) -> RawModel {
        RawModel {
            dimension: self.dimension,
            states: self
                .states
                .iter()
                .map(|s| RawState {
                    id: s.id.clone(),
                    kind: s.kind,
                })
                .collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| RawTransition {
                    from: self.states[t.source].id.clone(),
                    update: t.label.clone(),
                    to: self.states[t.target].id.clone(),
                    prob: t.probability.as_ref().map(rational::format_rational),
                })
                .collect(),
        }
    }

    /// Canonical model-file encoding (pretty JSON, declaration order).
    pub fn to_canonical_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_raw()).expect("model serializes");
        text.push('\n');
        text
    }

    /// Stable hex digest of the canonical encoding.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let compact = serde_json::to_string(&self.to_raw()).expect("model serializes");
        hex::encode(Sha256::digest(compact.as_bytes()))
    }

    /// Text label for a transition, e.g. `q1 -(-1,-1)-> q2`.
    pub fn describe_transition(&self, t: TransitionId) -> String {
        let tr = &self.transitions[t];
        let upd: Vec<String> = tr.label.iter().map(|v| v.to_string()).collect();
        let prob = tr
            .probability
            .as_ref()
            .map(|p| format!(" [{}]", rational::format_rational(p)))
            .unwrap_or_default();
        format!(
            "{} -({})-> {}{}",
            self.states[tr.source].id,
            upd.join(","),
            self.states[tr.target].id,
            prob
        )
    }
}

impl ScalarMdp {
    pub fn labels(&self) -> impl Iterator<Item = &Rational> {
        self.transitions.iter().map(|t| &t.label)
    }
}

/// Model file schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub dimension: usize,
    pub states: Vec<RawState>,
    pub transitions: Vec<RawTransition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawState {
    pub id: String,
    pub kind: StateKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTransition {
    pub from: String,
    pub update: Vec<i64>,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prob: Option<String>,
}

impl RawModel {
    /// Resolves ids into indices. Does not validate semantic invariants.
    pub fn resolve(&self) -> Result<VassMdp, ModelError> {
        let states: Vec<State> = self
            .states
            .iter()
            .map(|s| State {
                id: s.id.clone(),
                kind: s.kind,
            })
            .collect();
        let lookup: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.as_str(), i))
            .collect();
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for (i, t) in self.transitions.iter().enumerate() {
            let find = |id: &str| {
                lookup.get(id).copied().ok_or_else(|| ModelError::UnknownState {
                    index: i,
                    id: id.to_string(),
                })
            };
            let probability = match &t.prob {
                Some(text) => Some(rational::parse_rational(text).map_err(|e| {
                    ModelError::Syntax {
                        line: 0,
                        column: 0,
                        message: format!("transition {i}: {e}"),
                    }
                })?),
                None => None,
            };
            transitions.push(Transition {
                source: find(&t.from)?,
                label: t.update.clone(),
                target: find(&t.to)?,
                probability,
            });
        }
        Mdp::from_parts(self.dimension, states, transitions)
    }
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<VassMdp, ModelError> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let model = raw.resolve()?;
    let violations = model.validate();
    if violations.is_empty() {
        Ok(model)
    } else {
        Err(ModelError::Invalid(violations))
    }
}

/// A configuration: a state plus integer counters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    pub state: StateId,
    pub counters: Vec<i64>,
}

impl Config {
    pub fn new(state: StateId, counters: Vec<i64>) -> Self {
        Config { state, counters }
    }

    /// State `state` with every counter equal to `n`.
    pub fn uniform(state: StateId, dimension: usize, n: i64) -> Self {
        Config {
            state,
            counters: vec![n; dimension],
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.counters.iter().any(|&c| c < 0)
    }

    /// `max |v(i)|`.
    pub fn size(&self) -> u64 {
        self.counters
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// Labels of a scalar model grouped by source state, for reports.
pub fn scalar_labels_by_state(m: &ScalarMdp) -> BTreeMap<String, Vec<Rational>> {
    let mut out: BTreeMap<String, Vec<Rational>> = BTreeMap::new();
    for t in m.transitions() {
        out.entry(m.state_id(t.source).to_string())
            .or_default()
            .push(t.label.clone());
    }
    out
}

pub fn zero_vector(d: usize) -> Vec<Rational> {
    vec![Rational::zero(); d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn one_state_file_parses() {
        let text = r#"{"dimension":1,"states":[{"id":"s","kind":"p"}],
            "transitions":[{"from":"s","update":[-1],"to":"s","prob":"1/1"}]}"#;
        let m = parse_model(text).unwrap();
        assert_eq!(m.dimension(), 1);
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.transitions().len(), 1);
    }

    #[test]
    fn a1_shape() {
        let m = models::a1();
        assert_eq!(m.num_states(), 4);
        assert_eq!(m.transitions().len(), 8);
        let nondet: Vec<&str> = m.nondeterministic_states().map(|s| m.state_id(s)).collect();
        assert_eq!(nondet, vec!["q1", "q2"]);
        assert_eq!(m.kind(m.state_index("p1").unwrap()), StateKind::Probabilistic);
        assert_eq!(m.kind(m.state_index("p2").unwrap()), StateKind::Probabilistic);
    }

    #[test]
    fn bad_probability_sum_rejected() {
        let text = r#"{"dimension":1,"states":[{"id":"p1","kind":"p"}],
            "transitions":[{"from":"p1","update":[0],"to":"p1","prob":"1/2"},
                           {"from":"p1","update":[1],"to":"p1","prob":"1/4"}]}"#;
        let err = parse_model(text).unwrap_err();
        assert!(err.to_string().contains("probabilities sum ≠ 1"), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_model("{\"dimension\": 1,\n \"states\": [ }").unwrap_err();
        match err {
            ModelError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_state_rejected() {
        let text = r#"{"dimension":1,"states":[{"id":"s","kind":"n"}],
            "transitions":[{"from":"s","update":[0],"to":"t"}]}"#;
        assert!(matches!(
            parse_model(text),
            Err(ModelError::UnknownState { .. })
        ));
    }

    #[test]
    fn validate_a2_is_clean() {
        assert!(models::a2().validate().is_empty());
    }

    #[test]
    fn validate_reports_sink_state() {
        let raw = RawModel {
            dimension: 1,
            states: vec![
                RawState {
                    id: "s".into(),
                    kind: StateKind::Nondeterministic,
                },
                RawState {
                    id: "f".into(),
                    kind: StateKind::Nondeterministic,
                },
            ],
            transitions: vec![RawTransition {
                from: "s".into(),
                update: vec![0],
                to: "f".into(),
                prob: None,
            }],
        };
        let v: Vec<String> = raw
            .resolve()
            .unwrap()
            .validate()
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert_eq!(v, vec!["state f has no outgoing transition"]);
    }

    #[test]
    fn validate_reports_probability_on_nondeterministic() {
        let raw = RawModel {
            dimension: 1,
            states: vec![RawState {
                id: "q".into(),
                kind: StateKind::Nondeterministic,
            }],
            transitions: vec![RawTransition {
                from: "q".into(),
                update: vec![0],
                to: "q".into(),
                prob: Some("1/1".into()),
            }],
        };
        let v = raw.resolve().unwrap().validate();
        assert_eq!(v.len(), 1);
        assert!(v[0]
            .to_string()
            .starts_with("probability on nondeterministic transition"));
    }

    #[test]
    fn validate_reports_update_length() {
        let raw = RawModel {
            dimension: 2,
            states: vec![RawState {
                id: "q".into(),
                kind: StateKind::Nondeterministic,
            }],
            transitions: vec![RawTransition {
                from: "q".into(),
                update: vec![0],
                to: "q".into(),
                prob: None,
            }],
        };
        let v = raw.resolve().unwrap().validate();
        assert!(matches!(v[0], Violation::UpdateLength { got: 1, .. }));
    }

    #[test]
    fn project_a1_first_counter() {
        let p = models::a1().project_counter(0).unwrap();
        let labels: Vec<i64> = p.transitions().iter().map(|t| t.label[0]).collect();
        // q1->q2, q1->p1, q2->q1, q2->p2, p1 (two branches), p2 (two branches)
        assert_eq!(labels, vec![-1, 0, -1, 0, -1, 0, 0, 1]);
        assert_eq!(p.dimension(), 1);
    }

    #[test]
    fn project_is_idempotent_on_one_dimension() {
        let once = models::a1().project_counter(1).unwrap();
        let twice = once.project_counter(0).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn project_self_loop_second_counter() {
        let m = VassMdp::build(
            2,
            &[("s", StateKind::Nondeterministic)],
            &[("s", &[-3, 5], "s", None)],
        )
        .unwrap();
        assert_eq!(m.project_counter(1).unwrap().transitions()[0].label, vec![5]);
        assert!(m.project_counter(2).is_err());
    }

    #[test]
    fn weight_a2_by_ones() {
        let m = models::a2();
        let w = m.weight_by(&[int(1), int(1)]).unwrap();
        let p1 = m.state_index("p1").unwrap();
        let q1 = m.state_index("q1").unwrap();
        let q2 = m.state_index("q2").unwrap();
        let p1_labels: Vec<Rational> = w
            .outgoing(p1)
            .iter()
            .map(|&t| w.transition(t).label.clone())
            .collect();
        assert_eq!(p1_labels, vec![int(-2), int(1)]);
        let q1q2 = w
            .outgoing(q1)
            .iter()
            .find(|&&t| w.transition(t).target == q2)
            .unwrap();
        assert_eq!(w.transition(*q1q2).label, int(-2));
    }

    #[test]
    fn weight_by_zero_is_zero() {
        let w = models::a1().weight_by(&[int(0), int(0)]).unwrap();
        assert!(w.labels().all(|l| l.is_zero()));
        assert!(models::a1().weight_by(&[int(1)]).is_err());
    }

    #[test]
    fn config_terminal_predicate() {
        let c = Config::new(0, vec![0, 0, 0]);
        assert!(!c.is_terminal());
        for i in 0..3 {
            let mut d = c.clone();
            d.counters[i] -= 1;
            assert!(d.is_terminal());
        }
        assert_eq!(Config::new(0, vec![3, -7]).size(), 7);
    }

    fn arb_model() -> impl Strategy<Value = VassMdp> {
        (1usize..=3, 1usize..=5, any::<u64>())
            .prop_map(|(d, q, seed)| crate::corpus::random_model(seed, q, d, false))
    }

    proptest! {
        #[test]
        fn canonical_round_trip(m in arb_model()) {
            let text = m.to_canonical_string();
            let back = parse_model(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(back.digest(), m.digest());
        }

        #[test]
        fn weight_label_is_dot_product(m in arb_model(), ws in proptest::collection::vec((-5i64..=5, 1i64..=4), 3)) {
            let w: Vec<Rational> = ws.iter().take(m.dimension()).map(|&(a, b)| ratio(a, b)).collect();
            let weighted = m.weight_by(&w).unwrap();
            for (t, wt) in m.transitions().iter().zip(weighted.transitions()) {
                prop_assert_eq!(&wt.label, &dot_int(&t.label, &w));
            }
            for j in 0..m.dimension() {
                let mut e = vec![int(0); m.dimension()];
                e[j] = int(1);
                let unit = m.weight_by(&e).unwrap();
                let proj = m.project_counter(j).unwrap();
                for (a, b) in unit.transitions().iter().zip(proj.transitions()) {
                    prop_assert_eq!(a.label.clone(), int(b.label[0]));
                }
            }
        }
    }
}
