//! Polynomial-time decision procedures.
//!
//! Mean-payoff values come from the potential LPs (max: minimize `x` with
//! `x + z_q >= c + z_p`; min: maximize `x` with `x + z_q <= c + z_p`, `z >= 0`).
//! Zero-achievability is a feasibility LP over transition frequencies, and the
//! ranking certificate is a joint LP in the weight vector and the potentials.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{classify_structure, mec_decomposition, reach_strategy, StructureTag};
use crate::lp::{solve_lp, Direction, LinearProgram, LpOutcome, Relation};
use crate::model::{Mdp, ScalarMdp, StateId, StateKind, TransitionId, VassMdp};
use crate::oracle::MdStrategy;
use crate::rational::{dot_int, format_rational, int, Rational};
use crate::scheme::{combination_from_frequencies, NonnegCombination};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("model is not strongly connected")]
    NotStronglyConnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PayoffDirection {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanPayoffSolution {
    pub value: Rational,
    pub potentials: Vec<Rational>,
    pub direction: PayoffDirection,
}

fn require_sc<L>(m: &Mdp<L>) -> Result<(), DecisionError> {
    if m.is_strongly_connected() {
        Ok(())
    } else {
        Err(DecisionError::NotStronglyConnected)
    }
}

fn mean_payoff_lp(m: &ScalarMdp, direction: PayoffDirection) -> MeanPayoffSolution {
    let mut lp = LinearProgram::new();
    let x = lp.add_free("x");
    let z: Vec<usize> = (0..m.num_states())
        .map(|s| match direction {
            PayoffDirection::Max => lp.add_free(format!("z_{}", m.state_id(s))),
            PayoffDirection::Min => lp.add_nonneg(format!("z_{}", m.state_id(s))),
        })
        .collect();
    // Max: x + z_q - E[z_p] >= E[c];  Min: x + z_q - E[z_p] <= E[c]
    let rel = match direction {
        PayoffDirection::Max => Relation::Ge,
        PayoffDirection::Min => Relation::Le,
    };
    for s in 0..m.num_states() {
        let groups: Vec<Vec<TransitionId>> = match m.kind(s) {
            StateKind::Nondeterministic => m.outgoing(s).iter().map(|&t| vec![t]).collect(),
            StateKind::Probabilistic => vec![m.outgoing(s).to_vec()],
        };
        for group in groups {
            let mut terms = vec![(x, Rational::one()), (z[s], Rational::one())];
            let mut rhs = Rational::zero();
            for t in group {
                let tr = m.transition(t);
                let p = tr.weight();
                terms.push((z[tr.target], -p.clone()));
                rhs += p * &tr.label;
            }
            lp.add_constraint(terms, rel, rhs);
        }
    }
    let dir = match direction {
        PayoffDirection::Max => Direction::Min,
        PayoffDirection::Min => Direction::Max,
    };
    lp.set_objective([(x, Rational::one())], dir);
    match solve_lp(&lp) {
        LpOutcome::Optimal { value, assignment } => MeanPayoffSolution {
            value,
            potentials: z.iter().map(|&v| assignment[v].clone()).collect(),
            direction,
        },
        other => panic!("mean-payoff LP of a strongly connected model must be solvable: {other:?}"),
    }
}

/// Supremum of the expected mean payoff over strategies and start states.
pub fn max_mean_payoff(m: &ScalarMdp) -> Result<MeanPayoffSolution, DecisionError> {
    require_sc(m)?;
    Ok(mean_payoff_lp(m, PayoffDirection::Max))
}

/// Infimum of the expected mean payoff; potentials are nonnegative.
pub fn min_mean_payoff(m: &ScalarMdp) -> Result<MeanPayoffSolution, DecisionError> {
    require_sc(m)?;
    Ok(mean_payoff_lp(m, PayoffDirection::Min))
}

/// Flow-conservation constraints over transition frequencies, with `Σ f = 1`.
/// Returns the LP and the frequency variable of every transition.
fn frequency_polytope(model: &VassMdp) -> (LinearProgram, Vec<usize>) {
    let mut lp = LinearProgram::new();
    let f: Vec<usize> = (0..model.transitions().len())
        .map(|t| lp.add_nonneg(format!("f{t}")))
        .collect();
    for s in 0..model.num_states() {
        let mut terms: Vec<(usize, Rational)> = Vec::new();
        for (t, tr) in model.transitions().iter().enumerate() {
            if tr.target == s {
                terms.push((f[t], Rational::one()));
            }
        }
        for &t in model.outgoing(s) {
            terms.push((f[t], -Rational::one()));
        }
        lp.add_constraint(terms, Relation::Eq, Rational::zero());
        if model.kind(s) == StateKind::Probabilistic {
            for &t in model.outgoing(s) {
                let p = model.transition(t).weight();
                let mut terms = vec![(f[t], Rational::one())];
                for &t2 in model.outgoing(s) {
                    terms.push((f[t2], -p.clone()));
                }
                lp.add_constraint(terms, Relation::Eq, Rational::zero());
            }
        }
    }
    lp.add_constraint(f.iter().map(|&v| (v, Rational::one())), Relation::Eq, Rational::one());
    (lp, f)
}

/// Transition frequencies whose mean payoff is componentwise nonnegative, if any.
pub fn zero_achieving_frequencies(model: &VassMdp) -> Result<Option<Vec<Rational>>, DecisionError> {
    require_sc(model)?;
    let (mut lp, f) = frequency_polytope(model);
    for k in 0..model.dimension() {
        lp.add_constraint(
            model
                .transitions()
                .iter()
                .enumerate()
                .map(|(t, tr)| (f[t], int(tr.label[k]))),
            Relation::Ge,
            Rational::zero(),
        );
    }
    Ok(solve_lp(&lp)
        .assignment()
        .map(|x| f.iter().map(|&v| x[v].clone()).collect()))
}

pub fn zero_achievable(model: &VassMdp) -> Result<bool, DecisionError> {
    Ok(zero_achieving_frequencies(model)?.is_some())
}

/// Frequencies optimizing `Σ f(t)·(weights·u(t))` in `direction`.
pub fn optimal_frequencies(
    model: &VassMdp,
    weights: &[Rational],
    direction: Direction,
) -> Result<Vec<Rational>, DecisionError> {
    require_sc(model)?;
    let (mut lp, f) = frequency_polytope(model);
    lp.set_objective(
        model
            .transitions()
            .iter()
            .enumerate()
            .map(|(t, tr)| (f[t], dot_int(&tr.label, weights))),
        direction,
    );
    match solve_lp(&lp) {
        LpOutcome::Optimal { assignment, .. } => Ok(f.iter().map(|&v| assignment[v].clone()).collect()),
        other => panic!("frequency LP of a strongly connected model is bounded and feasible: {other:?}"),
    }
}

/// Ranking certificate: weights `w >= 1` and potentials `z` such that every
/// step decreases `z` in expectation by at least `slack + w·u`, with `slack >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingCertificate {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub w: Vec<Rational>,
    #[serde(rename = "z", with = "serde_potentials")]
    pub potentials: BTreeMap<String, Rational>,
    #[serde(with = "crate::rational::serde_rational")]
    pub slack: Rational,
}

mod serde_potentials {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &BTreeMap<String, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let text: BTreeMap<&str, String> = z.iter().map(|(k, v)| (k.as_str(), format_rational(v))).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Rational>, D::Error> {
        let text = BTreeMap::<String, String>::deserialize(d)?;
        text.into_iter()
            .map(|(k, v)| {
                crate::rational::parse_rational(&v)
                    .map(|r| (k, r))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl RankingCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn ranking_witness(model: &VassMdp) -> Result<Option<RankingCertificate>, DecisionError> {
    require_sc(model)?;
    let d = model.dimension();
    let mut lp = LinearProgram::new();
    let w: Vec<usize> = (0..d)
        .map(|i| lp.add_variable(format!("w{i}"), Some(Rational::one())))
        .collect();
    let z: Vec<usize> = (0..model.num_states())
        .map(|s| lp.add_free(format!("z_{}", model.state_id(s))))
        .collect();
    for s in 0..model.num_states() {
        let groups: Vec<Vec<TransitionId>> = match model.kind(s) {
            StateKind::Nondeterministic => model.outgoing(s).iter().map(|&t| vec![t]).collect(),
            StateKind::Probabilistic => vec![model.outgoing(s).to_vec()],
        };
        for group in groups {
            // z_q - Σ P (w·u + z_p) >= 1
            let mut terms = vec![(z[s], Rational::one())];
            for t in group {
                let tr = model.transition(t);
                let p = tr.weight();
                terms.push((z[tr.target], -p.clone()));
                for (i, &u) in tr.label.iter().enumerate() {
                    if u != 0 {
                        terms.push((w[i], -(&p * int(u))));
                    }
                }
            }
            lp.add_constraint(terms, Relation::Ge, Rational::one());
        }
    }
    lp.set_objective(w.iter().map(|&v| (v, Rational::one())), Direction::Min);
    Ok(solve_lp(&lp).assignment().map(|x| {
        // shift potentials so the smallest is zero
        let raw: Vec<Rational> = z.iter().map(|&v| x[v].clone()).collect();
        let low = raw.iter().min().cloned().unwrap_or_else(Rational::zero);
        RankingCertificate {
            w: w.iter().map(|&v| x[v].clone()).collect(),
            potentials: raw
                .into_iter()
                .enumerate()
                .map(|(s, v)| (model.state_id(s).to_string(), v - &low))
                .collect(),
            slack: Rational::one(),
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateViolation {
    #[error("w has {got} components, model has {expected} counters")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("w component {index} is {value}, must be ≥ 1")]
    WeightBelowOne { index: usize, value: String },
    #[error("slack must be ≥ 1 (got {0})")]
    SlackBelowOne(String),
    #[error("no potential for state {0}")]
    MissingPotential(String),
    #[error("potential for unknown state {0}")]
    UnknownState(String),
    #[error("violated at transition {transition}: {lhs} < {rhs}")]
    Transition {
        transition: String,
        lhs: String,
        rhs: String,
    },
    #[error("violated at probabilistic state {state}: {lhs} < {rhs}")]
    ProbabilisticState { state: String, lhs: String, rhs: String },
}

/// Checks every certificate constraint exactly; returns the first violation.
pub fn validate_ranking_certificate(
    model: &VassMdp,
    cert: &RankingCertificate,
) -> Result<(), CertificateViolation> {
    if cert.w.len() != model.dimension() {
        return Err(CertificateViolation::DimensionMismatch {
            expected: model.dimension(),
            got: cert.w.len(),
        });
    }
    if let Some((index, value)) = cert.w.iter().enumerate().find(|(_, v)| **v < Rational::one()) {
        return Err(CertificateViolation::WeightBelowOne {
            index,
            value: format_rational(value),
        });
    }
    if cert.slack < Rational::one() {
        return Err(CertificateViolation::SlackBelowOne(format_rational(&cert.slack)));
    }
    if let Some(k) = cert.potentials.keys().find(|k| model.state_index(k).is_none()) {
        return Err(CertificateViolation::UnknownState(k.clone()));
    }
    let mut z = Vec::with_capacity(model.num_states());
    for s in 0..model.num_states() {
        match cert.potentials.get(model.state_id(s)) {
            Some(v) => z.push(v.clone()),
            None => return Err(CertificateViolation::MissingPotential(model.state_id(s).to_string())),
        }
    }
    for s in 0..model.num_states() {
        match model.kind(s) {
            StateKind::Nondeterministic => {
                for &t in model.outgoing(s) {
                    let tr = model.transition(t);
                    let rhs = &cert.slack + dot_int(&tr.label, &cert.w) + &z[tr.target];
                    if z[s] < rhs {
                        return Err(CertificateViolation::Transition {
                            transition: model.describe_transition(t),
                            lhs: format_rational(&z[s]),
                            rhs: format_rational(&rhs),
                        });
                    }
                }
            }
            StateKind::Probabilistic => {
                let mut rhs = cert.slack.clone();
                for &t in model.outgoing(s) {
                    let tr = model.transition(t);
                    rhs += tr.weight() * (dot_int(&tr.label, &cert.w) + &z[tr.target]);
                }
                if z[s] < rhs {
                    return Err(CertificateViolation::ProbabilisticState {
                        state: model.state_id(s).to_string(),
                        lhs: format_rational(&z[s]),
                        rhs: format_rational(&rhs),
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn check_ranking_certificate(model: &VassMdp, cert: &RankingCertificate) -> bool {
    validate_ranking_certificate(model, cert).is_ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictTag {
    Linear,
    NotLinear,
    UnsupportedStructure,
}

impl std::fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictTag::Linear => "Linear",
            VerdictTag::NotLinear => "NotLinear",
            VerdictTag::UnsupportedStructure => "UnsupportedStructure",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Demonic,
    Angelic,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Demonic => "demonic",
            Mode::Angelic => "angelic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Certificate(RankingCertificate),
    Combination(NonnegCombination),
    /// Min mean payoff of every counter projection.
    CounterPayoffs(Vec<MeanPayoffSolution>),
    /// A cycle in the MEC graph (MEC indices, first = last).
    Cycle(Vec<usize>),
    /// Evidence lives in the per-MEC table.
    PerMec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MecVerdict {
    pub mec: usize,
    pub states: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub mode: Mode,
    pub structure: StructureTag,
    pub evidence: Evidence,
    pub per_mec: Vec<MecVerdict>,
}

/// Demonic verdict for a strongly connected model.
fn demonic_sc(model: &VassMdp) -> Verdict {
    let evidence = match ranking_witness(model).expect("caller ensures strong connectivity") {
        Some(cert) => Evidence::Certificate(cert),
        None => {
            let freq = zero_achieving_frequencies(model)
                .expect("strongly connected")
                .expect("no ranking witness implies zero is achievable");
            Evidence::Combination(
                combination_from_frequencies(model, &freq)
                    .expect("achieving frequencies decompose into a nonnegative combination"),
            )
        }
    };
    let tag = match evidence {
        Evidence::Certificate(_) => VerdictTag::Linear,
        _ => VerdictTag::NotLinear,
    };
    Verdict {
        tag,
        mode: Mode::Demonic,
        structure: StructureTag::StronglyConnected,
        evidence,
        per_mec: Vec::new(),
    }
}

/// Angelic verdict for a strongly connected model.
fn angelic_sc(model: &VassMdp) -> Verdict {
    let payoffs: Vec<MeanPayoffSolution> = (0..model.dimension())
        .map(|k| {
            let scalar = model.map_labels(1, |u| int(u[k]));
            min_mean_payoff(&scalar).expect("caller ensures strong connectivity")
        })
        .collect();
    let tag = if payoffs.iter().any(|p| p.value < Rational::zero()) {
        VerdictTag::Linear
    } else {
        VerdictTag::NotLinear
    };
    Verdict {
        tag,
        mode: Mode::Angelic,
        structure: StructureTag::StronglyConnected,
        evidence: Evidence::CounterPayoffs(payoffs),
        per_mec: Vec::new(),
    }
}

fn per_mec(
    model: &VassMdp,
    mecs: &[Vec<StateId>],
    which: &[usize],
    decide: impl Fn(&VassMdp) -> Verdict + Sync,
) -> Vec<MecVerdict> {
    use rayon::prelude::*;
    which
        .par_iter()
        .map(|&i| {
            let sub = model.restrict(&mecs[i]);
            MecVerdict {
                mec: i,
                states: mecs[i].iter().map(|&s| model.state_id(s).to_string()).collect(),
                verdict: decide(&sub.model),
            }
        })
        .collect()
}

pub fn decide_demonic(model: &VassMdp) -> Verdict {
    let decomp = mec_decomposition(model);
    let class = classify_structure(model, &decomp);
    if class.tag == StructureTag::StronglyConnected {
        return demonic_sc(model);
    }
    let all: Vec<usize> = (0..decomp.mecs.len()).collect();
    let table = per_mec(model, &decomp.mecs, &all, demonic_sc);
    let (tag, evidence) = match class.tag {
        StructureTag::General => (
            VerdictTag::UnsupportedStructure,
            Evidence::Cycle(class.cycle.clone().expect("general structure has a cycle")),
        ),
        _ => {
            let linear = table.iter().all(|m| m.verdict.tag == VerdictTag::Linear);
            let tag = if linear { VerdictTag::Linear } else { VerdictTag::NotLinear };
            (tag, Evidence::PerMec)
        }
    };
    Verdict {
        tag,
        mode: Mode::Demonic,
        structure: class.tag,
        evidence,
        per_mec: table,
    }
}

pub fn decide_angelic(model: &VassMdp) -> Verdict {
    let decomp = mec_decomposition(model);
    let class = classify_structure(model, &decomp);
    if class.tag == StructureTag::StronglyConnected {
        return angelic_sc(model);
    }
    let table = per_mec(model, &decomp.mecs, &class.bottom, angelic_sc);
    let linear = table.iter().all(|m| m.verdict.tag == VerdictTag::Linear);
    Verdict {
        tag: if linear { VerdictTag::Linear } else { VerdictTag::NotLinear },
        mode: Mode::Angelic,
        structure: class.tag,
        evidence: Evidence::PerMec,
        per_mec: table,
    }
}

pub fn decide(model: &VassMdp, mode: Mode) -> Verdict {
    match mode {
        Mode::Demonic => decide_demonic(model),
        Mode::Angelic => decide_angelic(model),
    }
}

/// MD strategy following positive-frequency transitions of an optimal
/// frequency vector; states off the support head for its first state.
pub fn strategy_from_frequencies(model: &VassMdp, freq: &[Rational]) -> MdStrategy {
    let support: Vec<StateId> = (0..model.num_states())
        .filter(|&s| model.outgoing(s).iter().any(|&t| freq[t] > Rational::zero()))
        .collect();
    let anchor = support[0];
    let reach = reach_strategy(model, anchor).expect("strongly connected: every state reaches the anchor");
    let choice = (0..model.num_states())
        .map(|s| {
            if !model.is_nondeterministic(s) {
                return None;
            }
            if support.binary_search(&s).is_ok() {
                model.outgoing(s).iter().copied().find(|&t| freq[t] > Rational::zero())
            } else {
                reach.choose(s)
            }
        })
        .collect();
    MdStrategy { choice }
}

/// Demonic simulation strategy: maximize `w`-weighted mean payoff, with `w`
/// from the ranking certificate when there is one and all ones otherwise.
pub fn demonic_optimal_strategy(model: &VassMdp) -> Result<MdStrategy, DecisionError> {
    let w = match ranking_witness(model)? {
        Some(cert) => cert.w,
        None => vec![Rational::one(); model.dimension()],
    };
    let freq = optimal_frequencies(model, &w, Direction::Max)?;
    Ok(strategy_from_frequencies(model, &freq))
}

/// Angelic simulation strategy: drive the counter with the smallest min mean payoff down.
pub fn angelic_optimal_strategy(model: &VassMdp) -> Result<MdStrategy, DecisionError> {
    require_sc(model)?;
    let mut best: Option<(Rational, usize)> = None;
    for k in 0..model.dimension() {
        let v = min_mean_payoff(&model.map_labels(1, |u| int(u[k])))?.value;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, k));
        }
    }
    let k = best.expect("dimension ≥ 1").1;
    let mut e = vec![Rational::zero(); model.dimension()];
    e[k] = Rational::one();
    let freq = optimal_frequencies(model, &e, Direction::Min)?;
    Ok(strategy_from_frequencies(model, &freq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StateKind::{Nondeterministic as N, Probabilistic as P};
    use crate::models;
    use crate::rational::ratio;

    fn self_loop(update: &[i64]) -> VassMdp {
        VassMdp::build(update.len(), &[("s", N)], &[("s", update, "s", None)]).unwrap()
    }

    #[test]
    fn mean_payoff_examples() {
        let one = self_loop(&[-1]).map_labels(1, |u| int(u[0]));
        assert_eq!(max_mean_payoff(&one).unwrap().value, int(-1));
        let a2 = models::a2().weight_by(&[int(1), int(1)]).unwrap();
        // increments of A2 dotted with (1,1) are -1/4, -1/4 and -2
        assert_eq!(max_mean_payoff(&a2).unwrap().value, ratio(-1, 4));
        let a1 = models::a1().weight_by(&[int(1), int(1)]).unwrap();
        assert_eq!(max_mean_payoff(&a1).unwrap().value, int(0));
        let a1c1 = models::a1().project_counter(0).unwrap().weight_by(&[int(1)]).unwrap();
        assert_eq!(min_mean_payoff(&a1c1).unwrap().value, int(-1));
        let up = self_loop(&[1]).map_labels(1, |u| int(u[0]));
        assert_eq!(min_mean_payoff(&up).unwrap().value, int(1));
        let two = VassMdp::build(1, &[("s", N)], &[("s", &[1], "s", None), ("s", &[-1], "s", None)])
            .unwrap()
            .map_labels(1, |u| int(u[0]));
        let sol = min_mean_payoff(&two).unwrap();
        assert_eq!(sol.value, int(-1));
        assert!(sol.potentials.iter().all(|z| *z >= int(0)));
    }

    #[test]
    fn not_strongly_connected_is_rejected() {
        let m = VassMdp::build(1, &[("a", N), ("b", N)], &[("a", &[0], "b", None), ("b", &[0], "b", None)])
            .unwrap();
        assert_eq!(zero_achievable(&m), Err(DecisionError::NotStronglyConnected));
        assert_eq!(
            max_mean_payoff(&m.map_labels(1, |u| int(u[0]))),
            Err(DecisionError::NotStronglyConnected)
        );
    }

    #[test]
    fn zero_achievability_examples() {
        assert!(zero_achievable(&models::a1()).unwrap());
        assert!(!zero_achievable(&models::a2()).unwrap());
        assert!(!zero_achievable(&self_loop(&[-1])).unwrap());
    }

    #[test]
    fn ranking_witness_examples() {
        let a2 = models::a2();
        let cert = ranking_witness(&a2).unwrap().unwrap();
        assert!(check_ranking_certificate(&a2, &cert));
        assert!(ranking_witness(&models::a1()).unwrap().is_none());
        let m = self_loop(&[-1, -1]);
        let cert = RankingCertificate {
            w: vec![int(1), int(1)],
            potentials: [("s".to_string(), int(0))].into(),
            slack: int(1),
        };
        assert!(check_ranking_certificate(&m, &cert));
    }

    #[test]
    fn certificate_rejections() {
        let a1 = models::a1();
        let zero: BTreeMap<String, Rational> =
            ["q1", "q2", "p1", "p2"].iter().map(|s| (s.to_string(), int(0))).collect();
        let cert = RankingCertificate {
            w: vec![int(1), int(1)],
            potentials: zero,
            slack: int(1),
        };
        match validate_ranking_certificate(&a1, &cert) {
            Err(CertificateViolation::Transition { transition, .. }) => {
                assert!(transition.starts_with("q1"), "{transition}");
            }
            other => panic!("{other:?}"),
        }
        let a2 = models::a2();
        let mut good = ranking_witness(&a2).unwrap().unwrap();
        let key = good.potentials.keys().next().unwrap().clone();
        *good.potentials.get_mut(&key).unwrap() -= int(100);
        assert!(!check_ranking_certificate(&a2, &good));
        let mut slack = ranking_witness(&a2).unwrap().unwrap();
        slack.slack = int(0);
        assert!(validate_ranking_certificate(&a2, &slack)
            .unwrap_err()
            .to_string()
            .contains("slack must be ≥ 1"));
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = ranking_witness(&models::a2()).unwrap().unwrap();
        let text = cert.to_json();
        assert!(text.contains("\"slack\": \"1/1\""));
        assert_eq!(RankingCertificate::from_json(&text).unwrap(), cert);
    }

    #[test]
    fn demonic_verdicts() {
        let a2 = decide_demonic(&models::a2());
        assert_eq!(a2.tag, VerdictTag::Linear);
        let a1 = decide_demonic(&models::a1());
        assert_eq!(a1.tag, VerdictTag::NotLinear);
        match &a1.evidence {
            Evidence::Combination(c) => {
                let coeffs: Vec<u64> = c.items.iter().map(|i| i.coefficient).collect();
                assert_eq!(coeffs, vec![1, 1]);
            }
            other => panic!("{other:?}"),
        }
        let fig4 = decide_demonic(&models::fig4());
        assert_eq!(fig4.tag, VerdictTag::UnsupportedStructure);
        assert_eq!(fig4.evidence, Evidence::Cycle(vec![0, 1, 0]));
        assert_eq!(fig4.per_mec.len(), 3);
        assert!(fig4.per_mec.iter().all(|m| m.verdict.tag == VerdictTag::Linear));
    }

    #[test]
    fn dag_like_demonic_is_per_mec() {
        // a: balanced loops (NotLinear), then b: decreasing loop
        let m = VassMdp::build(
            1,
            &[("a", N), ("b", N)],
            &[
                ("a", &[0], "a", None),
                ("a", &[0], "b", None),
                ("b", &[-1], "b", None),
            ],
        )
        .unwrap();
        let v = decide_demonic(&m);
        assert_eq!(v.structure, StructureTag::DagLike);
        assert_eq!(v.tag, VerdictTag::NotLinear);
        assert_eq!(v.per_mec[0].verdict.tag, VerdictTag::NotLinear);
        assert_eq!(v.per_mec[1].verdict.tag, VerdictTag::Linear);
    }

    #[test]
    fn angelic_verdicts() {
        assert_eq!(decide_angelic(&models::a1()).tag, VerdictTag::Linear);
        assert_eq!(decide_angelic(&self_loop(&[1, 1])).tag, VerdictTag::NotLinear);
        let fig4 = decide_angelic(&models::fig4());
        assert_eq!(fig4.tag, VerdictTag::Linear);
        assert_eq!(fig4.per_mec.len(), 1);
        assert_eq!(fig4.per_mec[0].states, vec!["f"]);
    }

    #[test]
    fn optimal_strategies_are_total() {
        let a2 = models::a2();
        let s = demonic_optimal_strategy(&a2).unwrap();
        assert!(a2.nondeterministic_states().all(|q| s.choice[q].is_some()));
        let a1 = models::a1();
        let s = angelic_optimal_strategy(&a1).unwrap();
        // the angel loops q1 <-> q2
        let q1 = a1.state_index("q1").unwrap();
        let q2 = a1.state_index("q2").unwrap();
        assert_eq!(a1.transition(s.choice[q1].unwrap()).target, q2);
        assert_eq!(a1.transition(s.choice[q2].unwrap()).target, q1);
    }

    #[test]
    fn probabilistic_hub_frequency_split() {
        let m = VassMdp::build(
            1,
            &[("h", P), ("a", N)],
            &[
                ("h", &[1], "a", Some("1/4")),
                ("h", &[-1], "h", Some("3/4")),
                ("a", &[0], "h", None),
            ],
        )
        .unwrap();
        // expected change per step: stationary (4/5,1/5), 4/5*(1/4 - 3/4) < 0
        assert!(!zero_achievable(&m).unwrap());
        assert!(ranking_witness(&m).unwrap().is_some());
    }
}
