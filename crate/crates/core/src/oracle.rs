//! Brute-force ground truth over memoryless deterministic strategies.
//!
//! Everything here is exponential in the number of nondeterministic states and
//! exists to cross-check the polynomial procedures on small models.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::strongly_connected_components;
use crate::linalg;
use crate::lp::{solve_lp, LinearProgram, Relation};
use crate::model::{Mdp, StateId, TransitionId, VassMdp};
use crate::rational::{int, Rational};

pub const DEFAULT_STRATEGY_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{count} MD strategies exceed the enumeration cap {cap}")]
    ResourceLimit { count: u128, cap: u64 },
}

/// A memoryless deterministic strategy: one outgoing transition per
/// nondeterministic state, `None` at probabilistic states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MdStrategy {
    pub choice: Vec<Option<TransitionId>>,
}

impl MdStrategy {
    /// The strategy taking the first declared transition everywhere.
    pub fn first_choices<L>(model: &Mdp<L>) -> Self {
        MdStrategy {
            choice: (0..model.num_states())
                .map(|s| {
                    if model.is_nondeterministic(s) {
                        model.outgoing(s).first().copied()
                    } else {
                        None
                    }
                })
                .collect(),
        }
    }

    pub fn choose(&self, s: StateId) -> Option<TransitionId> {
        self.choice[s]
    }

    /// `{q1: q1 -(..)-> q2, ...}` over nondeterministic states.
    pub fn describe(&self, model: &VassMdp) -> String {
        let parts: Vec<String> = self
            .choice
            .iter()
            .enumerate()
            .filter_map(|(s, c)| {
                c.map(|t| format!("{}: {}", model.state_id(s), model.describe_transition(t)))
            })
            .collect();
        format!("{{{}}}", parts.join("; "))
    }

    /// Transitions enabled in the induced Markov chain at `s`.
    pub fn moves<'a, L>(&'a self, model: &'a Mdp<L>, s: StateId) -> Vec<TransitionId> {
        match self.choice[s] {
            Some(t) => vec![t],
            None => model.outgoing(s).to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Increment {
    pub value: Vec<Rational>,
    pub strategy: MdStrategy,
    pub bscc: Vec<StateId>,
    /// Stationary distribution over `bscc`, aligned with it.
    pub stationary: Vec<Rational>,
}

pub fn md_strategy_count<L>(model: &Mdp<L>) -> u128 {
    model
        .nondeterministic_states()
        .map(|s| model.outgoing(s).len() as u128)
        .product()
}

/// All MD strategies in lexicographic order of choices (earlier states are
/// more significant, choices ordered by declaration).
pub fn enumerate_md_strategies<L>(model: &Mdp<L>, cap: u64) -> Result<Vec<MdStrategy>, OracleError> {
    let count = md_strategy_count(model);
    if count > cap as u128 {
        return Err(OracleError::ResourceLimit { count, cap });
    }
    let nondet: Vec<StateId> = model.nondeterministic_states().collect();
    let mut digits = vec![0usize; nondet.len()];
    let mut out = Vec::with_capacity(count as usize);
    loop {
        let mut choice = vec![None; model.num_states()];
        for (k, &s) in nondet.iter().enumerate() {
            choice[s] = Some(model.outgoing(s)[digits[k]]);
        }
        out.push(MdStrategy { choice });
        // odometer, last state fastest
        let mut k = nondet.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < model.outgoing(nondet[k]).len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Bottom SCCs of the chain induced by `strategy`, ordered by smallest state.
pub fn induced_bsccs<L>(model: &Mdp<L>, strategy: &MdStrategy) -> Vec<Vec<StateId>> {
    let n = model.num_states();
    let succ = |s: usize| -> Vec<usize> {
        strategy
            .moves(model, s)
            .into_iter()
            .map(|t| model.transition(t).target)
            .collect()
    };
    let comps = strongly_connected_components(n, succ);
    let mut comp_of = vec![0; n];
    for (i, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = i;
        }
    }
    let mut bottom: Vec<Vec<StateId>> = comps
        .iter()
        .enumerate()
        .filter(|(i, c)| {
            c.iter().all(|&s| {
                strategy
                    .moves(model, s)
                    .iter()
                    .all(|&t| comp_of[model.transition(t).target] == *i)
            })
        })
        .map(|(_, c)| c.clone())
        .collect();
    bottom.sort_by_key(|c| c[0]);
    bottom
}

/// Exact stationary distribution of the chain restricted to a closed,
/// strongly connected `bscc` (aligned with `bscc`).
pub fn stationary_distribution<L>(
    model: &Mdp<L>,
    strategy: &MdStrategy,
    bscc: &[StateId],
) -> Vec<Rational> {
    let k = bscc.len();
    let pos: BTreeMap<StateId, usize> = bscc.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    // rows: balance equations for states 1..k, plus normalization
    let mut a = vec![vec![Rational::zero(); k]; k];
    let mut b = vec![Rational::zero(); k];
    for (i, &s) in bscc.iter().enumerate() {
        for t in strategy.moves(model, s) {
            let tr = model.transition(t);
            let j = pos[&tr.target];
            if j != 0 {
                a[j][i] += tr.weight();
            }
        }
        if i != 0 {
            a[i][i] -= Rational::one();
        }
        a[0][i] = Rational::one();
    }
    b[0] = Rational::one();
    linalg::solve(a, b).expect("irreducible chain has a unique stationary distribution")
}

/// One increment per BSCC of the chain induced by `strategy`.
pub fn bscc_increments(model: &VassMdp, strategy: &MdStrategy) -> Vec<Increment> {
    induced_bsccs(model, strategy)
        .into_iter()
        .map(|bscc| {
            let eta = stationary_distribution(model, strategy, &bscc);
            let mut value = vec![Rational::zero(); model.dimension()];
            for (&s, e) in bscc.iter().zip(&eta) {
                for t in strategy.moves(model, s) {
                    let tr = model.transition(t);
                    let p = e * tr.weight();
                    for (v, &u) in value.iter_mut().zip(&tr.label) {
                        *v += &p * int(u);
                    }
                }
            }
            Increment {
                value,
                strategy: strategy.clone(),
                bscc,
                stationary: eta,
            }
        })
        .collect()
}

/// Distinct increment values with the first witness (in enumeration order) of each.
pub fn increment_witnesses(model: &VassMdp, cap: u64) -> Result<Vec<Increment>, OracleError> {
    let strategies = enumerate_md_strategies(model, cap)?;
    let per: Vec<Vec<Increment>> = strategies
        .par_iter()
        .map(|s| bscc_increments(model, s))
        .collect();
    let mut seen: BTreeMap<Vec<Rational>, Increment> = BTreeMap::new();
    for inc in per.into_iter().flatten() {
        seen.entry(inc.value.clone()).or_insert(inc);
    }
    Ok(seen.into_values().collect())
}

/// Sorted, deduplicated increment values over all MD strategies and BSCCs.
pub fn all_increments(model: &VassMdp, cap: u64) -> Result<Vec<Vec<Rational>>, OracleError> {
    Ok(increment_witnesses(model, cap)?
        .into_iter()
        .map(|i| i.value)
        .collect())
}

/// Finds `w` with every `w(i) >= 1` and `i·w <= -1` for every increment, if one exists.
pub fn separating_normal_bruteforce(increments: &[Vec<Rational>], d: usize) -> Option<Vec<Rational>> {
    let mut lp = LinearProgram::new();
    let w: Vec<usize> = (0..d)
        .map(|i| lp.add_variable(format!("w{i}"), Some(Rational::one())))
        .collect();
    for inc in increments {
        lp.add_constraint(
            w.iter().zip(inc).map(|(&v, c)| (v, c.clone())),
            Relation::Le,
            int(-1),
        );
    }
    lp.set_objective(w.iter().map(|&v| (v, Rational::one())), crate::lp::Direction::Min);
    solve_lp(&lp).assignment().map(|x| w.iter().map(|&v| x[v].clone()).collect())
}
