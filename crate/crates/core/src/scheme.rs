//! The quadratic lower-bound construction for strongly connected models where
//! zero is achievable. A [`SchemeBuilder`] turns a nonnegative integer
//! combination of increments into a per-`n` plan, which [`SchemeStrategy`]
//! executes with memory.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::{reach_strategy, ReachStrategy};
use crate::lp::{solve_lp, LinearProgram, Relation};
use crate::model::{Config, StateId, TransitionId, VassMdp};
use crate::oracle::{induced_bsccs, stationary_distribution, Increment, MdStrategy};
use crate::rational::{abs, common_denominator, format_rational, format_vector, int, Rational};
use crate::sim::strategy::{Strategy, StrategyError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationItem {
    pub value: Vec<Rational>,
    pub strategy: MdStrategy,
    pub bscc: Vec<StateId>,
    pub coefficient: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnegCombination {
    pub items: Vec<CombinationItem>,
}

impl NonnegCombination {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn coefficient_sum(&self) -> u64 {
        self.items.iter().map(|i| i.coefficient).sum()
    }

    /// `Σ a_i·j_i`.
    pub fn weighted_sum(&self) -> Vec<Rational> {
        let d = self.items.first().map_or(0, |i| i.value.len());
        let mut out = vec![Rational::zero(); d];
        for item in &self.items {
            let a = int(item.coefficient as i64);
            for (o, v) in out.iter_mut().zip(&item.value) {
                *o += &a * v;
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        !self.items.is_empty()
            && self.items.iter().all(|i| i.coefficient >= 1)
            && self.weighted_sum().iter().all(|v| !v.is_negative())
    }

    pub fn describe(&self, model: &VassMdp) -> Vec<String> {
        self.items
            .iter()
            .map(|i| {
                let ids: Vec<&str> = i.bscc.iter().map(|&s| model.state_id(s)).collect();
                format!(
                    "a={} j={} bscc={{{}}}",
                    i.coefficient,
                    format_vector(&i.value),
                    ids.join(",")
                )
            })
            .collect()
    }
}

/// Positive integer coefficients with `Σ a_i·j_i >= 0`, if the zero vector is
/// in the cone of the increments. Solves `{a >= 0, Σa = 1, Σ a_i·j_i >= 0}`
/// and scales the nonzero coefficients to coprime integers.
pub fn nonneg_combination(increments: &[Increment]) -> Option<NonnegCombination> {
    let d = increments.first()?.value.len();
    let mut lp = LinearProgram::new();
    let a: Vec<usize> = (0..increments.len()).map(|i| lp.add_nonneg(format!("a{i}"))).collect();
    lp.add_constraint(a.iter().map(|&v| (v, Rational::one())), Relation::Eq, Rational::one());
    for k in 0..d {
        lp.add_constraint(
            a.iter().zip(increments).map(|(&v, inc)| (v, inc.value[k].clone())),
            Relation::Ge,
            Rational::zero(),
        );
    }
    let x = solve_lp(&lp).assignment()?.to_vec();
    let chosen: Vec<(usize, Rational)> = a
        .iter()
        .enumerate()
        .filter(|(_, &v)| x[v].is_positive())
        .map(|(i, &v)| (i, x[v].clone()))
        .collect();
    let den = common_denominator(chosen.iter().map(|(_, r)| r));
    let nums: Vec<BigInt> = chosen.iter().map(|(_, r)| (r * Rational::from(den.clone())).to_integer()).collect();
    let g = nums.iter().fold(BigInt::zero(), |g, n| g.gcd(n));
    let items = chosen
        .iter()
        .zip(&nums)
        .map(|((i, _), n)| CombinationItem {
            value: increments[*i].value.clone(),
            strategy: increments[*i].strategy.clone(),
            bscc: increments[*i].bscc.clone(),
            coefficient: (n / &g).to_u64().expect("coefficient fits in u64"),
        })
        .collect();
    Some(NonnegCombination { items })
}

/// Splits a transition-frequency vector into stationary frequencies of BSCCs
/// of MD strategies. The returned increments have nonnegative weights summing
/// to one whose combination reproduces `freq`.
pub fn decompose_frequencies(model: &VassMdp, freq: &[Rational]) -> Vec<(Rational, Increment)> {
    let mut rem = freq.to_vec();
    let mut out = Vec::new();
    while rem.iter().any(|f| f.is_positive()) {
        let mut strategy = MdStrategy::first_choices(model);
        let mut support = vec![false; model.num_states()];
        for (s, in_support) in support.iter_mut().enumerate() {
            if let Some(&t) = model.outgoing(s).iter().find(|&&t| rem[t].is_positive()) {
                *in_support = true;
                if model.is_nondeterministic(s) {
                    strategy.choice[s] = Some(t);
                }
            }
        }
        let bscc = induced_bsccs(model, &strategy)
            .into_iter()
            .find(|b| b.iter().all(|&s| support[s]))
            .expect("the support of a circulation is closed under the chosen moves");
        let eta = stationary_distribution(model, &strategy, &bscc);
        let mut g = vec![Rational::zero(); rem.len()];
        let mut value = vec![Rational::zero(); model.dimension()];
        for (&s, e) in bscc.iter().zip(&eta) {
            for t in strategy.moves(model, s) {
                let tr = model.transition(t);
                g[t] = e * tr.weight();
                for (v, &u) in value.iter_mut().zip(&tr.label) {
                    *v += &g[t] * int(u);
                }
            }
        }
        let theta = g
            .iter()
            .zip(&rem)
            .filter(|(gt, _)| gt.is_positive())
            .map(|(gt, r)| r / gt)
            .min()
            .expect("a BSCC has transitions");
        for (r, gt) in rem.iter_mut().zip(&g) {
            *r -= &theta * gt;
        }
        out.push((
            theta,
            Increment {
                value,
                strategy,
                bscc,
                stationary: eta,
            },
        ));
    }
    out
}

/// Combination from a zero-achieving frequency vector (polynomial path).
pub fn combination_from_frequencies(model: &VassMdp, freq: &[Rational]) -> Option<NonnegCombination> {
    let parts: Vec<Increment> = decompose_frequencies(model, freq).into_iter().map(|(_, i)| i).collect();
    nonneg_combination(&parts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeConstants {
    pub xi: Rational,
    pub min_update: i64,
    pub x_min: Rational,
    pub lambda: Rational,
    pub denominator: u64,
    /// Anchor state of each BSCC: the lexicographically smallest id.
    pub anchors: Vec<StateId>,
}

impl SchemeConstants {
    pub fn length(&self, n: u64) -> u64 {
        n / self.denominator
    }
}

fn anchor(model: &VassMdp, bscc: &[StateId]) -> StateId {
    *bscc
        .iter()
        .min_by_key(|&&s| model.state_id(s))
        .expect("nonempty BSCC")
}

/// Switch strategies toward every state of every BSCC of the combination.
fn switch_strategies(model: &VassMdp, combo: &NonnegCombination) -> BTreeMap<StateId, ReachStrategy> {
    let mut out = BTreeMap::new();
    for item in &combo.items {
        for &t in &item.bscc {
            out.entry(t).or_insert_with(|| {
                reach_strategy(model, t).expect("strongly connected: every target is almost surely reachable")
            });
        }
    }
    out
}

/// `ξ` is the largest absolute expected counter change of a switch from any
/// state of `B_i` to any state of `B_{i+1}` (cyclically).
pub fn scheme_constants(model: &VassMdp, combo: &NonnegCombination) -> SchemeConstants {
    let switches = switch_strategies(model, combo);
    let ell = combo.items.len();
    let mut xi = Rational::zero();
    for i in 0..ell {
        let next = &combo.items[(i + 1) % ell];
        for &t in &next.bscc {
            let gamma = &switches[&t];
            for &s in &combo.items[i].bscc {
                for c in &gamma.expected_change[s] {
                    let a = abs(c);
                    if a > xi {
                        xi = a;
                    }
                }
            }
        }
    }
    let min_update = model.min_update();
    let sum_a = combo.coefficient_sum() as i64;
    let raw = int(ell as i64) * &xi - int(sum_a * min_update) + Rational::one();
    let denominator = raw.ceil().to_integer().to_u64().unwrap_or(1).max(1);
    let x_min = model.min_probability();
    let q = model.num_states() as i64;
    let lambda = if q <= 1 {
        Rational::zero()
    } else {
        let mut pow = Rational::one();
        for _ in 0..q - 1 {
            pow *= &x_min;
        }
        int(q - 1) / pow
    };
    SchemeConstants {
        xi,
        min_update,
        x_min,
        lambda,
        denominator,
        anchors: combo.items.iter().map(|i| anchor(model, &i.bscc)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("n = {n} is below the scheme denominator {denominator}, so L(n) = 0")]
    TooSmall { n: u64, denominator: u64 },
    #[error("model is not strongly connected")]
    NotStronglyConnected,
    #[error("zero is not achievable; the model has a ranking certificate")]
    NoCombination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeElement {
    /// One step of increment `i` (0-based).
    Step(usize),
    /// Switch marker after segment `i`.
    Switch(usize),
}

/// `L` identical cycles; segment `i` of a cycle is `L·a_i` steps of increment
/// `i` followed by switch `s_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    pub n: u64,
    pub length: u64,
    pub coefficients: Vec<u64>,
}

pub fn build_scheme(combo: &NonnegCombination, consts: &SchemeConstants, n: u64) -> Result<Scheme, SchemeError> {
    let length = consts.length(n);
    if length == 0 {
        return Err(SchemeError::TooSmall {
            n,
            denominator: consts.denominator,
        });
    }
    Ok(Scheme {
        n,
        length,
        coefficients: combo.items.iter().map(|i| i.coefficient).collect(),
    })
}

impl Scheme {
    pub fn segment_len(&self, i: usize) -> u64 {
        self.length * self.coefficients[i]
    }

    pub fn increment_steps(&self) -> u64 {
        self.length * self.length * self.coefficients.iter().sum::<u64>()
    }

    pub fn switch_count(&self) -> u64 {
        self.length * self.coefficients.len() as u64
    }

    /// One cycle, e.g. `j1 x4, s1, j2 x4, s2`.
    pub fn cycle_skeleton(&self) -> String {
        (0..self.coefficients.len())
            .map(|i| format!("j{} x{}, s{}", i + 1, self.segment_len(i), i + 1))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn elements(&self) -> impl Iterator<Item = SchemeElement> + '_ {
        (0..self.length).flat_map(move |_| {
            (0..self.coefficients.len()).flat_map(move |i| {
                (0..self.segment_len(i))
                    .map(move |_| SchemeElement::Step(i))
                    .chain(std::iter::once(SchemeElement::Switch(i)))
            })
        })
    }

    /// Componentwise minimum of the symbolic trajectory from `start`, where a
    /// step of increment `i` adds `values[i]` and a switch adds `switch_change`.
    pub fn trajectory_minimum(
        &self,
        values: &[Vec<Rational>],
        switch_change: &Rational,
        start: &[Rational],
    ) -> Vec<Rational> {
        let mut cur = start.to_vec();
        let mut low = start.to_vec();
        for _ in 0..self.length {
            for (i, v) in values.iter().enumerate() {
                let k = int(self.segment_len(i) as i64);
                for c in 0..cur.len() {
                    cur[c] += &k * &v[c];
                    cur[c] += switch_change;
                    // within a segment the path is linear, so the minimum is at an endpoint
                    let seg_end = &cur[c] - switch_change;
                    for x in [&seg_end, &cur[c]] {
                        if *x < low[c] {
                            low[c] = x.clone();
                        }
                    }
                }
            }
        }
        low
    }
}

/// Immutable data shared by every run of a scheme strategy.
#[derive(Debug, Clone)]
pub struct SchemePlan {
    pub anchors: Vec<StateId>,
    pub segment_len: Vec<u64>,
    pub cycles: u64,
    sigma: Vec<MdStrategy>,
    gamma: BTreeMap<StateId, Vec<Option<TransitionId>>>,
}

impl SchemePlan {
    pub fn new(model: &VassMdp, combo: &NonnegCombination, consts: &SchemeConstants, scheme: &Scheme) -> Self {
        let gamma = switch_strategies(model, combo)
            .into_iter()
            .map(|(t, r)| (t, r.choice))
            .collect();
        SchemePlan {
            anchors: consts.anchors.clone(),
            segment_len: (0..combo.items.len()).map(|i| scheme.segment_len(i)).collect(),
            cycles: scheme.length,
            sigma: combo.items.iter().map(|i| i.strategy.clone()).collect(),
            gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Simulate(usize),
    Switch(StateId),
    Done,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum After {
    Segment { cycle: u64, segment: usize },
    Done,
}

/// A completed phase and the number of steps it took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseRecord {
    pub phase: Phase,
    pub steps: u64,
}

/// The strategy `η_n`. One instance per run.
#[derive(Debug, Clone)]
pub struct SchemeStrategy {
    plan: Arc<SchemePlan>,
    phase: Phase,
    after: After,
    cycle: u64,
    phase_steps: u64,
    total_steps: u64,
    /// `q_i` of the previous and the current cycle.
    previous: Vec<Option<StateId>>,
    current: Vec<Option<StateId>>,
    sim_len: Option<u64>,
    log: Vec<PhaseRecord>,
}

impl SchemeStrategy {
    pub fn new(plan: Arc<SchemePlan>) -> Self {
        let ell = plan.sigma.len();
        SchemeStrategy {
            phase: Phase::Switch(plan.anchors[0]),
            after: After::Segment { cycle: 0, segment: 0 },
            plan,
            cycle: 0,
            phase_steps: 0,
            total_steps: 0,
            previous: vec![None; ell],
            current: vec![None; ell],
            sim_len: None,
            log: Vec::new(),
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Completed phases in order (the initial switch to `p_1` included).
    pub fn log(&self) -> &[PhaseRecord] {
        &self.log
    }

    fn finish_phase(&mut self, next: Phase) {
        self.log.push(PhaseRecord {
            phase: self.phase,
            steps: self.phase_steps,
        });
        self.phase = next;
        self.phase_steps = 0;
    }

    fn settle(&mut self, state: StateId) {
        loop {
            match self.phase {
                Phase::Switch(target) if target == state => match self.after {
                    After::Segment { cycle, segment } => {
                        if cycle != self.cycle {
                            let ell = self.current.len();
                            self.previous = std::mem::replace(&mut self.current, vec![None; ell]);
                            self.cycle = cycle;
                        }
                        self.finish_phase(Phase::Simulate(segment));
                    }
                    After::Done => {
                        self.finish_phase(Phase::Done);
                        self.sim_len = Some(self.total_steps);
                    }
                },
                Phase::Simulate(i) if self.phase_steps == self.plan.segment_len[i] => {
                    self.current[i] = Some(state);
                    let ell = self.plan.sigma.len();
                    let (target, after) = if i + 1 < ell {
                        let target = if self.cycle == 0 {
                            self.plan.anchors[i + 1]
                        } else {
                            self.previous[i + 1].expect("recorded in the previous cycle")
                        };
                        (
                            target,
                            After::Segment {
                                cycle: self.cycle,
                                segment: i + 1,
                            },
                        )
                    } else {
                        let target = self.current[0].expect("recorded in this cycle");
                        let after = if self.cycle + 1 < self.plan.cycles {
                            After::Segment {
                                cycle: self.cycle + 1,
                                segment: 0,
                            }
                        } else {
                            After::Done
                        };
                        (target, after)
                    };
                    self.after = after;
                    self.finish_phase(Phase::Switch(target));
                }
                _ => return,
            }
        }
    }
}

impl Strategy for SchemeStrategy {
    fn start(&mut self, config: &Config) {
        *self = SchemeStrategy::new(self.plan.clone());
        self.settle(config.state);
    }

    fn choose(&mut self, state: StateId, _counters: &[i64]) -> Result<TransitionId, StrategyError> {
        let choice = match self.phase {
            Phase::Simulate(i) => self.plan.sigma[i].choice[state],
            Phase::Switch(target) => self.plan.gamma[&target][state],
            Phase::Done => self.plan.sigma[0].choice[state],
        };
        choice.ok_or_else(|| StrategyError::NoChoice(state.to_string()))
    }

    fn on_step(&mut self, _from: StateId, _transition: TransitionId, to: StateId, _counters: &[i64]) {
        self.total_steps += 1;
        if self.phase != Phase::Done {
            self.phase_steps += 1;
        }
        self.settle(to);
    }

    fn sim_len(&self) -> Option<u64> {
        self.sim_len
    }

    fn tracks_sim_len(&self) -> bool {
        true
    }
}

/// Everything needed to run `η_n` on one model, computed once.
#[derive(Debug, Clone)]
pub struct SchemeBuilder {
    pub combination: NonnegCombination,
    pub constants: SchemeConstants,
}

impl SchemeBuilder {
    /// Uses the polynomial path: zero-achieving frequencies decomposed into increments.
    pub fn for_model(model: &VassMdp) -> Result<Self, SchemeError> {
        let freq = crate::decision::zero_achieving_frequencies(model)
            .map_err(|_| SchemeError::NotStronglyConnected)?
            .ok_or(SchemeError::NoCombination)?;
        let combination = combination_from_frequencies(model, &freq).ok_or(SchemeError::NoCombination)?;
        let constants = scheme_constants(model, &combination);
        Ok(SchemeBuilder { combination, constants })
    }

    pub fn plan(&self, model: &VassMdp, n: u64) -> Result<(Scheme, Arc<SchemePlan>), SchemeError> {
        let scheme = build_scheme(&self.combination, &self.constants, n)?;
        let plan = Arc::new(SchemePlan::new(model, &self.combination, &self.constants, &scheme));
        Ok((scheme, plan))
    }

    pub fn strategy(&self, model: &VassMdp, n: u64) -> Result<SchemeStrategy, SchemeError> {
        Ok(SchemeStrategy::new(self.plan(model, n)?.1))
    }

    pub fn constants_summary(&self) -> Vec<(String, String)> {
        let c = &self.constants;
        vec![
            ("xi".into(), format_rational(&c.xi)),
            ("min_update".into(), c.min_update.to_string()),
            ("x_min".into(), format_rational(&c.x_min)),
            ("lambda".into(), format_rational(&c.lambda)),
            ("denominator".into(), c.denominator.to_string()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::oracle::{all_increments, increment_witnesses, separating_normal_bruteforce};
    use crate::rational::ratio;

    fn inc(value: Vec<Rational>) -> Increment {
        Increment {
            value,
            strategy: MdStrategy { choice: vec![] },
            bscc: vec![0],
            stationary: vec![int(1)],
        }
    }

    #[test]
    fn a1_combination_is_one_one() {
        let incs = vec![
            inc(vec![ratio(-1, 4), ratio(1, 4)]),
            inc(vec![ratio(1, 4), ratio(-1, 4)]),
        ];
        let c = nonneg_combination(&incs).unwrap();
        let a: Vec<u64> = c.items.iter().map(|i| i.coefficient).collect();
        assert_eq!(a, vec![1, 1]);
        assert_eq!(c.weighted_sum(), vec![int(0), int(0)]);
    }

    #[test]
    fn a2_has_no_combination() {
        let incs: Vec<Increment> = increment_witnesses(&models::a2(), 100).unwrap();
        assert!(nonneg_combination(&incs).is_none());
    }

    #[test]
    fn zero_increment_alone() {
        let c = nonneg_combination(&[inc(vec![int(0), int(0)])]).unwrap();
        assert_eq!(c.items.len(), 1);
        assert_eq!(c.items[0].coefficient, 1);
    }

    #[test]
    fn polynomial_path_on_a1() {
        let b = SchemeBuilder::for_model(&models::a1()).unwrap();
        assert!(b.combination.is_valid());
        let a: Vec<u64> = b.combination.items.iter().map(|i| i.coefficient).collect();
        assert_eq!(a, vec![1, 1]);
        assert_eq!(b.constants.min_update, -1);
        assert_eq!(b.constants.x_min, ratio(1, 2));
        assert_eq!(b.constants.lambda, int(24));
        assert_eq!(b.constants.xi, ratio(3, 2));
        assert_eq!(b.constants.denominator, 6);
    }

    #[test]
    fn decomposition_reproduces_frequencies() {
        for seed in 0..40 {
            let m = crate::corpus::random_strongly_connected(seed, 5, 2);
            let Some(freq) = crate::decision::zero_achieving_frequencies(&m).unwrap() else {
                continue;
            };
            let parts = decompose_frequencies(&m, &freq);
            let total: Rational = parts.iter().map(|(t, _)| t.clone()).sum();
            assert_eq!(total, int(1));
            let mut sum = vec![Rational::zero(); m.dimension()];
            for (theta, i) in &parts {
                for (s, v) in sum.iter_mut().zip(&i.value) {
                    *s += theta * v;
                }
            }
            assert!(sum.iter().all(|v| !v.is_negative()));
            let c = combination_from_frequencies(&m, &freq).unwrap();
            assert!(c.is_valid());
        }
    }

    #[test]
    fn combination_excludes_separator() {
        for seed in 100..160 {
            let m = crate::corpus::random_strongly_connected(seed, 4, 2);
            let incs = increment_witnesses(&m, 10_000).unwrap();
            let values = all_increments(&m, 10_000).unwrap();
            let combo = nonneg_combination(&incs);
            let sep = separating_normal_bruteforce(&values, 2);
            assert_ne!(combo.is_some(), sep.is_some(), "seed {seed}");
        }
    }

    #[test]
    fn scheme_shape() {
        let b = SchemeBuilder::for_model(&models::a1()).unwrap();
        let s = build_scheme(&b.combination, &b.constants, 12).unwrap();
        assert_eq!(s.length, 2);
        let elems: Vec<SchemeElement> = s.elements().collect();
        use SchemeElement::*;
        let cycle = [Step(0), Step(0), Switch(0), Step(1), Step(1), Switch(1)];
        assert_eq!(elems, [cycle, cycle].concat());
        assert_eq!(s.increment_steps(), 8);
        assert_eq!(s.switch_count(), 4);
        assert!(matches!(
            build_scheme(&b.combination, &b.constants, 5),
            Err(SchemeError::TooSmall { .. })
        ));
        for n in (6..200).step_by(7) {
            let s = build_scheme(&b.combination, &b.constants, n).unwrap();
            let steps = s.elements().filter(|e| matches!(e, Step(_))).count() as u64;
            assert_eq!(steps, s.increment_steps());
            assert_eq!(s.elements().count() as u64 - steps, s.switch_count());
        }
    }

    #[test]
    fn single_item_scheme() {
        let combo = NonnegCombination {
            items: vec![CombinationItem {
                value: vec![int(0)],
                strategy: MdStrategy { choice: vec![] },
                bscc: vec![0],
                coefficient: 1,
            }],
        };
        let consts = SchemeConstants {
            xi: int(0),
            min_update: 0,
            x_min: int(1),
            lambda: int(0),
            denominator: 1,
            anchors: vec![0],
        };
        let s = build_scheme(&combo, &consts, 3).unwrap();
        assert_eq!(s.cycle_skeleton(), "j1 x3, s1");
        assert_eq!(s.increment_steps(), 9);
    }

    #[test]
    fn a1_trajectory_stays_positive() {
        let b = SchemeBuilder::for_model(&models::a1()).unwrap();
        let values: Vec<Vec<Rational>> = b.combination.items.iter().map(|i| i.value.clone()).collect();
        let switch = -b.constants.xi.clone();
        for n in [6u64, 30, 120, 600] {
            let s = build_scheme(&b.combination, &b.constants, n).unwrap();
            let start = vec![int(n as i64), int(n as i64)];
            let low = s.trajectory_minimum(&values, &switch, &start);
            assert!(low.iter().all(|v| !v.is_negative()), "n={n} low={low:?}");
        }
    }

    #[test]
    fn controller_follows_rotation() {
        let m = models::a1();
        let b = SchemeBuilder::for_model(&m).unwrap();
        let mut s = b.strategy(&m, 12).unwrap();
        let p1 = b.constants.anchors[0];
        s.start(&Config::new(p1, vec![100, 100]));
        assert_eq!(s.phase(), Phase::Simulate(0));
        assert_eq!(s.log().len(), 1);
        assert_eq!(s.log()[0].steps, 0);
    }
}
