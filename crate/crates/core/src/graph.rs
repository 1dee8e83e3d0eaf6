//! Maximal end components and the shape of the MEC graph. Also almost-sure
//! reachability ("switch") strategies with exact hitting statistics.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg;
use crate::model::{StateId, StateKind, TransitionId, VassMdp};
use crate::rational::{int, Rational};

/// Tarjan's algorithm, iterative. Components come out in reverse topological
/// order of the condensation; each component is sorted.
pub fn strongly_connected_components<F>(n: usize, succ: F) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> Vec<usize>,
{
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, successors, next successor position)
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let next = succ(w);
                    call.push((w, next, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MecDecomposition {
    /// MECs ordered by their smallest state index; each sorted.
    pub mecs: Vec<Vec<StateId>>,
    pub transient: Vec<StateId>,
    /// `M -> M'` iff `M'` is reachable from `M` and `M != M'`.
    pub mec_graph: BTreeSet<(usize, usize)>,
    /// MECs that can be left and later re-entered.
    pub self_reentrant: BTreeSet<usize>,
    mec_of: Vec<Option<usize>>,
}

impl MecDecomposition {
    pub fn mec_of(&self, s: StateId) -> Option<usize> {
        self.mec_of[s]
    }

    /// A cycle `[a, b, a]` in the MEC graph, if any (the graph is transitively
    /// closed, so any cycle yields one of length two).
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        self.mec_graph
            .iter()
            .find(|(a, b)| a < b && self.mec_graph.contains(&(*b, *a)))
            .map(|&(a, b)| vec![a, b, a])
    }

    pub fn bottom(&self) -> Vec<usize> {
        (0..self.mecs.len())
            .filter(|m| !self.mec_graph.iter().any(|(a, _)| a == m))
            .collect()
    }

    pub fn describe_mec(&self, model: &VassMdp, m: usize) -> String {
        let ids: Vec<&str> = self.mecs[m].iter().map(|&s| model.state_id(s)).collect();
        format!("{{{}}}", ids.join(","))
    }
}

/// Computes the MEC decomposition by iterated SCC refinement. A probabilistic
/// state with a successor outside its SCC is removed; a nondeterministic state
/// loses its SCC-leaving transitions and is removed once none remain.
pub fn mec_decomposition(model: &VassMdp) -> MecDecomposition {
    let n = model.num_states();
    let mut alive_state = vec![true; n];
    let mut alive_tr = vec![true; model.transitions().len()];
    let mut scc_of = vec![usize::MAX; n];
    let comps = loop {
        let succ = |s: usize| -> Vec<usize> {
            if !alive_state[s] {
                return Vec::new();
            }
            model
                .outgoing(s)
                .iter()
                .filter(|&&t| alive_tr[t] && alive_state[model.transition(t).target])
                .map(|&t| model.transition(t).target)
                .collect()
        };
        let comps: Vec<Vec<usize>> = strongly_connected_components(n, succ)
            .into_iter()
            .filter(|c| alive_state[c[0]])
            .collect();
        for (i, c) in comps.iter().enumerate() {
            for &s in c {
                scc_of[s] = i;
            }
        }
        let mut changed = false;
        for s in 0..n {
            if !alive_state[s] {
                continue;
            }
            for &t in model.outgoing(s) {
                if !alive_tr[t] {
                    continue;
                }
                let tgt = model.transition(t).target;
                let leaves = !alive_state[tgt] || scc_of[tgt] != scc_of[s];
                if leaves {
                    match model.kind(s) {
                        StateKind::Probabilistic => {
                            alive_state[s] = false;
                            changed = true;
                            break;
                        }
                        StateKind::Nondeterministic => {
                            alive_tr[t] = false;
                            changed = true;
                        }
                    }
                }
            }
            if alive_state[s]
                && !model
                    .outgoing(s)
                    .iter()
                    .any(|&t| alive_tr[t] && alive_state[model.transition(t).target])
            {
                alive_state[s] = false;
                changed = true;
            }
        }
        if !changed {
            break comps;
        }
    };

    let mut mecs: Vec<Vec<StateId>> = comps
        .into_iter()
        .filter(|c| {
            c.iter().any(|&s| {
                model.outgoing(s).iter().any(|&t| {
                    alive_tr[t] && c.binary_search(&model.transition(t).target).is_ok()
                })
            })
        })
        .collect();
    mecs.sort_by_key(|c| c[0]);
    let mut mec_of = vec![None; n];
    for (i, c) in mecs.iter().enumerate() {
        for &s in c {
            mec_of[s] = Some(i);
        }
    }
    let transient: Vec<StateId> = (0..n).filter(|&s| mec_of[s].is_none()).collect();

    let reach = |from: &[StateId]| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut queue: VecDeque<StateId> = from.iter().copied().collect();
        for &s in from {
            seen[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &t in model.outgoing(s) {
                let tgt = model.transition(t).target;
                if !seen[tgt] {
                    seen[tgt] = true;
                    queue.push_back(tgt);
                }
            }
        }
        seen
    };

    let mut mec_graph = BTreeSet::new();
    let mut self_reentrant = BTreeSet::new();
    for (i, c) in mecs.iter().enumerate() {
        let seen = reach(c);
        for (j, d) in mecs.iter().enumerate() {
            if i != j && seen[d[0]] {
                mec_graph.insert((i, j));
            }
        }
        let exits: Vec<StateId> = c
            .iter()
            .flat_map(|&s| model.outgoing(s).iter().map(|&t| model.transition(t).target))
            .filter(|&tgt| mec_of[tgt] != Some(i))
            .collect();
        if !exits.is_empty() && reach(&exits)[c[0]] {
            self_reentrant.insert(i);
        }
    }

    MecDecomposition {
        mecs,
        transient,
        mec_graph,
        self_reentrant,
        mec_of,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureTag {
    StronglyConnected,
    DagLike,
    General,
}

impl std::fmt::Display for StructureTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StructureTag::StronglyConnected => "StronglyConnected",
            StructureTag::DagLike => "DagLike",
            StructureTag::General => "General",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureClass {
    pub tag: StructureTag,
    pub bottom: Vec<usize>,
    /// For `General`: a cycle through distinct MECs.
    pub cycle: Option<Vec<usize>>,
}

/// DAG-like means the MEC graph has no cycles besides self-loops; a MEC that
/// can be left and re-entered on its own does not break that.
pub fn classify_structure(model: &VassMdp, decomp: &MecDecomposition) -> StructureClass {
    let bottom = decomp.bottom();
    if decomp.mecs.len() == 1 && decomp.mecs[0].len() == model.num_states() {
        return StructureClass {
            tag: StructureTag::StronglyConnected,
            bottom,
            cycle: None,
        };
    }
    match decomp.find_cycle() {
        Some(cycle) => StructureClass {
            tag: StructureTag::General,
            bottom,
            cycle: Some(cycle),
        },
        None => StructureClass {
            tag: StructureTag::DagLike,
            bottom,
            cycle: None,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReachError {
    #[error("target {target} is not almost surely reachable from state {state}")]
    NotAlmostSurelyReachable { state: String, target: String },
}

/// MD strategy minimizing the expected hitting time of `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachStrategy {
    pub target: StateId,
    /// Chosen transition per nondeterministic state (`None` for probabilistic ones).
    pub choice: Vec<Option<TransitionId>>,
    pub expected_steps: Vec<Rational>,
    pub expected_change: Vec<Vec<Rational>>,
}

impl ReachStrategy {
    pub fn choose(&self, s: StateId) -> Option<TransitionId> {
        self.choice[s]
    }
}

/// States from which `target` is reached with probability one under some strategy.
pub fn almost_sure_region(model: &VassMdp, target: StateId) -> Vec<bool> {
    let n = model.num_states();
    let mut region = vec![true; n];
    loop {
        // states positively reaching target while staying in `region`
        let mut pos = vec![false; n];
        pos[target] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..n {
                if pos[s] || !region[s] {
                    continue;
                }
                let hit = model.outgoing(s).iter().any(|&t| {
                    let tgt = model.transition(t).target;
                    pos[tgt]
                });
                if hit {
                    pos[s] = true;
                    changed = true;
                }
            }
        }
        // closure: probabilistic states must stay inside, nondeterministic need one move inside
        let mut next = pos;
        let mut shrink = true;
        while shrink {
            shrink = false;
            for s in 0..n {
                if !next[s] || s == target {
                    continue;
                }
                let ok = match model.kind(s) {
                    StateKind::Probabilistic => model
                        .outgoing(s)
                        .iter()
                        .all(|&t| next[model.transition(t).target]),
                    StateKind::Nondeterministic => model
                        .outgoing(s)
                        .iter()
                        .any(|&t| next[model.transition(t).target]),
                };
                if !ok {
                    next[s] = false;
                    shrink = true;
                }
            }
        }
        if next == region {
            return region;
        }
        region = next;
    }
}

/// Solves `h(s) = cost(s) + Σ P(t)·h(target(t))` with `h(target) = 0` for the
/// Markov chain induced by `choice`. `cost` is per transition.
fn first_step_solve(
    model: &VassMdp,
    target: StateId,
    choice: &[Option<TransitionId>],
    cost: impl Fn(TransitionId) -> Rational,
) -> Option<Vec<Rational>> {
    let n = model.num_states();
    let mut a = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for s in 0..n {
        a[s][s] = Rational::one();
        if s == target {
            continue;
        }
        let moves: Vec<TransitionId> = match choice[s] {
            Some(t) => vec![t],
            None => model.outgoing(s).to_vec(),
        };
        for t in moves {
            let tr = model.transition(t);
            let p = tr.weight();
            b[s] += &p * cost(t);
            a[s][tr.target] -= p;
        }
    }
    linalg::solve(a, b)
}

pub fn reach_strategy(model: &VassMdp, target: StateId) -> Result<ReachStrategy, ReachError> {
    let n = model.num_states();
    let region = almost_sure_region(model, target);
    if let Some(bad) = (0..n).find(|&s| !region[s]) {
        return Err(ReachError::NotAlmostSurelyReachable {
            state: model.state_id(bad).to_string(),
            target: model.state_id(target).to_string(),
        });
    }

    // Initial proper strategy: move to a state strictly closer to the target in
    // the positive-reachability layering.
    let mut dist = vec![usize::MAX; n];
    dist[target] = 0;
    let mut layer = 0;
    loop {
        let mut grew = false;
        for s in 0..n {
            if dist[s] != usize::MAX {
                continue;
            }
            if model
                .outgoing(s)
                .iter()
                .any(|&t| dist[model.transition(t).target] <= layer)
            {
                dist[s] = layer + 1;
                grew = true;
            }
        }
        if !grew {
            break;
        }
        layer += 1;
    }
    let mut choice: Vec<Option<TransitionId>> = (0..n)
        .map(|s| {
            if !model.is_nondeterministic(s) {
                return None;
            }
            if s == target {
                return model.outgoing(s).first().copied();
            }
            model
                .outgoing(s)
                .iter()
                .copied()
                .find(|&t| dist[model.transition(t).target] < dist[s])
        })
        .collect();

    // Policy iteration on expected hitting time.
    let mut h = loop {
        let h = first_step_solve(model, target, &choice, |_| Rational::one())
            .expect("proper strategy has a unique hitting-time solution");
        let mut improved = false;
        for s in model.nondeterministic_states() {
            if s == target {
                continue;
            }
            let current = choice[s].expect("nondeterministic choice");
            let cur_val = &h[model.transition(current).target];
            let best = model
                .outgoing(s)
                .iter()
                .copied()
                .min_by(|&x, &y| {
                    h[model.transition(x).target].cmp(&h[model.transition(y).target])
                })
                .expect("nondeterministic state has transitions");
            if h[model.transition(best).target] < *cur_val {
                choice[s] = Some(best);
                improved = true;
            }
        }
        if !improved {
            break h;
        }
    };
    // Greedy choice w.r.t. the optimal values, ties by declaration order.
    let mut retie = false;
    for s in model.nondeterministic_states() {
        if s == target {
            continue;
        }
        let best_val = model
            .outgoing(s)
            .iter()
            .map(|&t| &h[model.transition(t).target])
            .min()
            .expect("transitions")
            .clone();
        let first = model
            .outgoing(s)
            .iter()
            .copied()
            .find(|&t| h[model.transition(t).target] == best_val);
        if first != choice[s] {
            choice[s] = first;
            retie = true;
        }
    }
    if retie {
        h = first_step_solve(model, target, &choice, |_| Rational::one())
            .expect("greedy optimal strategy is proper");
    }

    let d = model.dimension();
    let per_counter: Vec<Vec<Rational>> = (0..d)
        .map(|k| {
            first_step_solve(model, target, &choice, |t| int(model.transition(t).label[k]))
                .expect("proper strategy")
        })
        .collect();
    let expected_change = (0..n)
        .map(|s| per_counter.iter().map(|col| col[s].clone()).collect())
        .collect();

    Ok(ReachStrategy {
        target,
        choice,
        expected_steps: h,
        expected_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StateKind::{Nondeterministic as N, Probabilistic as P};
    use crate::models;

    fn ids(model: &VassMdp, set: &[StateId]) -> Vec<String> {
        set.iter().map(|&s| model.state_id(s).to_string()).collect()
    }

    #[test]
    fn a1_is_one_mec() {
        let m = models::a1();
        let d = mec_decomposition(&m);
        assert_eq!(d.mecs, vec![vec![0, 1, 2, 3]]);
        assert!(d.transient.is_empty());
        let c = classify_structure(&m, &d);
        assert_eq!(c.tag, StructureTag::StronglyConnected);
    }

    #[test]
    fn fig4_mecs() {
        let m = models::fig4();
        let d = mec_decomposition(&m);
        let named: Vec<Vec<String>> = d.mecs.iter().map(|c| ids(&m, c)).collect();
        assert_eq!(named, vec![vec!["p1"], vec!["p2"], vec!["f"]]);
        assert_eq!(ids(&m, &d.transient), vec!["r"]);
        let c = classify_structure(&m, &d);
        assert_eq!(c.tag, StructureTag::General);
        assert_eq!(c.cycle, Some(vec![0, 1, 0]));
        assert_eq!(c.bottom, vec![2]);
    }

    #[test]
    fn single_probabilistic_self_loop() {
        let m = models::countdown();
        let d = mec_decomposition(&m);
        assert_eq!(d.mecs, vec![vec![0]]);
    }

    #[test]
    fn two_mec_chain_is_dag_like() {
        let m = VassMdp::build(
            1,
            &[("a", N), ("b", N)],
            &[("a", &[0], "a", None), ("a", &[0], "b", None), ("b", &[0], "b", None)],
        )
        .unwrap();
        let d = mec_decomposition(&m);
        assert_eq!(d.mecs, vec![vec![0], vec![1]]);
        let c = classify_structure(&m, &d);
        assert_eq!(c.tag, StructureTag::DagLike);
        assert_eq!(c.bottom, vec![1]);
    }

    #[test]
    fn leaving_singleton_is_transient() {
        let m = VassMdp::build(
            1,
            &[("s", N), ("t", N)],
            &[("s", &[0], "t", None), ("t", &[0], "t", None)],
        )
        .unwrap();
        let d = mec_decomposition(&m);
        assert_eq!(d.transient, vec![0]);
    }

    #[test]
    fn probabilistic_leak_splits_component() {
        // p leaks to sink with prob 1/2, so {q, p} is not closed; {q} with its loop is.
        let m = VassMdp::build(
            1,
            &[("q", N), ("p", P), ("sink", N)],
            &[
                ("q", &[0], "p", None),
                ("q", &[0], "q", None),
                ("p", &[0], "q", Some("1/2")),
                ("p", &[0], "sink", Some("1/2")),
                ("sink", &[0], "sink", None),
            ],
        )
        .unwrap();
        let d = mec_decomposition(&m);
        let named: Vec<Vec<String>> = d.mecs.iter().map(|c| ids(&m, c)).collect();
        assert_eq!(named, vec![vec!["q"], vec!["sink"]]);
        assert_eq!(ids(&m, &d.transient), vec!["p"]);
        assert!(d.self_reentrant.contains(&0));
        assert_eq!(classify_structure(&m, &d).tag, StructureTag::DagLike);
    }

    #[test]
    fn reach_p2_in_a1() {
        let m = models::a1();
        let p2 = m.state_index("p2").unwrap();
        let q1 = m.state_index("q1").unwrap();
        let q2 = m.state_index("q2").unwrap();
        let p1 = m.state_index("p1").unwrap();
        let r = reach_strategy(&m, p2).unwrap();
        assert_eq!(m.transition(r.choice[q2].unwrap()).target, p2);
        assert_eq!(m.transition(r.choice[q1].unwrap()).target, q2);
        assert_eq!(r.expected_steps[q2], int(1));
        assert_eq!(r.expected_steps[q1], int(2));
        assert_eq!(r.expected_steps[p1], int(3));
        assert_eq!(r.expected_steps[p2], int(0));
        assert_eq!(r.expected_change[q1], vec![int(-1), int(-1)]);
        assert_eq!(
            r.expected_change[p1],
            vec![crate::rational::ratio(-3, 2), crate::rational::ratio(-1, 2)]
        );
    }

    #[test]
    fn reach_only_state() {
        let m = models::countdown();
        let r = reach_strategy(&m, 0).unwrap();
        assert_eq!(r.expected_steps, vec![int(0)]);
    }

    #[test]
    fn unreachable_target_errors() {
        let m = VassMdp::build(
            1,
            &[("a", N), ("b", N)],
            &[("a", &[0], "a", None), ("a", &[0], "b", None), ("b", &[0], "b", None)],
        )
        .unwrap();
        let err = reach_strategy(&m, 0).unwrap_err();
        assert!(matches!(err, ReachError::NotAlmostSurelyReachable { ref state, .. } if state == "b"));
    }

    #[test]
    fn expected_steps_satisfy_first_step_equations() {
        for seed in 0..40u64 {
            let m = crate::corpus::random_strongly_connected(seed, 5, 2);
            for target in 0..m.num_states() {
                let r = reach_strategy(&m, target).unwrap();
                for s in 0..m.num_states() {
                    if s == target {
                        assert!(r.expected_steps[s].is_zero());
                        continue;
                    }
                    let moves: Vec<TransitionId> = match r.choice[s] {
                        Some(t) => vec![t],
                        None => m.outgoing(s).to_vec(),
                    };
                    let rhs = moves.iter().fold(Rational::one(), |acc, &t| {
                        let tr = m.transition(t);
                        acc + tr.weight() * &r.expected_steps[tr.target]
                    });
                    assert_eq!(r.expected_steps[s], rhs);
                    // no single deviation improves the value
                    if m.is_nondeterministic(s) {
                        for &t in m.outgoing(s) {
                            let alt = Rational::one() + &r.expected_steps[m.transition(t).target];
                            assert!(alt >= r.expected_steps[s]);
                        }
                    }
                }
            }
        }
    }
}
