//! Seeded random model generators for property tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{RawModel, RawState, RawTransition, StateKind, VassMdp};

/// A random valid model with `states` states and `dim` counters. Updates lie in
/// `[-2, 2]`, probabilities have denominators dividing 4. With
/// `strongly_connected`, state `i` always has a transition to `i + 1 mod states`.
pub fn random_model(seed: u64, states: usize, dim: usize, strongly_connected: bool) -> VassMdp {
    assert!(states > 0 && dim > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<String> = (0..states).map(|i| format!("s{i}")).collect();
    let kinds: Vec<StateKind> = (0..states)
        .map(|_| {
            if rng.random_bool(0.5) {
                StateKind::Nondeterministic
            } else {
                StateKind::Probabilistic
            }
        })
        .collect();
    let mut transitions = Vec::new();
    for s in 0..states {
        let k = rng.random_range(1..=3usize);
        let mut targets: Vec<usize> = (0..k).map(|_| rng.random_range(0..states)).collect();
        if strongly_connected {
            targets[0] = (s + 1) % states;
        }
        let probs: Vec<Option<String>> = match kinds[s] {
            StateKind::Nondeterministic => vec![None; k],
            StateKind::Probabilistic => split_probability(&mut rng, k)
                .into_iter()
                .map(|num| Some(format!("{num}/4")))
                .collect(),
        };
        for (target, prob) in targets.into_iter().zip(probs) {
            transitions.push(RawTransition {
                from: ids[s].clone(),
                update: (0..dim).map(|_| rng.random_range(-2..=2)).collect(),
                to: ids[target].clone(),
                prob,
            });
        }
    }
    let raw = RawModel {
        dimension: dim,
        states: ids
            .iter()
            .zip(kinds)
            .map(|(id, kind)| RawState {
                id: id.clone(),
                kind,
            })
            .collect(),
        transitions,
    };
    let model = raw.resolve().expect("generated model resolves");
    debug_assert!(model.validate().is_empty());
    model
}

pub fn random_strongly_connected(seed: u64, states: usize, dim: usize) -> VassMdp {
    random_model(seed, states, dim, true)
}

/// `k` positive numerators (out of 4) summing to 4; `k <= 3`.
fn split_probability(rng: &mut ChaCha8Rng, k: usize) -> Vec<u32> {
    match k {
        1 => vec![4],
        2 => {
            let a = rng.random_range(1..=3);
            vec![a, 4 - a]
        }
        _ => {
            let mut v = vec![1, 1, 2];
            let rot = rng.random_range(0..3);
            v.rotate_left(rot);
            v
        }
    }
}
