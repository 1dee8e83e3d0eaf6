#![allow(dead_code)]

use std::collections::BTreeSet;

use vassterm::corpus::{random_model, random_strongly_connected};
use vassterm::graph::strongly_connected_components;
use vassterm::model::{StateKind, VassMdp};

/// Seeded strongly connected corpus: `|Q| <= 5`, `d <= 3`.
pub fn sc_corpus(count: u64) -> Vec<VassMdp> {
    (0..count)
        .map(|i| random_strongly_connected(1000 + i, 1 + (i % 5) as usize, 1 + ((i / 5) % 3) as usize))
        .collect()
}

/// Seeded corpus of arbitrary models with `|Q| <= 6`.
pub fn small_corpus(count: u64) -> Vec<VassMdp> {
    (0..count)
        .map(|i| random_model(5000 + i, 1 + (i % 6) as usize, 1 + (i % 2) as usize, false))
        .collect()
}

/// Maximal end components by testing every subset of states.
pub fn exhaustive_mecs(model: &VassMdp) -> BTreeSet<BTreeSet<usize>> {
    let n = model.num_states();
    assert!(n <= 12);
    let mut ecs: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 1u32..(1 << n) {
        let inside = |s: usize| mask & (1 << s) != 0;
        let members: Vec<usize> = (0..n).filter(|&s| inside(s)).collect();
        let allowed = |s: usize| -> Vec<usize> {
            model
                .outgoing(s)
                .iter()
                .map(|&t| model.transition(t).target)
                .filter(|&q| inside(q))
                .collect()
        };
        let closed = members.iter().all(|&s| {
            let targets = allowed(s);
            match model.kind(s) {
                StateKind::Probabilistic => targets.len() == model.outgoing(s).len(),
                StateKind::Nondeterministic => !targets.is_empty(),
            }
        });
        if !closed {
            continue;
        }
        let local: Vec<Vec<usize>> = members
            .iter()
            .map(|&s| allowed(s).iter().map(|q| members.iter().position(|m| m == q).unwrap()).collect())
            .collect();
        if strongly_connected_components(members.len(), |i| local[i].clone()).len() == 1 {
            ecs.push(members.into_iter().collect());
        }
    }
    ecs.iter()
        .filter(|e| !ecs.iter().any(|f| f.len() > e.len() && e.is_subset(f)))
        .cloned()
        .collect()
}
