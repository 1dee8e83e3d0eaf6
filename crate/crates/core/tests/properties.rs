mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vassterm::corpus::{random_model, random_strongly_connected};
use vassterm::decision::{check_ranking_certificate, decide_demonic, ranking_witness, Evidence, VerdictTag};
use vassterm::graph::{classify_structure, mec_decomposition, reach_strategy, StructureTag};
use vassterm::model::{parse_model, Config, StateKind};
use vassterm::models;
use vassterm::oracle::{increment_witnesses, DEFAULT_STRATEGY_CAP};
use vassterm::rational::{to_f64, Rational};
use vassterm::scheme::{nonneg_combination, SchemeBuilder};
use vassterm::sim::{audit_trace, run_once, trial_rng, BranchSampler, RunOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_encoding_round_trips(seed in 0u64..10_000, q in 1usize..7, d in 1usize..4) {
        let m = random_model(seed, q, d, false);
        let back = parse_model(&m.to_canonical_string()).unwrap();
        prop_assert_eq!(back.to_canonical_string(), m.to_canonical_string());
        prop_assert_eq!(back.digest(), m.digest());
    }

    #[test]
    fn witnesses_and_combinations_are_valid(seed in 0u64..10_000, q in 1usize..6, d in 1usize..4) {
        let m = random_strongly_connected(seed, q, d);
        match ranking_witness(&m).unwrap() {
            Some(cert) => prop_assert!(check_ranking_certificate(&m, &cert)),
            None => {
                let incs = increment_witnesses(&m, DEFAULT_STRATEGY_CAP).unwrap();
                let combo = nonneg_combination(&incs).expect("no witness means zero is a combination");
                prop_assert!(combo.is_valid());
                prop_assert!(combo.weighted_sum().iter().all(|x| *x >= Rational::from_integer(0.into())));
            }
        }
    }

    #[test]
    fn demonic_verdict_evidence_matches_tag(seed in 0u64..10_000, q in 1usize..6, d in 1usize..3) {
        let m = random_strongly_connected(seed, q, d);
        let v = decide_demonic(&m);
        match v.tag {
            VerdictTag::Linear => prop_assert!(matches!(v.evidence, Evidence::Certificate(_))),
            VerdictTag::NotLinear => prop_assert!(matches!(v.evidence, Evidence::Combination(_))),
            VerdictTag::UnsupportedStructure => prop_assert!(false, "strongly connected models are decided"),
        }
    }

    #[test]
    fn decomposition_invariants(seed in 0u64..10_000, q in 1usize..7) {
        let m = random_model(seed, q, 1, false);
        let d = mec_decomposition(&m);
        let mut seen = vec![0; q];
        for s in d.mecs.iter().flatten().chain(&d.transient) {
            seen[*s] += 1;
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        let class = classify_structure(&m, &d);
        if class.tag == StructureTag::DagLike {
            prop_assert!(d.self_reentrant.is_empty());
        }
        for &b in &class.bottom {
            prop_assert!(!d.mec_graph.iter().any(|&(from, _)| from == b));
        }
        let exhaustive = common::exhaustive_mecs(&m);
        prop_assert_eq!(d.mecs.len(), exhaustive.len());
    }
}

/// Walks the chain induced by a reach strategy until the target is hit.
fn hitting_time(m: &vassterm::model::VassMdp, g: &vassterm::graph::ReachStrategy, from: usize, rng: &mut ChaCha8Rng) -> u64 {
    let sampler = BranchSampler::new(m);
    let mut s = from;
    let mut steps = 0;
    while s != g.target {
        let t = match m.kind(s) {
            StateKind::Nondeterministic => g.choose(s).unwrap(),
            StateKind::Probabilistic => sampler.sample(s, rng),
        };
        s = m.transition(t).target;
        steps += 1;
    }
    steps
}

#[test]
fn reach_times_match_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..20 {
        let m = random_strongly_connected(seed, 4, 1);
        let target = rng.random_range(0..4);
        let g = reach_strategy(&m, target).unwrap();
        for from in 0..4 {
            let runs = 4000;
            let samples: Vec<f64> = (0..runs).map(|_| hitting_time(&m, &g, from, &mut rng) as f64).collect();
            let mean = samples.iter().sum::<f64>() / runs as f64;
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
            let expected = to_f64(&g.expected_steps[from]);
            let tolerance = 5.0 * (var / runs as f64).sqrt() + 1e-9;
            assert!((mean - expected).abs() <= tolerance, "seed {seed} from {from}: {mean} vs {expected}");
        }
    }
}

#[test]
fn scheme_runs_are_consistent_traces() {
    let model = models::a1();
    let builder = SchemeBuilder::for_model(&model).unwrap();
    let sampler = BranchSampler::new(&model);
    let p1 = builder.constants.anchors[0];
    for trial in 0..50 {
        let mut strategy = builder.strategy(&model, 48).unwrap();
        let opts = RunOptions { horizon: 1_000_000, record: true, until_sim_len: true };
        let mut rng = trial_rng(1, 48, trial);
        let trace = run_once(&model, &sampler, &mut strategy, &Config::uniform(p1, 2, 8 * 48), opts, &mut rng).unwrap();
        audit_trace(&model, &trace).unwrap();
        let sim_len = trace.sim_len.expect("the scheme portion completes within the horizon");
        assert!(trace.length >= sim_len);
        assert!(trace.term.truncated() <= trace.length);
        assert_eq!(trace.steps.as_ref().unwrap().len() as u64, trace.length);
    }
}
