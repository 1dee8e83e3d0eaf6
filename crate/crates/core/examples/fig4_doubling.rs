//! The doubling strategy on the three-MEC example. Truncated means
//! `E[min(Term, H)]` keep growing with `H`, the signature of an infinite
//! expectation even though every MEC alone terminates linearly.
//!
//! cargo run --release --example fig4_doubling -- [trials] [seed]

use vassterm::model::Config;
use vassterm::models;
use vassterm::sim::{compile_script, run_once, trial_rng, BranchSampler, RunOptions, ScriptedStrategy};
use vassterm::sim::script::FIG4_DOUBLING;

fn main() {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().map_or(20_000, |a| a.parse().expect("trials"));
    let seed: u64 = args.next().map_or(4, |a| a.parse().expect("seed"));

    let model = models::fig4();
    let script = compile_script(&model, &ScriptedStrategy::parse(FIG4_DOUBLING).unwrap()).unwrap();
    let sampler = BranchSampler::new(&model);
    let start = Config::new(model.state_index("p1").unwrap(), vec![0, 8]);
    let mut previous = None;
    for h in [1_000u64, 4_000, 16_000, 64_000] {
        let mut total = 0u128;
        let mut censored = 0u64;
        for trial in 0..trials {
            let mut strategy = script.clone();
            let mut rng = trial_rng(seed, h, trial);
            let trace = run_once(&model, &sampler, &mut strategy, &start, RunOptions::horizon(h), &mut rng).unwrap();
            total += trace.term.truncated() as u128;
            censored += trace.term.is_censored() as u64;
        }
        let mean = total as f64 / trials as f64;
        let ratio = previous.map_or(String::from("-"), |p: f64| format!("{:.3}", mean / p));
        println!("H = {h:>6}: E[min(Term,H)] = {mean:>9.2}, censored {censored:>5}, ratio {ratio}");
        previous = Some(mean);
    }
}
