//! Brute-force MD enumeration of every distinct increment with a witnessing
//! strategy, followed by a search for a separating normal.
//!
//! cargo run --example increments_oracle

use vassterm::models;
use vassterm::oracle::{increment_witnesses, md_strategy_count, separating_normal_bruteforce, DEFAULT_STRATEGY_CAP};
use vassterm::rational::format_vector;

fn main() {
    for name in ["a1", "a2"] {
        let model = models::builtin(name).unwrap();
        println!("{name}: {} MD strategies", md_strategy_count(&model));
        let incs = increment_witnesses(&model, DEFAULT_STRATEGY_CAP).unwrap();
        for i in &incs {
            let bscc: Vec<&str> = i.bscc.iter().map(|&s| model.state_id(s)).collect();
            println!("  {} on {{{}}} via {}", format_vector(&i.value), bscc.join(","), i.strategy.describe(&model));
        }
        let values: Vec<_> = incs.into_iter().map(|i| i.value).collect();
        match separating_normal_bruteforce(&values, model.dimension()) {
            Some(w) => println!("  separating normal w = {}", format_vector(&w)),
            None => println!("  no separating normal: zero lies in the increment cone"),
        }
    }
}
