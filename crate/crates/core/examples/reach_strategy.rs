//! Almost-sure reachability strategies with exact expected hitting times and
//! expected counter change on the way.
//!
//! cargo run --example reach_strategy

use vassterm::graph::reach_strategy;
use vassterm::models;
use vassterm::rational::{format_rational, format_vector};

fn main() {
    let model = models::a1();
    for target in 0..model.num_states() {
        let g = reach_strategy(&model, target).expect("A1 is strongly connected");
        println!("target {}", model.state_id(target));
        for s in 0..model.num_states() {
            let choice = g.choose(s).map_or("-".to_string(), |t| model.describe_transition(t));
            println!(
                "  from {:<3} E[steps] = {:<5} E[change] = {:<12} choice {}",
                model.state_id(s),
                format_rational(&g.expected_steps[s]),
                format_vector(&g.expected_change[s]),
                choice
            );
        }
    }
    let fig4 = models::fig4();
    let f = fig4.state_index("f").unwrap();
    let p1 = fig4.state_index("p1").unwrap();
    println!("fig4, reach p1 from everywhere: {}", reach_strategy(&fig4, p1).map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()));
    println!("fig4, reach f: {}", reach_strategy(&fig4, f).is_ok());
}
