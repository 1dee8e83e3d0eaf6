//! MEC decomposition and structural class of the shipped models and a few
//! random ones.
//!
//! cargo run --example mec_structure -- [seed]

use vassterm::corpus::random_model;
use vassterm::graph::{classify_structure, mec_decomposition};
use vassterm::model::VassMdp;
use vassterm::models;

fn show(name: &str, model: &VassMdp) {
    let d = mec_decomposition(model);
    let class = classify_structure(model, &d);
    let mecs: Vec<String> = (0..d.mecs.len()).map(|m| d.describe_mec(model, m)).collect();
    let transient: Vec<&str> = d.transient.iter().map(|&s| model.state_id(s)).collect();
    println!("{name}: {} | MECs {} | transient {{{}}} | edges {:?} | bottom {:?}",
        class.tag, mecs.join(" "), transient.join(","), d.mec_graph, class.bottom);
    if let Some(cycle) = class.cycle {
        let names: Vec<String> = cycle.iter().map(|&m| d.describe_mec(model, m)).collect();
        println!("  cycle {}", names.join(" -> "));
    }
}

fn main() {
    let seed: u64 = std::env::args().nth(1).map_or(1, |a| a.parse().expect("seed"));
    for name in models::BUILTIN_NAMES {
        show(name, &models::builtin(name).unwrap());
    }
    for k in 0..5 {
        show(&format!("random#{}", seed + k), &random_model(seed + k, 6, 2, false));
    }
}
