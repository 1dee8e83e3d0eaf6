//! Scheme strategy on A1 started at size `n^(1+γ)` with `γ = ε/(3-ε)`,
//! estimating `P[Term >= n^(2-ε)]` with Wilson intervals.
//!
//! cargo run --release --example power_schedule -- [trials] [seed] [epsilon]

use std::sync::Arc;

use vassterm::model::Config;
use vassterm::models;
use vassterm::scheme::{SchemeBuilder, SchemeStrategy};
use vassterm::sim::{estimate_event, SimConfig, SizeExpr, Strategy};

fn main() {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().map_or(500, |a| a.parse().expect("trials"));
    let seed: u64 = args.next().map_or(6, |a| a.parse().expect("seed"));
    let eps: f64 = args.next().map_or(0.5, |a| a.parse().expect("epsilon"));
    let gamma = eps / (3.0 - eps);

    let model = models::a1();
    let builder = SchemeBuilder::for_model(&model).unwrap();
    let p1 = builder.constants.anchors[0];
    let grid = vec![16u64, 32, 64, 128];
    let size = SizeExpr::Power { c: 1.0, p: 1.0 + gamma };
    let factory = |n: u64| -> Result<(Box<dyn Strategy>, Config), String> {
        let (_, plan) = builder.plan(&model, n).map_err(|e| e.to_string())?;
        let v = size.eval_floor(n, None).map_err(|e| e.to_string())? as i64;
        Ok((Box::new(SchemeStrategy::new(Arc::clone(&plan))), Config::uniform(p1, 2, v)))
    };
    let cfg = SimConfig::new(grid, trials, seed);
    let event = format!("term>=n^{}", 2.0 - eps).parse().unwrap();
    for e in estimate_event(&model, &factory, &cfg, event).unwrap() {
        println!("n = {:>3}: P = {:.3}  [{:.3}, {:.3}]", e.n, e.frequency, e.ci_low, e.ci_high);
    }
}
