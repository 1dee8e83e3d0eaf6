//! Runs the scheme strategy on A1 from `(p_1, r·n)` and reports how often
//! `Term >= L(n)^2` holds, plus the fitted growth exponent of the mean.
//!
//! cargo run --release --example quadratic_lower_bound -- [trials] [seed]

use std::collections::BTreeMap;
use std::sync::Arc;

use vassterm::model::Config;
use vassterm::models;
use vassterm::scheme::{SchemeBuilder, SchemeStrategy};
use vassterm::sim::{estimate_statistics, SimConfig, Strategy};

fn main() {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().map_or(500, |a| a.parse().expect("trials"));
    let seed: u64 = args.next().map_or(2024, |a| a.parse().expect("seed"));
    let r = 8i64;
    let grid = vec![32u64, 64, 128, 256];

    let model = models::a1();
    let builder = SchemeBuilder::for_model(&model).expect("A1 admits a scheme");
    for (k, v) in builder.constants_summary() {
        println!("{k}: {v}");
    }
    let p1 = builder.constants.anchors[0];
    let plans: BTreeMap<u64, _> = grid
        .iter()
        .map(|&n| (n, builder.plan(&model, n).expect("n large enough").1))
        .collect();
    let factory = |n: u64| -> Result<(Box<dyn Strategy>, Config), String> {
        let plan = Arc::clone(&plans[&n]);
        let size = r * n as i64;
        Ok((Box::new(SchemeStrategy::new(plan)), Config::new(p1, vec![size, size])))
    };
    let mut cfg = SimConfig::new(grid, trials, seed);
    cfg.event = Some("term>=L^2".parse().unwrap());
    cfg.scheme_denominator = Some(builder.constants.denominator);
    let stats = estimate_statistics(&model, &factory, &cfg).expect("simulation");
    print!("{}", stats.to_csv());
    println!("fitted exponent (largest half of grid): {:.3}", stats.fitted_exponent().unwrap());
}
