//! Simulates A2 under its demonic-optimal MD strategy and fits the growth
//! exponent of the mean termination time.
//!
//! cargo run --release --example linear_upper_bound -- [trials] [seed]

use vassterm::decision::demonic_optimal_strategy;
use vassterm::model::Config;
use vassterm::models;
use vassterm::sim::{estimate_statistics, SimConfig, Strategy};

fn main() {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().map_or(2000, |a| a.parse().expect("trials"));
    let seed: u64 = args.next().map_or(7, |a| a.parse().expect("seed"));

    let model = models::a2();
    let sigma = demonic_optimal_strategy(&model).unwrap();
    println!("strategy: {}", sigma.describe(&model));
    let factory = |n: u64| -> Result<(Box<dyn Strategy>, Config), String> {
        Ok((Box::new(sigma.clone()), Config::uniform(0, 2, n as i64)))
    };
    let cfg = SimConfig::new(vec![100, 200, 400, 800, 1600], trials, seed);
    let stats = estimate_statistics(&model, &factory, &cfg).unwrap();
    print!("{}", stats.to_csv());
    for row in &stats.rows {
        println!("n = {:>4}: mean/n = {:.3}", row.n, row.mean_term / row.n as f64);
    }
    println!("fitted exponent: {:.3}", stats.fitted_exponent().unwrap());
}
