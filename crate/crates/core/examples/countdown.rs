//! Deterministic sanity check: the one-state countdown terminates after
//! exactly `n + 1` steps on every run.
//!
//! cargo run --example countdown

use vassterm::model::Config;
use vassterm::models;
use vassterm::oracle::MdStrategy;
use vassterm::sim::{estimate_statistics, SimConfig, Strategy};

fn main() {
    let model = models::countdown();
    let factory = |n: u64| -> Result<(Box<dyn Strategy>, Config), String> {
        Ok((Box::new(MdStrategy::first_choices(&model)), Config::uniform(0, 1, n as i64)))
    };
    let stats = estimate_statistics(&model, &factory, &SimConfig::new(vec![1, 10, 100, 1000], 50, 1)).unwrap();
    print!("{}", stats.to_csv());
}
