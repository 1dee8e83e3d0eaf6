//! Exact optimal mean payoffs by LP, compared with the best increment found
//! by enumeration.
//!
//! cargo run --example mean_payoff

use vassterm::decision::{max_mean_payoff, min_mean_payoff};
use vassterm::models;
use vassterm::oracle::{all_increments, DEFAULT_STRATEGY_CAP};
use vassterm::rational::{dot, format_rational, format_vector, int, ratio};

fn main() {
    let model = models::a2();
    let incs = all_increments(&model, DEFAULT_STRATEGY_CAP).unwrap();
    for w in [vec![int(1), int(1)], vec![int(1), int(0)], vec![ratio(1, 2), int(3)]] {
        let scalar = model.weight_by(&w).unwrap();
        let max = max_mean_payoff(&scalar).unwrap();
        let min = min_mean_payoff(&scalar).unwrap();
        let best = incs.iter().map(|i| dot(i, &w)).max().unwrap();
        let worst = incs.iter().map(|i| dot(i, &w)).min().unwrap();
        println!(
            "w = {}: LP max {} (oracle {}), LP min {} (oracle {}), potentials {:?}",
            format_vector(&w),
            format_rational(&max.value),
            format_rational(&best),
            format_rational(&min.value),
            format_rational(&worst),
            max.potentials.iter().map(format_rational).collect::<Vec<_>>()
        );
    }
}
