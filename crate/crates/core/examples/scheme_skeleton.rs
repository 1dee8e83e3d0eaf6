//! The lower-bound scheme for A1 at several sizes.
//!
//! cargo run --example scheme_skeleton

use vassterm::models;
use vassterm::scheme::{build_scheme, SchemeBuilder};

fn main() {
    let model = models::a1();
    let builder = SchemeBuilder::for_model(&model).unwrap();
    for line in builder.combination.describe(&model) {
        println!("{line}");
    }
    for (k, v) in builder.constants_summary() {
        println!("{k}: {v}");
    }
    for n in [5, 6, 12, 64, 256] {
        match build_scheme(&builder.combination, &builder.constants, n) {
            Ok(s) => println!(
                "n = {n:>3}: L = {:>2}, cycle [{}], {} increment steps, {} switches",
                s.length,
                s.cycle_skeleton(),
                s.increment_steps(),
                s.switch_count()
            ),
            Err(e) => println!("n = {n:>3}: {e}"),
        }
    }
}
