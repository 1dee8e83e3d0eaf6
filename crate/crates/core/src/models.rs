//! The shipped example models (`models/*.json`), embedded at compile time.

use crate::model::{parse_model, VassMdp};

pub const A1: &str = include_str!("../models/a1.json");
pub const A2: &str = include_str!("../models/a2.json");
pub const FIG4: &str = include_str!("../models/fig4.json");
pub const COUNTDOWN: &str = include_str!("../models/countdown.json");

pub const BUILTIN_NAMES: [&str; 4] = ["a1", "a2", "fig4", "countdown"];

/// Two-counter model whose balanced 2-cycles make demonic termination quadratic.
pub fn a1() -> VassMdp {
    parse_model(A1).expect("shipped model a1 is valid")
}

/// Variant of [`a1`] with steeper decrements; demonic termination is linear.
pub fn a2() -> VassMdp {
    parse_model(A2).expect("shipped model a2 is valid")
}

/// Three singleton MECs on a cycle through a probabilistic hub; every MEC is
/// linear but the doubling strategy has infinite expected termination time.
pub fn fig4() -> VassMdp {
    parse_model(FIG4).expect("shipped model fig4 is valid")
}

/// One state, one self-loop decrementing the single counter.
pub fn countdown() -> VassMdp {
    parse_model(COUNTDOWN).expect("shipped model countdown is valid")
}

pub fn builtin_text(name: &str) -> Option<&'static str> {
    match name {
        "a1" => Some(A1),
        "a2" => Some(A2),
        "fig4" => Some(FIG4),
        "countdown" => Some(COUNTDOWN),
        _ => None,
    }
}

pub fn builtin(name: &str) -> Option<VassMdp> {
    builtin_text(name).map(|t| parse_model(t).expect("shipped models are valid"))
}
