//! Demonic and angelic verdicts for every shipped model, with the evidence
//! each verdict rests on.
//!
//! cargo run --example decide_termination

use vassterm::decision::{decide, Evidence, Mode};
use vassterm::models;
use vassterm::rational::{format_rational, format_vector};

fn main() {
    for name in models::BUILTIN_NAMES {
        let model = models::builtin(name).unwrap();
        for mode in [Mode::Demonic, Mode::Angelic] {
            let v = decide(&model, mode);
            println!("{name:>9} {mode:<8} {:<9} {:<20} {}", v.structure, v.tag, summary(&model, &v.evidence));
            for m in &v.per_mec {
                println!("{:>19} MEC {{{}}}: {}", "", m.states.join(","), m.verdict.tag);
            }
        }
    }
}

fn summary(model: &vassterm::model::VassMdp, evidence: &Evidence) -> String {
    match evidence {
        Evidence::Certificate(c) => format!(
            "w = {}, slack {}",
            format_vector(&c.w),
            format_rational(&c.slack)
        ),
        Evidence::Combination(c) => {
            let a: Vec<String> = c.items.iter().map(|i| i.coefficient.to_string()).collect();
            format!("a = ({}) over {} increments; {}", a.join(", "), c.len(), c.describe(model).join("; "))
        }
        Evidence::CounterPayoffs(ps) => {
            let v: Vec<String> = ps.iter().map(|p| format_rational(&p.value)).collect();
            format!("per-counter min mean payoff [{}]", v.join(", "))
        }
        Evidence::Cycle(c) => format!("MEC cycle {c:?}"),
        Evidence::PerMec => "see MEC table".into(),
    }
}
