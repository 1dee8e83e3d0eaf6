//! Builds a ranking certificate and round-trips it through JSON. Tampering
//! with it exposes the first violated constraint.
//!
//! cargo run --example ranking_certificate

use vassterm::decision::{ranking_witness, validate_ranking_certificate, RankingCertificate};
use vassterm::models;
use vassterm::rational::int;

fn main() {
    let a2 = models::a2();
    let cert = ranking_witness(&a2).unwrap().expect("A2 terminates linearly");
    let text = cert.to_json();
    println!("{text}");
    let back = RankingCertificate::from_json(&text).unwrap();
    println!("a2 accepts its own certificate: {:?}", validate_ranking_certificate(&a2, &back));

    // the same vector on A1 fails at a probabilistic state
    println!("a1 with a2's certificate: {}", validate_ranking_certificate(&models::a1(), &back).unwrap_err());

    let mut weak = back.clone();
    weak.slack = int(0);
    println!("slack 0: {}", validate_ranking_certificate(&a2, &weak).unwrap_err());

    println!("a1 has a certificate: {}", ranking_witness(&models::a1()).unwrap().is_some());
}
