//! Certified continued fraction of gamma = log 2 / log alpha.
//!
//! Run with: cargo run --example continued_fraction

use num::bigint::BigInt;

use fibpow2::contfrac::{expand, CfTarget};

fn main() {
    let cf = expand(CfTarget::Log2OverLogAlpha, 48).unwrap();
    println!(
        "expansion certified at {} working bits; first quotients:",
        cf.precision_bits
    );
    let quotients: Vec<String> = cf
        .quotients
        .iter()
        .take(18)
        .map(|a| a.to_string())
        .collect();
    println!("  [{}]", quotients.join(", "));

    println!("\nfirst convergents p/q:");
    for (k, (p, q)) in cf.convergents.iter().take(8).enumerate() {
        println!("  k={k}  {p}/{q}");
    }

    println!(
        "\ndeterminant identity p_k q_(k-1) - p_(k-1) q_k = (-1)^(k-1): {}",
        cf.determinant_identity_holds()
    );
    println!(
        "best-approximation check |gamma q_20 - p_20| < 1/q_21: {}",
        cf.best_approximation_holds(20).unwrap()
    );

    // the denominators the reduction stages rely on
    let m2_six: BigInt = "45600000000000000".parse().unwrap();
    let (k, q) = cf.first_q_exceeding(&m2_six).unwrap();
    println!("\nfirst q exceeding 6 * 7.6e15: index {k}, q = {q}");

    let m1_six: BigInt = "174600000000000000000000000000".parse().unwrap();
    let (k, q) = cf.first_q_exceeding(&m1_six).unwrap();
    println!("first q exceeding 6 * 2.91e28: index {k}, q = {q}");
}
