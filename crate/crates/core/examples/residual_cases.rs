//! The four shifts the reduction cannot touch, solved by exact identities.
//!
//! Run with: cargo run --example residual_cases

use fibpow2::cases::{all_residual_cases, cross_check_against_search};
use fibpow2::sequences::{difference_factorization, power_of_two_terms, SequenceKind};

fn main() {
    println!("powers of two among the sequence terms (index, exponent):");
    println!(
        "  fibonacci: {:?}",
        power_of_two_terms(SequenceKind::Fibonacci)
    );
    println!("  lucas:     {:?}", power_of_two_terms(SequenceKind::Lucas));

    println!("\nresidual case verdicts:");
    let verdicts = all_residual_cases();
    for v in &verdicts {
        let solutions: Vec<String> = v.small_solutions.iter().map(|t| t.to_string()).collect();
        println!(
            "  shift {:2} via {}: {}",
            v.shift,
            v.identity_used,
            if solutions.is_empty() {
                "no solutions".to_string()
            } else {
                solutions.join(", ")
            }
        );
    }

    println!(
        "\ncross-check against the exhaustive search below 200: {}",
        cross_check_against_search(&verdicts, 200)
    );

    // the even-shift factorization backing the shift-12 branch
    let f = difference_factorization(13, 1).unwrap();
    println!(
        "\nexample factorization: F(13) - F(1) = F({}) * L({}) = {} * {} = {}",
        f.left.index,
        f.right.index,
        f.left.value,
        f.right.value,
        f.product()
    );
}
