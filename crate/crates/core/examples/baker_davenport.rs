//! The one-dimensional reduction: shrinking a 10^28-sized bound to two
//! digits, and what a degenerate shift looks like.
//!
//! Run with: cargo run --example baker_davenport

use num::bigint::BigInt;
use num::rational::BigRational;

use fibpow2::reduction::{
    batch_reduce, confirm_degenerate_shift, linearize, reduce, BatchTemplate, FormKind, MuTag,
    ReductionError, ReductionProblem,
};

fn main() {
    let prec = 256;

    // stage 1: homogeneous form, bounding the shift n - m
    let z1 = linearize(FormKind::Z1, 201, 3, prec).unwrap();
    let problem = ReductionProblem {
        mu: MuTag::Homogeneous,
        big_m: "29100000000000000000000000000".parse().unwrap(),
        amplitude: z1.amplitude,
        precision_bits: prec,
    };
    let r = reduce(&problem).unwrap();
    println!("stage 1 (mu = log(sqrt5)/log(alpha)):");
    println!("  convergent index {}: q = {}", r.q_index, r.q);
    println!("  epsilon   = {}", r.epsilon.to_decimal(12));
    println!("  threshold = {}", r.threshold.unwrap().to_decimal(6));
    println!("  => n - m <= {}", r.w_bound.unwrap());

    // stage 2 for a single healthy shift
    let z2 = linearize(FormKind::Z2, 201, 3, prec).unwrap();
    let m2: BigInt = "7600000000000000".parse().unwrap();
    let healthy = ReductionProblem {
        mu: MuTag::Shifted(5),
        big_m: m2.clone(),
        amplitude: z2.amplitude.clone(),
        precision_bits: prec,
    };
    let r = reduce(&healthy).unwrap();
    println!("\nstage 2, shift 5:");
    println!(
        "  epsilon = {}  => n <= {}",
        r.epsilon.to_decimal(8),
        r.w_bound.unwrap()
    );

    // shift 4 collapses: mu is exactly an integer
    let degenerate = ReductionProblem {
        mu: MuTag::Shifted(4),
        big_m: m2.clone(),
        amplitude: z2.amplitude.clone(),
        precision_bits: prec,
    };
    match reduce(&degenerate) {
        Err(ReductionError::Degenerate { diagnosis, .. }) => {
            println!("\nstage 2, shift 4 is degenerate:\n  {diagnosis}");
        }
        other => println!("unexpected: {other:?}"),
    }
    println!(
        "\nexact witnesses:\n  shift  4: {}\n  shift 12: {}",
        confirm_degenerate_shift(4).unwrap(),
        confirm_degenerate_shift(12).unwrap()
    );

    // the full batch over every shift the pipeline needs
    let template = BatchTemplate {
        big_m: m2,
        amplitude: BigRational::from_integer(BigInt::from(13)),
        precision_bits: prec,
    };
    let batch = batch_reduce(3..=146, &template).unwrap();
    println!(
        "\nbatch over shifts 3..=146: aggregate n <= {}, degenerate shifts {:?}",
        batch.aggregate_w_bound.unwrap(),
        batch
            .degenerate_shifts
            .iter()
            .map(|(s, _)| *s)
            .collect::<Vec<_>>()
    );
}
