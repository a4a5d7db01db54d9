//! The enclosure kernel: evaluating constants, refining precision, and
//! resolving comparisons without floating point.
//!
//! Run with: cargo run --example rigorous_constants

use fibpow2::rigor::{
    eval_constant, nearest_integer_distance, resolve_compare, Expr, NamedConstant, RigorousReal,
};

fn main() {
    println!("constants at increasing precision (radius shown as decimal):");
    for prec in [64u32, 256, 1024] {
        let a = eval_constant(NamedConstant::Alpha, prec);
        println!(
            "  alpha @ {prec:4} bits: {}  (radius < 10^-{})",
            a.to_decimal(30),
            -(radius_digits(&a))
        );
    }

    // alpha satisfies x^2 - x - 1 = 0: the residual enclosure contains zero
    let a = eval_constant(NamedConstant::Alpha, 256);
    let residual = a.mul(&a).sub(&a).sub(&RigorousReal::exact_int(1, 256));
    println!(
        "\nalpha^2 - alpha - 1 lies in [{}, {}]",
        residual.lower(),
        residual.upper()
    );

    // certified comparison: 4/alpha^3 against 0.95
    let four_over_alpha_cubed = Expr::Div(
        Box::new(Expr::Int(4)),
        Box::new(Expr::PowInt(
            Box::new(Expr::Constant(NamedConstant::Alpha)),
            3,
        )),
    );
    let verdict = resolve_compare(&four_over_alpha_cubed, &Expr::Ratio(95, 100), 4096).unwrap();
    println!("\n4/alpha^3 vs 0.95: {verdict:?}");

    // exact ties are reported, not silently misresolved
    let tie = resolve_compare(&Expr::Int(2), &Expr::Int(2), 512);
    println!("2 vs 2: {tie:?}");

    // distance to the nearest integer, the building block of the reduction
    let x = eval_constant(NamedConstant::Log2, 256)
        .div(&eval_constant(NamedConstant::LogAlpha, 256))
        .unwrap()
        .mul(&RigorousReal::exact_int(84, 256));
    let d = nearest_integer_distance(&x).unwrap();
    println!("\n||84 * log2/log(alpha)|| = {}", d.to_decimal(12));
}

fn radius_digits(x: &RigorousReal) -> i64 {
    // coarse count of correct decimal digits from the radius magnitude
    let r = x.radius();
    if num::traits::Zero::is_zero(r) {
        return -99;
    }
    let bits = r.denom().magnitude().bits() as i64 - r.numer().magnitude().bits() as i64;
    -(bits * 30103 / 100000)
}
