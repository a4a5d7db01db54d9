//! From the lower bound for linear forms in logarithms to a concrete
//! absolute bound on n.
//!
//! Run with: cargo run --example linear_form_bounds

use fibpow2::heights::{height, height_bound_gamma3, AlgebraicDescriptor};
use fibpow2::matveev::{
    absolute_bound, matveev_exponent, shift_bound_inequality, LinearFormInstance, ShiftForm,
};
use fibpow2::rigor::{NamedConstant, RigorousReal};

fn main() {
    let prec = 256;

    println!("heights of the three numbers in the first form:");
    println!(
        "  h(2)     = {}",
        height(&AlgebraicDescriptor::rational(2, 1), prec)
            .unwrap()
            .to_decimal(10)
    );
    println!(
        "  h(alpha) = {}",
        height(&AlgebraicDescriptor::Named(NamedConstant::Alpha), prec)
            .unwrap()
            .to_decimal(10)
    );
    println!(
        "  h(sqrt5) = {}",
        height(&AlgebraicDescriptor::Named(NamedConstant::Sqrt5), prec)
            .unwrap()
            .to_decimal(10)
    );
    println!(
        "  bound for the shifted third number at shift 146: {}",
        height_bound_gamma3(146, prec).to_decimal(6)
    );

    // the exponent E with |Lambda| > exp(-E), evaluated at B = n = 10^6
    let inst = LinearFormInstance::first_form(prec);
    let e = matveev_exponent(&inst, &RigorousReal::exact_int(1_000_000, prec), prec).unwrap();
    println!("\nlower-bound exponent at B = 10^6: {}", e.to_decimal(2));

    // certified coefficient c with (n-m) log alpha < c log n for all n > 200
    let shift = shift_bound_inequality(prec).unwrap();
    println!(
        "\ncertified shift coefficient: {}  ({})",
        shift.constant.to_decimal(2),
        shift.inequality
    );

    // absolute bounds on n
    let symbolic = absolute_bound(
        &ShiftForm::Symbolic {
            coefficient: shift.constant.upper(),
        },
        200,
        prec,
    )
    .unwrap();
    println!(
        "\nabsolute bound on n (symbolic shift): {}",
        symbolic.resolved_bound
    );

    let capped = absolute_bound(&ShiftForm::Cap(146), 200, prec).unwrap();
    println!(
        "absolute bound on n (shift cap 146):  {}",
        capped.resolved_bound
    );
}
