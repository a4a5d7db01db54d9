//! Logarithmic heights of the algebraic numbers entering the two linear
//! forms, plus the standard height-combination bounds.
//!
//! Only the fixed descriptors needed by the pipeline are supported; the third
//! number of the second form (a parameterized unit) gets an upper bound
//! rather than an exact height, which is all the lower-bound theorem needs.

use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::Signed;

use crate::rigor::{eval_constant, NamedConstant, RigorError, RigorousReal};

#[derive(Debug, Clone, PartialEq)]
pub enum HeightError {
    /// Exact heights are not computed for the parameterized third number.
    Unsupported(String),
    Rigor(RigorError),
}

impl fmt::Display for HeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightError::Unsupported(what) => write!(f, "no exact height for {what}"),
            HeightError::Rigor(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for HeightError {}

impl From<RigorError> for HeightError {
    fn from(e: RigorError) -> Self {
        HeightError::Rigor(e)
    }
}

/// Descriptor of an algebraic number appearing in a linear form.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraicDescriptor {
    /// p/q in lowest terms, q >= 1; degree 1.
    Rational { p: BigInt, q: BigInt },
    /// One of the fixed quadratic constants; degree 2.
    Named(NamedConstant),
    /// sqrt5 * (1 - alpha^(-shift))^(-1); degree 2, height bounded only.
    Gamma3 { shift: u32 },
}

impl AlgebraicDescriptor {
    pub fn rational(p: i64, q: i64) -> Self {
        let g = BigInt::from(p).gcd(&BigInt::from(q));
        let (mut p, mut q) = (BigInt::from(p) / &g, BigInt::from(q) / &g);
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        AlgebraicDescriptor::Rational { p, q }
    }

    /// Field degree of the descriptor.
    pub fn degree(&self) -> u32 {
        match self {
            AlgebraicDescriptor::Rational { .. } => 1,
            AlgebraicDescriptor::Named(_) | AlgebraicDescriptor::Gamma3 { .. } => 2,
        }
    }

    /// Enclosure of the number itself (for |log gamma| side conditions).
    pub fn value(&self, precision_bits: u32) -> Result<RigorousReal, HeightError> {
        match self {
            AlgebraicDescriptor::Rational { p, q } => {
                let pv = RigorousReal::exact_bigint(p.clone(), precision_bits);
                let qv = RigorousReal::exact_bigint(q.clone(), precision_bits);
                Ok(pv.div(&qv)?)
            }
            AlgebraicDescriptor::Named(tag) => Ok(eval_constant(*tag, precision_bits)),
            AlgebraicDescriptor::Gamma3 { shift } => {
                let alpha = eval_constant(NamedConstant::Alpha, precision_bits);
                let sqrt5 = eval_constant(NamedConstant::Sqrt5, precision_bits);
                let one = RigorousReal::exact_int(1, precision_bits);
                let denom = one.sub(&alpha.pow_int(-(i64::from(*shift)))?);
                Ok(sqrt5.div(&denom)?)
            }
        }
    }
}

/// Exact logarithmic height of a rational or fixed named constant.
///
/// h(p/q) = log max(|p|, q); h(alpha) = h(beta) = (log alpha)/2;
/// h(sqrt5) = log sqrt5.
pub fn height(d: &AlgebraicDescriptor, precision_bits: u32) -> Result<RigorousReal, HeightError> {
    match d {
        AlgebraicDescriptor::Rational { p, q } => {
            let m = p.abs().max(q.clone());
            let v = RigorousReal::exact_bigint(m, precision_bits);
            Ok(v.log()?)
        }
        AlgebraicDescriptor::Named(tag) => match tag {
            NamedConstant::Alpha | NamedConstant::Beta => {
                let two = RigorousReal::exact_int(2, precision_bits);
                Ok(eval_constant(NamedConstant::LogAlpha, precision_bits).div(&two)?)
            }
            NamedConstant::Sqrt5 => Ok(eval_constant(NamedConstant::LogSqrt5, precision_bits)),
            other => Err(HeightError::Unsupported(format!(
                "{other} (not an algebraic number)"
            ))),
        },
        AlgebraicDescriptor::Gamma3 { .. } => Err(HeightError::Unsupported(
            "the parameterized third number; use height_bound_gamma3".into(),
        )),
    }
}

/// Height-combination rules, returning the combined upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineRule {
    /// h(x +- y) <= h(x) + h(y) + log 2
    Sum,
    /// h(x * y^(+-1)) <= h(x) + h(y)
    Product,
    /// h(x^s) <= |s| h(x)
    Power(i64),
}

pub fn height_bound_combine(
    rule: CombineRule,
    heights: &[RigorousReal],
) -> Result<RigorousReal, HeightError> {
    match rule {
        CombineRule::Sum => {
            if heights.len() != 2 {
                return Err(HeightError::Unsupported(
                    "sum rule needs two heights".into(),
                ));
            }
            let log2 = eval_constant(NamedConstant::Log2, heights[0].precision_bits());
            Ok(heights[0].add(&heights[1]).add(&log2))
        }
        CombineRule::Product => {
            if heights.len() != 2 {
                return Err(HeightError::Unsupported(
                    "product rule needs two heights".into(),
                ));
            }
            Ok(heights[0].add(&heights[1]))
        }
        CombineRule::Power(s) => {
            if heights.len() != 1 {
                return Err(HeightError::Unsupported(
                    "power rule needs one height".into(),
                ));
            }
            Ok(heights[0].mul(&RigorousReal::exact_int(
                s.abs(),
                heights[0].precision_bits(),
            )))
        }
    }
}

/// Upper bound log(2 sqrt5) + shift * (log alpha)/2 for the height of
/// sqrt5 * (1 - alpha^(-shift))^(-1).
///
/// Derivation by the combination rules: h(sqrt5) + h(1 - alpha^(-shift))
/// <= log sqrt5 + (0 + shift*(log alpha)/2 + log 2).
pub fn height_bound_gamma3(shift: u32, precision_bits: u32) -> RigorousReal {
    let prec = precision_bits;
    let log2 = eval_constant(NamedConstant::Log2, prec);
    let log_sqrt5 = eval_constant(NamedConstant::LogSqrt5, prec);
    let log_alpha = eval_constant(NamedConstant::LogAlpha, prec);
    let half_shift = RigorousReal::exact(
        num::rational::BigRational::new(BigInt::from(shift), BigInt::from(2)),
        prec,
    );
    log2.add(&log_sqrt5).add(&log_alpha.mul(&half_shift))
}
