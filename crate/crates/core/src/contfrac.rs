//! Certified continued-fraction expansion of gamma = log 2 / log alpha.
//!
//! Partial quotients are certified by running the Euclidean quotient stream
//! on both rational endpoints of an enclosure of gamma: reals sharing a
//! quotient prefix form an interval, so the common prefix of the two endpoint
//! streams is proved for every number in between, in particular for gamma.
//! Precision escalates by doubling until the prefix is long enough.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::rigor::{
    eval_constant, NamedConstant, RigorError, RigorousReal, DEFAULT_PRECISION_BITS,
    MAX_PRECISION_BITS,
};

/// Hard cap on the number of certified partial quotients.
pub const MAX_QUOTIENTS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub enum CfError {
    /// More quotients requested than [`MAX_QUOTIENTS`].
    Count {
        requested: usize,
    },
    /// Certification failed even at the precision ceiling.
    PrecisionCeiling {
        bits: u32,
    },
    Rigor(RigorError),
}

impl fmt::Display for CfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CfError::Count { requested } => {
                write!(
                    f,
                    "{requested} quotients requested, limit is {MAX_QUOTIENTS}"
                )
            }
            CfError::PrecisionCeiling { bits } => {
                write!(
                    f,
                    "could not certify the quotient prefix within {bits} bits"
                )
            }
            CfError::Rigor(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CfError {}

impl From<RigorError> for CfError {
    fn from(e: RigorError) -> Self {
        CfError::Rigor(e)
    }
}

/// The irrational numbers this module can expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfTarget {
    /// gamma = log 2 / log alpha, the slope of both homogeneous forms.
    Log2OverLogAlpha,
}

impl CfTarget {
    pub fn enclosure(&self, precision_bits: u32) -> Result<RigorousReal, RigorError> {
        match self {
            CfTarget::Log2OverLogAlpha => eval_constant(NamedConstant::Log2, precision_bits)
                .div(&eval_constant(NamedConstant::LogAlpha, precision_bits)),
        }
    }
}

/// A certified prefix of a simple continued fraction with its convergents.
#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub target: CfTarget,
    /// Partial quotients a_0, a_1, ..., all certified.
    pub quotients: Vec<BigInt>,
    /// Convergents (p_k, q_k) with p_0/q_0 = a_0/1.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Working precision that certified the prefix.
    pub precision_bits: u32,
}

/// Euclidean quotient stream of an exact rational, up to `max_terms` terms.
fn rational_quotients(x: &BigRational, max_terms: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max_terms);
    let mut v = x.clone();
    for _ in 0..max_terms {
        let a = v.floor().to_integer();
        out.push(a.clone());
        let frac = &v - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        v = frac.recip();
    }
    out
}

fn convergents_from(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut out: Vec<(BigInt, BigInt)> = Vec::with_capacity(quotients.len());
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_prev2, mut q_prev2) = (BigInt::zero(), BigInt::one());
    for a in quotients {
        let p = a * &p_prev + &p_prev2;
        let q = a * &q_prev + &q_prev2;
        out.push((p.clone(), q.clone()));
        p_prev2 = std::mem::replace(&mut p_prev, p);
        q_prev2 = std::mem::replace(&mut q_prev, q);
    }
    out
}

/// Expand `target` to `count` certified partial quotients.
pub fn expand(target: CfTarget, count: usize) -> Result<ContinuedFraction, CfError> {
    if count == 0 || count > MAX_QUOTIENTS {
        return Err(CfError::Count { requested: count });
    }
    let mut prec = DEFAULT_PRECISION_BITS;
    loop {
        let gamma = target.enclosure(prec)?;
        let lo_stream = rational_quotients(&gamma.lower(), count + 1);
        let hi_stream = rational_quotients(&gamma.upper(), count + 1);
        let common = lo_stream
            .iter()
            .zip(&hi_stream)
            .take_while(|(a, b)| a == b)
            .count();
        if common >= count {
            let quotients: Vec<BigInt> = lo_stream.into_iter().take(count).collect();
            let convergents = convergents_from(&quotients);
            return Ok(ContinuedFraction {
                target,
                quotients,
                convergents,
                precision_bits: prec,
            });
        }
        if prec >= MAX_PRECISION_BITS {
            return Err(CfError::PrecisionCeiling { bits: prec });
        }
        prec = (prec * 2).min(MAX_PRECISION_BITS);
    }
}

impl ContinuedFraction {
    /// Smallest index k with q_k > threshold, extending the certified prefix
    /// on demand.
    pub fn first_q_exceeding(&self, threshold: &BigInt) -> Result<(usize, BigInt), CfError> {
        if let Some(hit) = self
            .convergents
            .iter()
            .enumerate()
            .find(|(_, (_, q))| q > threshold)
        {
            return Ok((hit.0, hit.1 .1.clone()));
        }
        let mut count = (self.quotients.len() * 2).clamp(16, MAX_QUOTIENTS);
        loop {
            let wider = expand(self.target, count)?;
            if let Some(hit) = wider
                .convergents
                .iter()
                .enumerate()
                .find(|(_, (_, q))| q > threshold)
            {
                return Ok((hit.0, hit.1 .1.clone()));
            }
            if count == MAX_QUOTIENTS {
                return Err(CfError::Count {
                    requested: MAX_QUOTIENTS + 1,
                });
            }
            count = (count * 2).min(MAX_QUOTIENTS);
        }
    }

    /// p_k q_(k-1) - p_(k-1) q_k = (-1)^(k-1) for every k >= 1.
    pub fn determinant_identity_holds(&self) -> bool {
        self.convergents.windows(2).enumerate().all(|(k, w)| {
            let (p0, q0) = &w[0];
            let (p1, q1) = &w[1];
            let det = p1 * q0 - p0 * q1;
            let expected = if k % 2 == 0 { 1 } else { -1 };
            det == BigInt::from(expected)
        })
    }

    /// Certified check of |gamma q_k - p_k| < 1 / q_(k+1) for index k.
    pub fn best_approximation_holds(&self, k: usize) -> Result<bool, CfError> {
        if k + 1 >= self.convergents.len() {
            return Err(CfError::Count { requested: k + 2 });
        }
        let gamma = self.target.enclosure(self.precision_bits)?;
        let (p, q) = &self.convergents[k];
        let (_, q_next) = &self.convergents[k + 1];
        let lhs = gamma
            .mul_int(q)
            .sub(&RigorousReal::exact_bigint(p.clone(), self.precision_bits))
            .abs();
        let rhs = RigorousReal::exact(
            BigRational::new(BigInt::one(), q_next.clone()),
            self.precision_bits,
        );
        Ok(lhs.try_cmp(&rhs) == Some(std::cmp::Ordering::Less))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_quotients_of_gamma() {
        // gamma = 1.4404200904... so the expansion starts 1, 2, 3, 1, 2, ...
        let cf = expand(CfTarget::Log2OverLogAlpha, 20).unwrap();
        let expect: Vec<i64> = vec![
            1, 2, 3, 1, 2, 3, 2, 4, 2, 1, 2, 11, 2, 1, 11, 1, 1, 134, 2, 2,
        ];
        let got: Vec<BigInt> = expect.iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(cf.quotients, got);
    }

    #[test]
    fn leading_convergents_of_gamma() {
        let cf = expand(CfTarget::Log2OverLogAlpha, 9).unwrap();
        let expect: Vec<(i64, i64)> = vec![
            (1, 1),
            (3, 2),
            (10, 7),
            (13, 9),
            (36, 25),
            (121, 84),
            (278, 193),
            (1233, 856),
            (2744, 1905),
        ];
        for (k, (p, q)) in expect.iter().enumerate() {
            assert_eq!(cf.convergents[k], (BigInt::from(*p), BigInt::from(*q)));
        }
    }

    #[test]
    fn certified_prefix_stable_under_reexpansion() {
        let short = expand(CfTarget::Log2OverLogAlpha, 30).unwrap();
        let long = expand(CfTarget::Log2OverLogAlpha, 75).unwrap();
        assert_eq!(short.quotients, long.quotients[..30]);
    }

    #[test]
    fn determinant_identity() {
        let cf = expand(CfTarget::Log2OverLogAlpha, 75).unwrap();
        assert!(cf.determinant_identity_holds());
    }

    #[test]
    fn best_approximation_inequality() {
        let cf = expand(CfTarget::Log2OverLogAlpha, 70).unwrap();
        for k in [0usize, 5, 17, 43, 64, 66] {
            assert!(cf.best_approximation_holds(k).unwrap(), "index {k}");
        }
    }

    #[test]
    fn first_q_exceeding_extends_on_demand() {
        let cf = expand(CfTarget::Log2OverLogAlpha, 8).unwrap();
        let (idx, q) = cf.first_q_exceeding(&BigInt::from(1)).unwrap();
        assert_eq!((idx, q), (1, BigInt::from(2)));

        // the reduction thresholds: exact frozen denominators
        let m1_threshold: BigInt = "174600000000000000000000000000".parse().unwrap();
        let (idx, q) = cf.first_q_exceeding(&m1_threshold).unwrap();
        assert_eq!(idx, 66);
        assert_eq!(q, "199744633752464066483801387885".parse().unwrap());

        let m2_threshold: BigInt = "45600000000000000".parse().unwrap();
        let (idx, q) = cf.first_q_exceeding(&m2_threshold).unwrap();
        assert_eq!(idx, 36);
        assert_eq!(q, "54471843954966727".parse().unwrap());
    }

    #[test]
    fn count_guard() {
        assert!(matches!(
            expand(CfTarget::Log2OverLogAlpha, MAX_QUOTIENTS + 1),
            Err(CfError::Count { .. })
        ));
    }
}
