//! Exact Fibonacci and Lucas arithmetic and the identities used by the case
//! analysis: the even-parity difference factorization and the classification
//! of the terms that are powers of two.

use std::fmt;

use num::bigint::BigInt;
use num::traits::Zero;

use crate::rigor::{eval_constant, NamedConstant, RigorousReal};

/// Index guard for [`fib`] and [`lucas`].
pub const INDEX_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceError {
    /// |index| exceeds [`INDEX_LIMIT`].
    Range { index: i64 },
    /// The difference factorization needs n = m (mod 2).
    Parity { n: i64, m: i64 },
}

impl fmt::Display for SequenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceError::Range { index } => {
                write!(f, "index {index} exceeds the guard of {INDEX_LIMIT}")
            }
            SequenceError::Parity { n, m } => {
                write!(f, "factorization requires n = m (mod 2), got n={n}, m={m}")
            }
        }
    }
}

impl std::error::Error for SequenceError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    Fibonacci,
    Lucas,
}

/// A term of one of the two sequences, with its exact value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTerm {
    pub kind: SequenceKind,
    pub index: i64,
    pub value: BigInt,
}

/// (F(k), F(k+1)) for k >= 0 by fast doubling.
fn fib_pair(k: u64) -> (BigInt, BigInt) {
    if k == 0 {
        return (BigInt::zero(), BigInt::from(1));
    }
    let (a, b) = fib_pair(k / 2);
    // F(2m) = F(m) * (2 F(m+1) - F(m)),  F(2m+1) = F(m)^2 + F(m+1)^2
    let c = &a * ((&b << 1) - &a);
    let d = &a * &a + &b * &b;
    if k % 2 == 0 {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

/// F(k) for any integer index, with F(-k) = (-1)^(k+1) F(k).
pub fn fib(k: i64) -> Result<BigInt, SequenceError> {
    if k.unsigned_abs() > INDEX_LIMIT {
        return Err(SequenceError::Range { index: k });
    }
    let v = fib_pair(k.unsigned_abs()).0;
    if k >= 0 || k.unsigned_abs() % 2 == 1 {
        Ok(v)
    } else {
        Ok(-v)
    }
}

/// L(k) for any integer index, with L(-k) = (-1)^k L(k).
pub fn lucas(k: i64) -> Result<BigInt, SequenceError> {
    if k.unsigned_abs() > INDEX_LIMIT {
        return Err(SequenceError::Range { index: k });
    }
    // L(k) = 2 F(k+1) - F(k)
    let (f, f1) = fib_pair(k.unsigned_abs());
    let v = (f1 << 1) - f;
    if k >= 0 || k.unsigned_abs() % 2 == 0 {
        Ok(v)
    } else {
        Ok(-v)
    }
}

/// Enclosure of F(k) - (alpha^k - beta^k)/sqrt5; contains zero for every k.
pub fn binet_residual(k: u64, precision_bits: u32) -> RigorousReal {
    let prec = precision_bits;
    let alpha = eval_constant(NamedConstant::Alpha, prec);
    let beta = eval_constant(NamedConstant::Beta, prec);
    let sqrt5 = eval_constant(NamedConstant::Sqrt5, prec);
    let k_i64 = i64::try_from(k).expect("index fits i64");
    let closed_form = alpha
        .pow_int(k_i64)
        .expect("guarded exponent")
        .sub(&beta.pow_int(k_i64).expect("guarded exponent"))
        .div(&sqrt5)
        .expect("sqrt5 is nonzero");
    let exact = RigorousReal::exact_bigint(fib(k_i64).expect("guarded index"), prec);
    exact.sub(&closed_form)
}

/// Which congruence branch the factorization used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CongruenceCase {
    /// n = m (mod 4): F(n) - F(m) = F((n-m)/2) * L((n+m)/2)
    Mod4Equal,
    /// n = m + 2 (mod 4): F(n) - F(m) = F((n+m)/2) * L((n-m)/2)
    Mod4Shift2,
}

/// The two factors of F(n) - F(m) for even n - m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    pub left: SequenceTerm,
    pub right: SequenceTerm,
    pub congruence_case: CongruenceCase,
}

impl FactorizationResult {
    pub fn product(&self) -> BigInt {
        &self.left.value * &self.right.value
    }
}

/// Factor F(n) - F(m) for n > m >= 0 with n = m (mod 2).
pub fn difference_factorization(n: i64, m: i64) -> Result<FactorizationResult, SequenceError> {
    if n <= m || m < 0 {
        return Err(SequenceError::Parity { n, m });
    }
    if (n - m) % 2 != 0 {
        return Err(SequenceError::Parity { n, m });
    }
    let (fib_idx, lucas_idx, case) = if (n - m) % 4 == 0 {
        ((n - m) / 2, (n + m) / 2, CongruenceCase::Mod4Equal)
    } else {
        ((n + m) / 2, (n - m) / 2, CongruenceCase::Mod4Shift2)
    };
    Ok(FactorizationResult {
        left: SequenceTerm {
            kind: SequenceKind::Fibonacci,
            index: fib_idx,
            value: fib(fib_idx)?,
        },
        right: SequenceTerm {
            kind: SequenceKind::Lucas,
            index: lucas_idx,
            value: lucas(lucas_idx)?,
        },
        congruence_case: case,
    })
}

/// All nonnegative indices k whose term equals a power of two, as
/// (index, exponent) pairs.
///
/// This is a verified constant table: the perfect-power classification of the
/// two sequences leaves only finitely many candidates with value 2^e for
/// e >= 2, and the values 1 and 2 are checked directly. A bounded scan in the
/// test suite re-derives the table.
pub fn power_of_two_terms(kind: SequenceKind) -> &'static [(i64, u32)] {
    match kind {
        // F(1) = F(2) = 1, F(3) = 2, F(6) = 8
        SequenceKind::Fibonacci => &[(1, 0), (2, 0), (3, 1), (6, 3)],
        // L(0) = 2, L(1) = 1, L(3) = 4
        SequenceKind::Lucas => &[(0, 1), (1, 0), (3, 2)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::power_of_two_exponent;
    use num::rational::BigRational;

    #[test]
    fn fib_small_values() {
        let expect = [0i64, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for (k, v) in expect.iter().enumerate() {
            assert_eq!(fib(k as i64).unwrap(), BigInt::from(*v));
        }
        assert_eq!(fib(-5).unwrap(), BigInt::from(5));
        assert_eq!(fib(-4).unwrap(), BigInt::from(-3));
    }

    #[test]
    fn lucas_small_values() {
        let expect = [2i64, 1, 3, 4, 7, 11, 18, 29, 47, 76];
        for (k, v) in expect.iter().enumerate() {
            assert_eq!(lucas(k as i64).unwrap(), BigInt::from(*v));
        }
        assert_eq!(lucas(-3).unwrap(), BigInt::from(-4));
        assert_eq!(lucas(-4).unwrap(), BigInt::from(7));
    }

    #[test]
    fn index_guard() {
        assert!(matches!(
            fib(INDEX_LIMIT as i64 + 1),
            Err(SequenceError::Range { .. })
        ));
    }

    #[test]
    fn binet_residual_contains_zero() {
        for k in [1u64, 10, 50] {
            let r = binet_residual(k, 256);
            assert!(r.contains(&BigRational::zero()), "k = {k}");
        }
        // radius stays tiny at the default precision even for k = 50
        let r = binet_residual(50, 256);
        let tol = BigRational::new(BigInt::from(1), BigInt::from(10u64).pow(10));
        assert!(r.radius() < &tol);
    }

    #[test]
    fn factorization_examples() {
        // F(9) - F(3) = 34 - 2 = 32 = F(6) * L(3) = 8 * 4
        let f = difference_factorization(9, 3).unwrap();
        assert_eq!(f.congruence_case, CongruenceCase::Mod4Shift2);
        assert_eq!(f.left.value, BigInt::from(8));
        assert_eq!(f.right.value, BigInt::from(4));
        assert_eq!(f.product(), fib(9).unwrap() - fib(3).unwrap());

        // F(13) - F(1) = 232 = F(6) * L(7) = 8 * 29
        let f = difference_factorization(13, 1).unwrap();
        assert_eq!(f.congruence_case, CongruenceCase::Mod4Equal);
        assert_eq!(f.left.value, BigInt::from(8));
        assert_eq!(f.right.value, BigInt::from(29));
        assert_eq!(f.product(), BigInt::from(232));

        // F(2) - F(0) = 1 = F(1) * L(1)
        let f = difference_factorization(2, 0).unwrap();
        assert_eq!(f.product(), BigInt::from(1));

        assert!(difference_factorization(4, 1).is_err());
    }

    #[test]
    fn power_of_two_table_matches_bounded_scan() {
        for kind in [SequenceKind::Fibonacci, SequenceKind::Lucas] {
            let mut scanned = Vec::new();
            for k in 0..=1000i64 {
                let v = match kind {
                    SequenceKind::Fibonacci => fib(k).unwrap(),
                    SequenceKind::Lucas => lucas(k).unwrap(),
                };
                if let Some(e) = power_of_two_exponent(&v) {
                    scanned.push((k, e));
                }
            }
            assert_eq!(scanned.as_slice(), power_of_two_terms(kind));
        }
    }
}
