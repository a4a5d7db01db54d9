//! Exact arithmetic in the quadratic field Q(sqrt 5).
//!
//! Elements are stored as `a + b*sqrt(5)` with rational coordinates, which is
//! enough to prove the algebraic identities behind the degenerate reduction
//! shifts symbolically instead of numerically.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

/// `a + b*sqrt(5)` with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadExt { a, b }
    }

    pub fn from_int(v: i64) -> Self {
        QuadExt::new(
            BigRational::from_integer(BigInt::from(v)),
            BigRational::zero(),
        )
    }

    pub fn from_bigint(v: BigInt) -> Self {
        QuadExt::new(BigRational::from_integer(v), BigRational::zero())
    }

    pub fn sqrt5() -> Self {
        QuadExt::new(BigRational::zero(), BigRational::one())
    }

    /// Golden ratio (1 + sqrt5)/2.
    pub fn alpha() -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        QuadExt::new(half.clone(), half)
    }

    /// Conjugate root (1 - sqrt5)/2.
    pub fn beta() -> Self {
        Self::alpha().conjugate()
    }

    /// Galois conjugate a - b*sqrt(5).
    pub fn conjugate(&self) -> Self {
        QuadExt::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm a^2 - 5 b^2.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(5)) * &self.b * &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn inverse(&self) -> Option<QuadExt> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadExt::new(&self.a / &n, -&self.b / &n))
    }

    pub fn pow(&self, k: i64) -> Option<QuadExt> {
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = QuadExt::from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(5)", self.a, self.b)
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a.clone(), -self.b.clone())
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let five = BigRational::from_integer(BigInt::from(5));
        QuadExt::new(
            &self.a * &rhs.a + &five * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Div for &QuadExt {
    type Output = Option<QuadExt>;
    // division in the field is multiplication by the inverse
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadExt) -> Option<QuadExt> {
        Some(self * &rhs.inverse()?)
    }
}
