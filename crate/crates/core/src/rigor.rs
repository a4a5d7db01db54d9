//! Enclosure arithmetic over exact rationals.
//!
//! Every analytic quantity in the proof pipeline is represented as a
//! [`RigorousReal`]: a midpoint/radius pair of exact `BigRational`s such that
//! the true value is guaranteed to lie in `[midpoint - radius, midpoint + radius]`.
//! Arithmetic returns enclosures of the exact image of the inputs; transcendental
//! functions (log, exp, sqrt) are evaluated by directed series with explicit tail
//! bounds. Midpoints are rounded outward to dyadics at the working precision so
//! denominators cannot grow without bound.
//!
//! Comparisons that cannot be decided at the current precision are retried at
//! doubled precision up to a ceiling; an exact tie surfaces as
//! [`RigorError::Undecidable`].

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 256;
/// Escalation ceiling; reaching it without a decision signals degeneracy.
pub const MAX_PRECISION_BITS: u32 = 16384;
/// Smallest accepted working precision.
pub const MIN_PRECISION_BITS: u32 = 32;

const GUARD_BITS: u32 = 32;
const RADIUS_BITS: u32 = 48;

/// Errors raised by the enclosure kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RigorError {
    /// A precondition on the mathematical domain failed (division by an
    /// interval containing zero, log of a non-positive interval, ...).
    Domain(String),
    /// The enclosure is too wide for the requested operation; the caller
    /// should re-evaluate its inputs at higher precision.
    Precision { bits: u32 },
    /// A comparison failed to separate up to the precision ceiling.
    Undecidable { bits: u32 },
}

impl fmt::Display for RigorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RigorError::Domain(msg) => write!(f, "domain error: {msg}"),
            RigorError::Precision { bits } => {
                write!(f, "enclosure too wide at {bits} bits; escalate precision")
            }
            RigorError::Undecidable { bits } => {
                write!(
                    f,
                    "comparison undecidable up to {bits} bits (possible exact tie)"
                )
            }
        }
    }
}

impl std::error::Error for RigorError {}

/// 2^e as an exact rational, for any sign of `e`.
fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Approximate binary magnitude: x != 0 lies in (2^(mag-1), 2^(mag+1)).
fn magnitude(x: &BigRational) -> i64 {
    debug_assert!(!x.is_zero());
    x.numer().magnitude().bits() as i64 - x.denom().magnitude().bits() as i64
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Down,
    Up,
}

impl Dir {
    fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// Round `x` to a dyadic with about `prec` significant bits, in direction `dir`.
fn dyadic_dir(x: &BigRational, prec: u32, dir: Dir) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let s = prec as i64 - magnitude(x);
    // x * 2^s = n / d with d > 0; round the integer quotient in direction dir.
    let (n, d) = if s >= 0 {
        (x.numer() << s as usize, x.denom().clone())
    } else {
        (x.numer().clone(), x.denom() << (-s) as usize)
    };
    let q = match dir {
        Dir::Down => n.div_floor(&d),
        Dir::Up => -(-n).div_floor(&d),
    };
    BigRational::from_integer(q) * pow2(-s)
}

/// Round `x` to the nearest dyadic with about `prec` significant bits and
/// return the value together with an upper bound on the rounding error.
fn dyadic_nearest(x: &BigRational, prec: u32) -> (BigRational, BigRational) {
    if x.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let s = prec as i64 - magnitude(x);
    let (n, d) = if s >= 0 {
        (x.numer() << s as usize, x.denom().clone())
    } else {
        (x.numer().clone(), x.denom() << (-s) as usize)
    };
    // round-half-up: floor((2n + d) / 2d)
    let q = ((n << 1usize) + &d).div_floor(&(d << 1usize));
    (BigRational::from_integer(q) * pow2(-s), pow2(-s - 1))
}

/// An enclosure `[midpoint - radius, midpoint + radius]` of a real number.
#[derive(Clone, Debug, PartialEq)]
pub struct RigorousReal {
    midpoint: BigRational,
    radius: BigRational,
    precision_bits: u32,
}

impl RigorousReal {
    /// Exact rational value (radius zero).
    pub fn exact(value: BigRational, precision_bits: u32) -> Self {
        RigorousReal {
            midpoint: value,
            radius: BigRational::zero(),
            precision_bits: precision_bits.max(MIN_PRECISION_BITS),
        }
    }

    /// Exact integer value.
    pub fn exact_int(value: i64, precision_bits: u32) -> Self {
        Self::exact(
            BigRational::from_integer(BigInt::from(value)),
            precision_bits,
        )
    }

    /// Exact big-integer value.
    pub fn exact_bigint(value: BigInt, precision_bits: u32) -> Self {
        Self::exact(BigRational::from_integer(value), precision_bits)
    }

    /// Enclosure from explicit endpoints `lo <= hi`.
    pub fn from_endpoints(lo: BigRational, hi: BigRational, precision_bits: u32) -> Self {
        debug_assert!(lo <= hi);
        let two = BigRational::from_integer(BigInt::from(2));
        RigorousReal {
            midpoint: (&lo + &hi) / &two,
            radius: (&hi - &lo) / &two,
            precision_bits: precision_bits.max(MIN_PRECISION_BITS),
        }
    }

    pub fn midpoint(&self) -> &BigRational {
        &self.midpoint
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn lower(&self) -> BigRational {
        &self.midpoint - &self.radius
    }

    pub fn upper(&self) -> BigRational {
        &self.midpoint + &self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        self.lower() <= *value && *value <= self.upper()
    }

    pub fn overlaps(&self, other: &RigorousReal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// True if the whole enclosure is strictly positive.
    pub fn certainly_positive(&self) -> bool {
        self.lower().is_positive()
    }

    /// True if the whole enclosure is strictly negative.
    pub fn certainly_negative(&self) -> bool {
        self.upper().is_negative()
    }

    /// Decide the sign of `self - other` if the enclosures separate.
    pub fn try_cmp(&self, other: &RigorousReal) -> Option<Ordering> {
        if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if self.lower() > other.upper() {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Decimal rendering of the midpoint, for reports.
    pub fn to_decimal(&self, digits: usize) -> String {
        rational_to_decimal(&self.midpoint, digits)
    }

    fn rounded(self) -> Self {
        let prec = self.precision_bits;
        let (mid, err) = dyadic_nearest(&self.midpoint, prec + GUARD_BITS);
        let radius = dyadic_dir(&(self.radius + err), RADIUS_BITS, Dir::Up);
        RigorousReal {
            midpoint: mid,
            radius,
            precision_bits: prec,
        }
    }

    fn combine_prec(&self, other: &RigorousReal) -> u32 {
        self.precision_bits.min(other.precision_bits)
    }

    pub fn add(&self, other: &RigorousReal) -> RigorousReal {
        let out = RigorousReal {
            midpoint: &self.midpoint + &other.midpoint,
            radius: &self.radius + &other.radius,
            precision_bits: self.combine_prec(other),
        };
        if self.is_exact() && other.is_exact() {
            out
        } else {
            out.rounded()
        }
    }

    pub fn sub(&self, other: &RigorousReal) -> RigorousReal {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RigorousReal {
        RigorousReal {
            midpoint: -&self.midpoint,
            radius: self.radius.clone(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn abs(&self) -> RigorousReal {
        let lo = self.lower();
        let hi = self.upper();
        let prec = self.precision_bits;
        if !lo.is_negative() {
            self.clone()
        } else if !hi.is_positive() {
            self.neg()
        } else {
            let top = if -&lo > hi { -lo } else { hi };
            RigorousReal::from_endpoints(BigRational::zero(), top, prec)
        }
    }

    pub fn mul(&self, other: &RigorousReal) -> RigorousReal {
        // |xy - m1 m2| <= |m1| r2 + |m2| r1 + r1 r2
        let radius = self.midpoint.abs() * &other.radius
            + other.midpoint.abs() * &self.radius
            + &self.radius * &other.radius;
        let out = RigorousReal {
            midpoint: &self.midpoint * &other.midpoint,
            radius,
            precision_bits: self.combine_prec(other),
        };
        if self.is_exact() && other.is_exact() {
            out
        } else {
            out.rounded()
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> RigorousReal {
        self.mul(&RigorousReal::exact_bigint(k.clone(), self.precision_bits))
    }

    pub fn div(&self, other: &RigorousReal) -> Result<RigorousReal, RigorError> {
        let b_lo = other.lower();
        let b_hi = other.upper();
        if !(b_lo.is_positive() || b_hi.is_negative()) {
            return Err(RigorError::Domain(
                "division by an enclosure containing zero".into(),
            ));
        }
        let prec = self.combine_prec(other);
        if self.is_exact() && other.is_exact() {
            return Ok(RigorousReal::exact(&self.midpoint / &other.midpoint, prec));
        }
        let a_lo = self.lower();
        let a_hi = self.upper();
        let quots = [&a_lo / &b_lo, &a_lo / &b_hi, &a_hi / &b_lo, &a_hi / &b_hi];
        let mut lo = quots[0].clone();
        let mut hi = quots[0].clone();
        for q in &quots[1..] {
            if *q < lo {
                lo = q.clone();
            }
            if *q > hi {
                hi = q.clone();
            }
        }
        Ok(RigorousReal::from_endpoints(lo, hi, prec).rounded())
    }

    pub fn recip(&self) -> Result<RigorousReal, RigorError> {
        RigorousReal::exact_int(1, self.precision_bits).div(self)
    }

    /// Integer power by repeated squaring; negative exponents via reciprocal.
    pub fn pow_int(&self, k: i64) -> Result<RigorousReal, RigorError> {
        if k.unsigned_abs() > 1_000_000 {
            return Err(RigorError::Domain(format!(
                "exponent {k} exceeds the guard"
            )));
        }
        if k == 0 {
            return Ok(RigorousReal::exact_int(1, self.precision_bits));
        }
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        let mut acc = RigorousReal::exact_int(1, self.precision_bits);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        if k < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Natural logarithm; the enclosure must be strictly positive.
    pub fn log(&self) -> Result<RigorousReal, RigorError> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(RigorError::Domain(
                "log of an enclosure not strictly positive".into(),
            ));
        }
        let prec = self.precision_bits;
        let out_lo = log_point(&lo, prec, Dir::Down);
        let out_hi = log_point(&self.upper(), prec, Dir::Up);
        Ok(RigorousReal::from_endpoints(out_lo, out_hi, prec))
    }

    /// Exponential. Guarded to |x| <= 2^16 as a resource limit.
    pub fn exp(&self) -> Result<RigorousReal, RigorError> {
        let bound = BigRational::from_integer(BigInt::from(1u32 << 16));
        if self.upper().abs() > bound || self.lower().abs() > bound {
            return Err(RigorError::Domain("exp argument exceeds the guard".into()));
        }
        let prec = self.precision_bits;
        let out_lo = exp_point(&self.lower(), prec, Dir::Down);
        let out_hi = exp_point(&self.upper(), prec, Dir::Up);
        Ok(RigorousReal::from_endpoints(out_lo, out_hi, prec))
    }

    /// Square root; the enclosure must be nonnegative.
    pub fn sqrt(&self) -> Result<RigorousReal, RigorError> {
        if self.lower().is_negative() {
            return Err(RigorError::Domain("sqrt of a negative enclosure".into()));
        }
        let prec = self.precision_bits;
        let out_lo = sqrt_point(&self.lower(), prec, Dir::Down);
        let out_hi = sqrt_point(&self.upper(), prec, Dir::Up);
        Ok(RigorousReal::from_endpoints(out_lo, out_hi, prec))
    }
}

/// Render a rational in fixed-point decimal with the given fractional digits.
pub fn rational_to_decimal(x: &BigRational, digits: usize) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let a = x.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (a.numer() * &scale).div_floor(a.denom());
    let (int_part, frac_part) = scaled.div_rem(&scale);
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = digits
        )
    }
}

// === directed transcendental kernels ===
//
// Series run on a raw mantissa * 2^exp representation: plain BigRational
// arithmetic normalizes by gcd on every operation, which dominates the
// series cost by an order of magnitude.

#[derive(Clone, Debug)]
struct Dyadic {
    m: BigInt,
    e: i64,
}

fn shr_dir(m: &BigInt, shift: u64, dir: Dir) -> BigInt {
    let d = BigInt::one() << shift as usize;
    match dir {
        Dir::Down => m.div_floor(&d),
        Dir::Up => -(-m).div_floor(&d),
    }
}

impl Dyadic {
    fn zero() -> Self {
        Dyadic {
            m: BigInt::zero(),
            e: 0,
        }
    }

    fn one() -> Self {
        Dyadic {
            m: BigInt::one(),
            e: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Upper bound on log2 |value|; |value| < 2^(this).
    fn magnitude_bound(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN / 2
        } else {
            self.m.magnitude().bits() as i64 + self.e
        }
    }

    fn from_rational(x: &BigRational, prec: u32, dir: Dir) -> Self {
        if x.is_zero() {
            return Dyadic::zero();
        }
        let s = prec as i64 - magnitude(x);
        let (n, d) = if s >= 0 {
            (x.numer() << s as usize, x.denom().clone())
        } else {
            (x.numer().clone(), x.denom() << (-s) as usize)
        };
        let q = match dir {
            Dir::Down => n.div_floor(&d),
            Dir::Up => -(-n).div_floor(&d),
        };
        Dyadic { m: q, e: -s }
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.m.clone()) * pow2(self.e)
    }

    fn round(&self, prec: u32, dir: Dir) -> Self {
        let bits = self.m.magnitude().bits();
        if bits <= u64::from(prec) {
            return self.clone();
        }
        let shift = bits - u64::from(prec);
        Dyadic {
            m: shr_dir(&self.m, shift, dir),
            e: self.e + shift as i64,
        }
    }

    fn mul(&self, other: &Dyadic, prec: u32, dir: Dir) -> Self {
        Dyadic {
            m: &self.m * &other.m,
            e: self.e + other.e,
        }
        .round(prec, dir)
    }

    fn div_small(&self, d: u64, prec: u32, dir: Dir) -> Self {
        let shift = u64::from(prec) + 2;
        let scaled = &self.m << shift as usize;
        let q = match dir {
            Dir::Down => scaled.div_floor(&BigInt::from(d)),
            Dir::Up => -(-scaled).div_floor(&BigInt::from(d)),
        };
        Dyadic {
            m: q,
            e: self.e - shift as i64,
        }
    }

    /// Exact addition by aligning exponents.
    fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.e.min(other.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &other.m << (other.e - e) as usize;
        Dyadic { m: a + b, e }
    }
}

/// Directed bound for atanh(t), 0 <= t <= 17/50.
fn atanh_dir(t: &BigRational, prec: u32, dir: Dir) -> BigRational {
    debug_assert!(!t.is_negative());
    debug_assert!(*t <= BigRational::new(BigInt::from(17), BigInt::from(50)));
    if t.is_zero() {
        return BigRational::zero();
    }
    let work = prec + GUARD_BITS;
    let cutoff = -(work as i64 + 4);
    let t_d = Dyadic::from_rational(t, work, dir);
    let t2 = t_d.mul(&t_d, work, dir);
    let mut power = t_d.clone();
    let mut sum = Dyadic::zero();
    let mut k: u64 = 0;
    loop {
        let term = power.div_small(2 * k + 1, work, dir);
        sum = sum.add(&term);
        if term.magnitude_bound() < cutoff {
            // tail <= term * t^2 / (1 - t^2) <= 0.14 * term for t <= 0.34
            if dir == Dir::Up {
                sum = sum.add(&term);
            }
            break;
        }
        power = power.mul(&t2, work, dir);
        k += 1;
    }
    sum.to_rational()
}

/// Directed bound for ln 2 = 2 atanh(1/3), cached per precision.
fn log2_dir(prec: u32, dir: Dir) -> BigRational {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigRational, BigRational)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some((lo, hi)) = cache.lock().expect("log2 cache").get(&prec) {
        return match dir {
            Dir::Down => lo.clone(),
            Dir::Up => hi.clone(),
        };
    }
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let two = BigRational::from_integer(BigInt::from(2));
    let lo = atanh_dir(&third, prec, Dir::Down) * &two;
    let hi = atanh_dir(&third, prec, Dir::Up) * &two;
    let out = match dir {
        Dir::Down => lo.clone(),
        Dir::Up => hi.clone(),
    };
    cache.lock().expect("log2 cache").insert(prec, (lo, hi));
    out
}

/// Write x = m * 2^e with m in [3/4, 3/2).
fn range_reduce(x: &BigRational) -> (BigRational, i64) {
    debug_assert!(x.is_positive());
    let mut e = magnitude(x);
    let mut m = x * pow2(-e);
    let three_half = BigRational::new(BigInt::from(3), BigInt::from(2));
    let three_quarter = BigRational::new(BigInt::from(3), BigInt::from(4));
    while m >= three_half {
        m /= BigRational::from_integer(BigInt::from(2));
        e += 1;
    }
    while m < three_quarter {
        m *= BigRational::from_integer(BigInt::from(2));
        e -= 1;
    }
    (m, e)
}

/// Directed bound for ln x, x > 0 exact rational.
fn log_point(x: &BigRational, prec: u32, dir: Dir) -> BigRational {
    let (m, e) = range_reduce(x);
    // ln m = 2 atanh((m-1)/(m+1)), with (m-1)/(m+1) in [-1/7, 1/5]
    let one = BigRational::one();
    let t = (&m - &one) / (&m + &one);
    let two = BigRational::from_integer(BigInt::from(2));
    let ln_m = match t.cmp(&BigRational::zero()) {
        Ordering::Equal => BigRational::zero(),
        Ordering::Greater => atanh_dir(&t, prec, dir) * &two,
        Ordering::Less => -(atanh_dir(&(-&t), prec, dir.flip()) * &two),
    };
    if e == 0 {
        return ln_m;
    }
    let l2 = if e > 0 {
        log2_dir(prec, dir)
    } else {
        log2_dir(prec, dir.flip())
    };
    ln_m + BigRational::from_integer(BigInt::from(e)) * l2
}

/// Directed bound for exp x, |x| <= 2^16.
fn exp_point(x: &BigRational, prec: u32, dir: Dir) -> BigRational {
    if x.is_zero() {
        return BigRational::one();
    }
    if x.is_negative() {
        // exp(x) = 1 / exp(-x); reciprocal flips the direction
        let inv = exp_point(&(-x), prec + GUARD_BITS, dir.flip());
        return dyadic_div(&BigRational::one(), &inv, prec + GUARD_BITS, dir);
    }
    let work = prec + 2 * GUARD_BITS;
    // halve until y <= 1/2, then square back
    let mut halvings: u32 = 0;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut y = x.clone();
    while y > half {
        y /= BigRational::from_integer(BigInt::from(2));
        halvings += 1;
    }
    let yd = Dyadic::from_rational(&y, work, dir);
    let cutoff = -(work as i64 + 4);
    let mut term = Dyadic::one();
    let mut sum = Dyadic::one();
    let mut k: u64 = 0;
    loop {
        k += 1;
        term = term.mul(&yd, work, dir).div_small(k, work, dir);
        sum = sum.add(&term);
        if term.magnitude_bound() < cutoff {
            // tail <= term * y/(k+1) / (1 - y/(k+1)) <= term for y <= 1/2
            if dir == Dir::Up {
                sum = sum.add(&term);
            }
            break;
        }
    }
    for _ in 0..halvings {
        sum = sum.mul(&sum, work, dir);
    }
    sum.to_rational()
}

/// Directed rational division rounded to `prec` significant bits.
fn dyadic_div(a: &BigRational, b: &BigRational, prec: u32, dir: Dir) -> BigRational {
    dyadic_dir(&(a / b), prec, dir)
}

/// Directed bound for sqrt x, x >= 0 exact rational.
fn sqrt_point(x: &BigRational, prec: u32, dir: Dir) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let s = (prec as i64 + GUARD_BITS as i64 - magnitude(x) / 2).max(8);
    let scaled = (x.numer() << (2 * s) as usize).div_floor(x.denom());
    let root = scaled.sqrt();
    match dir {
        Dir::Down => BigRational::from_integer(root) * pow2(-s),
        Dir::Up => BigRational::from_integer(root + BigInt::one()) * pow2(-s),
    }
}

// === named constants ===

/// The fixed real constants of the problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    /// Golden ratio, the positive root of x^2 - x - 1.
    Alpha,
    /// Conjugate root of x^2 - x - 1, in (-1, 0).
    Beta,
    /// sqrt(5).
    Sqrt5,
    /// ln 2.
    Log2,
    /// ln(alpha).
    LogAlpha,
    /// ln(sqrt 5).
    LogSqrt5,
}

impl NamedConstant {
    pub fn all() -> [NamedConstant; 6] {
        [
            NamedConstant::Alpha,
            NamedConstant::Beta,
            NamedConstant::Sqrt5,
            NamedConstant::Log2,
            NamedConstant::LogAlpha,
            NamedConstant::LogSqrt5,
        ]
    }
}

impl fmt::Display for NamedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            NamedConstant::Alpha => "alpha",
            NamedConstant::Beta => "beta",
            NamedConstant::Sqrt5 => "sqrt5",
            NamedConstant::Log2 => "log2",
            NamedConstant::LogAlpha => "log_alpha",
            NamedConstant::LogSqrt5 => "log_sqrt5",
        };
        f.write_str(name)
    }
}

/// Evaluate a named constant at the requested precision.
///
/// The returned radius satisfies `radius <= 2^(1-p) * |midpoint|`.
pub fn eval_constant(tag: NamedConstant, precision_bits: u32) -> RigorousReal {
    let prec = precision_bits.max(MIN_PRECISION_BITS);
    match tag {
        NamedConstant::Sqrt5 => {
            let five = RigorousReal::exact_int(5, prec);
            five.sqrt().expect("sqrt of 5")
        }
        NamedConstant::Alpha => {
            let s = eval_constant(NamedConstant::Sqrt5, prec);
            let one = RigorousReal::exact_int(1, prec);
            let two = RigorousReal::exact_int(2, prec);
            one.add(&s).div(&two).expect("alpha")
        }
        NamedConstant::Beta => {
            let s = eval_constant(NamedConstant::Sqrt5, prec);
            let one = RigorousReal::exact_int(1, prec);
            let two = RigorousReal::exact_int(2, prec);
            one.sub(&s).div(&two).expect("beta")
        }
        NamedConstant::Log2 => {
            RigorousReal::from_endpoints(log2_dir(prec, Dir::Down), log2_dir(prec, Dir::Up), prec)
        }
        NamedConstant::LogAlpha => eval_constant(NamedConstant::Alpha, prec)
            .log()
            .expect("alpha > 0"),
        NamedConstant::LogSqrt5 => {
            // ln sqrt5 = (ln 5) / 2, evaluated on the exact integer 5
            let five = RigorousReal::exact_int(5, prec);
            let two = RigorousReal::exact_int(2, prec);
            five.log().expect("log 5").div(&two).expect("halving")
        }
    }
}

// === expression trees ===

/// A re-evaluable expression over named constants and rationals.
///
/// Comparisons escalate precision by re-running `eval`, so anything fed to
/// [`resolve_compare`] is kept in this form.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Constant(NamedConstant),
    Int(i64),
    Ratio(i64, i64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, i32),
    Log(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, precision_bits: u32) -> Result<RigorousReal, RigorError> {
        let prec = precision_bits.max(MIN_PRECISION_BITS);
        match self {
            Expr::Constant(tag) => Ok(eval_constant(*tag, prec)),
            Expr::Int(v) => Ok(RigorousReal::exact_int(*v, prec)),
            Expr::Ratio(p, q) => {
                if *q == 0 {
                    return Err(RigorError::Domain("zero denominator".into()));
                }
                Ok(RigorousReal::exact(
                    BigRational::new(BigInt::from(*p), BigInt::from(*q)),
                    prec,
                ))
            }
            Expr::Neg(a) => Ok(a.eval(prec)?.neg()),
            Expr::Add(a, b) => Ok(a.eval(prec)?.add(&b.eval(prec)?)),
            Expr::Sub(a, b) => Ok(a.eval(prec)?.sub(&b.eval(prec)?)),
            Expr::Mul(a, b) => Ok(a.eval(prec)?.mul(&b.eval(prec)?)),
            Expr::Div(a, b) => a.eval(prec)?.div(&b.eval(prec)?),
            Expr::PowInt(a, k) => a.eval(prec)?.pow_int(*k as i64),
            Expr::Log(a) => a.eval(prec)?.log(),
            Expr::Exp(a) => a.eval(prec)?.exp(),
            Expr::Sqrt(a) => a.eval(prec)?.sqrt(),
        }
    }
}

/// Outcome of a resolved comparison; exact ties are not representable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareOutcome {
    Less,
    Greater,
}

/// Compare two re-evaluable quantities, doubling precision until the
/// enclosures separate or `max_precision_bits` is exceeded.
pub fn resolve_compare_with<F, G>(
    mut lhs: F,
    mut rhs: G,
    max_precision_bits: u32,
) -> Result<CompareOutcome, RigorError>
where
    F: FnMut(u32) -> Result<RigorousReal, RigorError>,
    G: FnMut(u32) -> Result<RigorousReal, RigorError>,
{
    let mut prec = MIN_PRECISION_BITS.max(64);
    loop {
        let x = lhs(prec)?;
        let y = rhs(prec)?;
        match x.try_cmp(&y) {
            Some(Ordering::Less) => return Ok(CompareOutcome::Less),
            Some(Ordering::Greater) => return Ok(CompareOutcome::Greater),
            _ => {}
        }
        if prec >= max_precision_bits {
            return Err(RigorError::Undecidable { bits: prec });
        }
        prec = (prec * 2).min(max_precision_bits.max(prec + 1));
    }
}

/// Expression-level comparison resolver.
pub fn resolve_compare(
    x: &Expr,
    y: &Expr,
    max_precision_bits: u32,
) -> Result<CompareOutcome, RigorError> {
    resolve_compare_with(|p| x.eval(p), |p| y.eval(p), max_precision_bits)
}

/// Dispatcher mirroring the operation table of the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    PowInt(i64),
    Log,
    Exp,
}

pub fn arith(op: ArithOp, args: &[RigorousReal]) -> Result<RigorousReal, RigorError> {
    let need = |n: usize| -> Result<(), RigorError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(RigorError::Domain(format!(
                "operation expects {n} arguments, got {}",
                args.len()
            )))
        }
    };
    match op {
        ArithOp::Add => {
            need(2)?;
            Ok(args[0].add(&args[1]))
        }
        ArithOp::Sub => {
            need(2)?;
            Ok(args[0].sub(&args[1]))
        }
        ArithOp::Mul => {
            need(2)?;
            Ok(args[0].mul(&args[1]))
        }
        ArithOp::Div => {
            need(2)?;
            args[0].div(&args[1])
        }
        ArithOp::PowInt(k) => {
            need(1)?;
            args[0].pow_int(k)
        }
        ArithOp::Log => {
            need(1)?;
            args[0].log()
        }
        ArithOp::Exp => {
            need(1)?;
            args[0].exp()
        }
    }
}

/// Enclose the distance from `x` to the nearest integer.
///
/// Requires radius < 1/4. If the open interior of the enclosure straddles a
/// half-integer the distance cannot be pinned down and the caller must
/// escalate precision.
pub fn nearest_integer_distance(x: &RigorousReal) -> Result<RigorousReal, RigorError> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if x.radius() >= &quarter {
        return Err(RigorError::Precision {
            bits: x.precision_bits(),
        });
    }
    let lo = x.lower();
    let hi = x.upper();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    // half-integer strictly inside (lo, hi)?
    if !x.is_exact() {
        let k = (&hi - &half).floor();
        let cand = k + &half;
        if cand > lo && cand < hi {
            return Err(RigorError::Precision {
                bits: x.precision_bits(),
            });
        }
    }
    // all points now share one nearest integer cell
    let nearest = (x.midpoint() + &half).floor();
    let d_lo = (&lo - &nearest).abs();
    let d_hi = (&hi - &nearest).abs();
    let (mut out_lo, mut out_hi) = if d_lo <= d_hi {
        (d_lo, d_hi)
    } else {
        (d_hi, d_lo)
    };
    if lo <= nearest && nearest <= hi {
        out_lo = BigRational::zero();
    }
    if out_hi > half {
        out_hi = half; // distance never exceeds 1/2
    }
    Ok(RigorousReal::from_endpoints(
        out_lo,
        out_hi,
        x.precision_bits(),
    ))
}

/// Assertions shared by the test suites of the numeric modules.
#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn parse_decimal(s: &str) -> BigRational {
        let neg = s.starts_with('-');
        let body = s.trim_start_matches('-');
        let (int, frac) = match body.split_once('.') {
            Some((a, b)) => (a, b),
            None => (body, ""),
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let digits: BigInt = format!("{int}{frac}").parse().unwrap();
        let v = BigRational::new(digits, scale);
        if neg {
            -v
        } else {
            v
        }
    }

    /// The enclosure must agree with the printed decimal to one unit in its
    /// last digit (printed references are truncations of the true value).
    pub fn assert_close_decimal(x: &RigorousReal, s: &str) {
        let v = parse_decimal(s);
        let digits = s.split_once('.').map_or(0, |(_, f)| f.len());
        let ulp = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits as u32));
        let err = (x.midpoint() - &v).abs();
        assert!(
            err <= ulp && x.radius() <= &ulp,
            "enclosure [{}, {}] not within one ulp of {s}",
            x.lower(),
            x.upper()
        );
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::assert_close_decimal;
    use super::*;

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn alpha_satisfies_defining_polynomial() {
        let a = eval_constant(NamedConstant::Alpha, 64);
        let poly = a.mul(&a).sub(&a).sub(&RigorousReal::exact_int(1, 64));
        assert!(poly.contains(&BigRational::zero()));
        assert_close_decimal(&a, "1.6180339887");
    }

    #[test]
    fn constant_decimals() {
        assert_close_decimal(
            &eval_constant(NamedConstant::LogAlpha, 64),
            "0.4812118250596",
        );
        assert_close_decimal(
            &eval_constant(NamedConstant::Log2, 64),
            "0.6931471805599453",
        );
        assert_close_decimal(
            &eval_constant(NamedConstant::LogSqrt5, 64),
            "0.8047189562170502",
        );
        assert_close_decimal(&eval_constant(NamedConstant::Beta, 64), "-0.6180339887");
    }

    #[test]
    fn constant_radius_meets_contract() {
        for tag in NamedConstant::all() {
            for prec in [32, 64, 256, 1024] {
                let x = eval_constant(tag, prec);
                let bound = x.midpoint().abs() * pow2(1 - prec as i64);
                assert!(
                    x.radius() <= &bound,
                    "{tag} at {prec} bits: radius {} > {}",
                    x.radius(),
                    bound
                );
            }
        }
    }

    #[test]
    fn alpha_fourth_power_from_recurrence() {
        // alpha^2 = alpha + 1 so alpha^4 = 3 alpha + 2 = (7 + 3 sqrt5)/2
        let a = eval_constant(NamedConstant::Alpha, 128);
        let p4 = a.pow_int(4).unwrap();
        let expected = a
            .mul(&RigorousReal::exact_int(3, 128))
            .add(&RigorousReal::exact_int(2, 128));
        assert!(p4.overlaps(&expected));
        assert_close_decimal(&p4, "6.8541019662");

        // cross-check against exact coordinates in Q(sqrt5)
        let exact = crate::quadratic::QuadExt::alpha().pow(4).unwrap();
        assert_eq!(exact.a, ratio(7, 2));
        assert_eq!(exact.b, ratio(3, 2));
        let from_coords = RigorousReal::exact(exact.a, 128)
            .add(&RigorousReal::exact(exact.b, 128).mul(&eval_constant(NamedConstant::Sqrt5, 128)));
        assert!(p4.overlaps(&from_coords));
    }

    #[test]
    fn log_exp_inverse_pair() {
        let one = RigorousReal::exact_int(1, 128);
        let x = one.exp().unwrap().log().unwrap();
        assert!(x.contains(&BigRational::one()));
    }

    #[test]
    fn paper_style_quotient_lies_in_unit_window() {
        // 1/(1 - alpha^(-3)) must lie strictly inside (1, 3)
        let a = eval_constant(NamedConstant::Alpha, 128);
        let one = RigorousReal::exact_int(1, 128);
        let q = one.div(&one.sub(&a.pow_int(-3).unwrap())).unwrap();
        assert!(q.lower() > BigRational::one());
        assert!(q.upper() < BigRational::from_integer(BigInt::from(3)));
    }

    #[test]
    fn exact_rational_field_ops_stay_exact() {
        let a = RigorousReal::exact(ratio(3, 7), 64);
        let b = RigorousReal::exact(ratio(-2, 5), 64);
        assert!(a.add(&b).is_exact());
        assert!(a.sub(&b).is_exact());
        assert!(a.mul(&b).is_exact());
        assert!(a.div(&b).unwrap().is_exact());
        assert_eq!(a.mul(&b).midpoint(), &ratio(-6, 35));
    }

    #[test]
    fn division_by_zero_straddling_interval_fails() {
        let z = RigorousReal::from_endpoints(ratio(-1, 8), ratio(1, 8), 64);
        let one = RigorousReal::exact_int(1, 64);
        assert!(matches!(one.div(&z), Err(RigorError::Domain(_))));
    }

    #[test]
    fn log_of_nonpositive_fails() {
        let z = RigorousReal::exact_int(0, 64);
        assert!(matches!(z.log(), Err(RigorError::Domain(_))));
    }

    #[test]
    fn nearest_integer_distance_examples() {
        let three = RigorousReal::exact_int(3, 64);
        let d = nearest_integer_distance(&three).unwrap();
        assert!(d.contains(&BigRational::zero()));
        assert!(d.upper().is_zero());

        let half = RigorousReal::exact(ratio(1, 2), 64);
        let d = nearest_integer_distance(&half).unwrap();
        assert_eq!(d.midpoint(), &ratio(1, 2));
        assert!(d.is_exact());

        let x = RigorousReal::exact(ratio(27, 10), 64);
        let d = nearest_integer_distance(&x).unwrap();
        assert_eq!(d.midpoint(), &ratio(3, 10));
    }

    #[test]
    fn nearest_integer_distance_rejects_wide_and_straddling() {
        let wide = RigorousReal::from_endpoints(ratio(0, 1), ratio(3, 5), 64);
        assert!(matches!(
            nearest_integer_distance(&wide),
            Err(RigorError::Precision { .. })
        ));
        let straddle = RigorousReal::from_endpoints(ratio(24, 50), ratio(26, 50), 64);
        assert!(matches!(
            nearest_integer_distance(&straddle),
            Err(RigorError::Precision { .. })
        ));
    }

    #[test]
    fn resolve_compare_separates_and_detects_ties() {
        let a = Expr::Constant(NamedConstant::Alpha);
        let c = resolve_compare(&a, &Expr::Ratio(3, 2), 4096).unwrap();
        assert_eq!(c, CompareOutcome::Greater);

        // 4 / alpha^3 < 0.95
        let lhs = Expr::Div(
            Box::new(Expr::Int(4)),
            Box::new(Expr::PowInt(Box::new(a.clone()), 3)),
        );
        let c = resolve_compare(&lhs, &Expr::Ratio(95, 100), 4096).unwrap();
        assert_eq!(c, CompareOutcome::Less);

        let two = Expr::Int(2);
        assert!(matches!(
            resolve_compare(&two, &Expr::Int(2), 512),
            Err(RigorError::Undecidable { .. })
        ));
    }

    #[test]
    fn sqrt_five_squared_contains_five() {
        let s = eval_constant(NamedConstant::Sqrt5, 128);
        let sq = s.mul(&s);
        assert!(sq.contains(&BigRational::from_integer(BigInt::from(5))));
    }

    #[test]
    fn doubling_precision_shrinks_radius() {
        let e = Expr::Log(Box::new(Expr::Div(
            Box::new(Expr::Constant(NamedConstant::Sqrt5)),
            Box::new(Expr::Constant(NamedConstant::Alpha)),
        )));
        let x = e.eval(128).unwrap();
        let y = e.eval(256).unwrap();
        assert!(x.overlaps(&y));
        assert!(y.radius() < x.radius());
    }

    #[test]
    fn arith_dispatcher_matches_methods() {
        let a = eval_constant(NamedConstant::Alpha, 128);
        let b = RigorousReal::exact(ratio(3, 2), 128);
        assert_eq!(
            arith(ArithOp::Add, &[a.clone(), b.clone()]).unwrap(),
            a.add(&b)
        );
        assert_eq!(
            arith(ArithOp::Mul, &[a.clone(), b.clone()]).unwrap(),
            a.mul(&b)
        );
        assert_eq!(
            arith(ArithOp::PowInt(-3), &[a.clone()]).unwrap(),
            a.pow_int(-3).unwrap()
        );
        assert!(matches!(
            arith(ArithOp::Log, &[a.clone(), b.clone()]),
            Err(RigorError::Domain(_))
        ));
    }

    #[test]
    fn decimal_rendering() {
        let x = RigorousReal::exact(ratio(-22, 7), 64);
        assert_eq!(x.to_decimal(4), "-3.1428");
        let y = RigorousReal::exact_int(42, 64);
        assert_eq!(y.to_decimal(2), "42.00");
    }
}
