//! One-dimensional reduction of the absolute bound.
//!
//! For a convergent denominator q of gamma with q > 6M and
//! epsilon := ||mu q|| - M ||gamma q|| > 0, the inequality
//! 0 < |u gamma - v + mu| < A B^(-w) has no solution with u <= M and
//! w >= log(A q / epsilon) / log B. Each admissible (shift, convergent)
//! pair is an independent application, so the batch driver picks, per
//! shift, the convergent that certifies the smallest exponent bound.
//!
//! Shifts whose mu collapses into Z + Z gamma make epsilon nonpositive at
//! every convergent. They are detected numerically and confirmed exactly in
//! Q(sqrt 5): for an even shift 2k, sqrt5 (1 - alpha^(-2k))^(-1) =
//! alpha^k / F(k), so the collapse happens precisely when F(k) is a power
//! of two. These shifts are routed to the residual case analysis.

use std::fmt;
use std::ops::RangeInclusive;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed};

use crate::contfrac::{expand, CfError, CfTarget, MAX_QUOTIENTS};
use crate::quadratic::QuadExt;
use crate::rigor::{
    eval_constant, nearest_integer_distance, NamedConstant, RigorError, RigorousReal,
    MAX_PRECISION_BITS,
};
use crate::search::power_of_two_exponent;
use crate::sequences::fib;

/// How many consecutive convergents a single reduction will try.
pub const RETRY_CONVERGENTS: usize = 5;
/// Convergent window scanned per shift by the batch driver.
pub const BATCH_WINDOW: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum ReductionError {
    /// Epsilon stayed nonpositive (or undecidable) at every attempted
    /// convergent; carries the diagnosis.
    Degenerate {
        shift: Option<u32>,
        diagnosis: String,
    },
    /// Parameters outside the regime the linearization is certified for.
    Regime(String),
    /// Invalid problem data (A <= 0, M < 1, shift range out of bounds).
    Invalid(String),
    Rigor(RigorError),
    Cf(CfError),
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::Degenerate { shift, diagnosis } => match shift {
                Some(s) => write!(f, "degenerate shift {s}: {diagnosis}"),
                None => write!(f, "degenerate reduction: {diagnosis}"),
            },
            ReductionError::Regime(msg) => write!(f, "outside certified regime: {msg}"),
            ReductionError::Invalid(msg) => write!(f, "invalid reduction problem: {msg}"),
            ReductionError::Rigor(e) => write!(f, "{e}"),
            ReductionError::Cf(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ReductionError {}

impl From<RigorError> for ReductionError {
    fn from(e: RigorError) -> Self {
        ReductionError::Rigor(e)
    }
}

impl From<CfError> for ReductionError {
    fn from(e: CfError) -> Self {
        ReductionError::Cf(e)
    }
}

/// The inhomogeneous part of the reduced form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuTag {
    /// log sqrt5 / log alpha.
    Homogeneous,
    /// log(sqrt5 (1 - alpha^(-shift))^(-1)) / log alpha.
    Shifted(u32),
}

impl MuTag {
    fn shift(&self) -> Option<u32> {
        match self {
            MuTag::Homogeneous => None,
            MuTag::Shifted(s) => Some(*s),
        }
    }

    pub fn enclosure(&self, precision_bits: u32) -> Result<RigorousReal, RigorError> {
        let log_alpha = eval_constant(NamedConstant::LogAlpha, precision_bits);
        match self {
            MuTag::Homogeneous => {
                eval_constant(NamedConstant::LogSqrt5, precision_bits).div(&log_alpha)
            }
            MuTag::Shifted(shift) => {
                let alpha = eval_constant(NamedConstant::Alpha, precision_bits);
                let sqrt5 = eval_constant(NamedConstant::Sqrt5, precision_bits);
                let one = RigorousReal::exact_int(1, precision_bits);
                let value = sqrt5.div(&one.sub(&alpha.pow_int(-(i64::from(*shift)))?))?;
                value.log()?.div(&log_alpha)
            }
        }
    }
}

impl fmt::Display for MuTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuTag::Homogeneous => write!(f, "log(sqrt5)/log(alpha)"),
            MuTag::Shifted(s) => write!(f, "log(sqrt5/(1-alpha^-{s}))/log(alpha)"),
        }
    }
}

/// One application of the reduction lemma. B is fixed to alpha.
#[derive(Clone, Debug)]
pub struct ReductionProblem {
    pub mu: MuTag,
    /// Upper bound M on the integer variable u (here u = a < n <= M).
    pub big_m: BigInt,
    /// Amplitude A of the reduced inequality.
    pub amplitude: BigRational,
    pub precision_bits: u32,
}

impl ReductionProblem {
    pub fn validate(&self) -> Result<(), ReductionError> {
        if !self.amplitude.is_positive() {
            return Err(ReductionError::Invalid(
                "amplitude A must be positive".into(),
            ));
        }
        if self.big_m < BigInt::one() {
            return Err(ReductionError::Invalid(
                "M must be a positive integer".into(),
            ));
        }
        Ok(())
    }
}

/// Result of one reduction; `degenerate` results claim no bound.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub q_index: usize,
    pub q: BigInt,
    /// Enclosure of ||mu q|| - M ||gamma q|| at the reported convergent.
    pub epsilon: RigorousReal,
    /// log(A q / epsilon)/log(alpha), upper end certified, when not degenerate.
    pub threshold: Option<RigorousReal>,
    /// Largest w not excluded, when not degenerate.
    pub w_bound: Option<BigInt>,
    pub degenerate: bool,
}

/// Sign of an epsilon evaluation once the enclosure separates from zero.
enum EpsilonSign {
    Positive(RigorousReal),
    NonPositive(RigorousReal),
    Undecided,
}

/// epsilon = ||mu q|| - M ||gamma q|| from already-evaluated gamma and mu.
fn epsilon_with_parts(
    gamma: &RigorousReal,
    mu_enc: &RigorousReal,
    big_m: &BigInt,
    q: &BigInt,
) -> Result<RigorousReal, RigorError> {
    let d_mu = nearest_integer_distance(&mu_enc.mul_int(q))?;
    let d_gamma = nearest_integer_distance(&gamma.mul_int(q))?;
    Ok(d_mu.sub(&d_gamma.mul_int(big_m)))
}

fn classify(eps: &RigorousReal) -> Option<bool> {
    if eps.certainly_positive() {
        Some(true)
    } else if !eps.upper().is_positive() {
        Some(false)
    } else {
        None
    }
}

/// Evaluate epsilon at escalating precision until its sign is certified
/// (or the ceiling is reached).
fn epsilon_signed(
    mu: MuTag,
    big_m: &BigInt,
    q: &BigInt,
    start_precision: u32,
) -> Result<EpsilonSign, ReductionError> {
    let mut prec = start_precision;
    loop {
        let attempt = (|| -> Result<RigorousReal, RigorError> {
            let gamma = CfTarget::Log2OverLogAlpha.enclosure(prec)?;
            let mu_enc = mu.enclosure(prec)?;
            epsilon_with_parts(&gamma, &mu_enc, big_m, q)
        })();
        match attempt {
            Ok(eps) => match classify(&eps) {
                Some(true) => return Ok(EpsilonSign::Positive(eps)),
                Some(false) => return Ok(EpsilonSign::NonPositive(eps)),
                None => {}
            },
            Err(RigorError::Precision { .. }) => {}
            Err(e) => return Err(e.into()),
        }
        if prec >= MAX_PRECISION_BITS {
            return Ok(EpsilonSign::Undecided);
        }
        prec = (prec * 2).min(MAX_PRECISION_BITS);
    }
}

/// Enclosure of epsilon for a given convergent, certified to have a sign.
///
/// The numeric value is meaningful for any q; the reduction lemma itself is
/// only invoked by [`reduce`]/[`batch_reduce`], which insist on q > 6M.
pub fn epsilon(problem: &ReductionProblem, q: &BigInt) -> Result<RigorousReal, ReductionError> {
    problem.validate()?;
    match epsilon_signed(problem.mu, &problem.big_m, q, problem.precision_bits)? {
        EpsilonSign::Positive(e) | EpsilonSign::NonPositive(e) => Ok(e),
        EpsilonSign::Undecided => Err(ReductionError::Degenerate {
            shift: problem.mu.shift(),
            diagnosis: format!(
                "epsilon for {} cannot be separated from zero below {MAX_PRECISION_BITS} bits",
                problem.mu
            ),
        }),
    }
}

/// Certified threshold log(A q / eps) / log alpha and the induced w bound.
fn threshold_and_bound(
    amplitude: &BigRational,
    q: &BigInt,
    eps: &RigorousReal,
    precision_bits: u32,
) -> Result<(RigorousReal, BigInt), ReductionError> {
    let aq = RigorousReal::exact(
        amplitude * BigRational::from_integer(q.clone()),
        precision_bits,
    );
    let ratio = aq.div(eps)?;
    let threshold = ratio
        .log()?
        .div(&eval_constant(NamedConstant::LogAlpha, precision_bits))?;
    let w_bound = threshold.upper().ceil().to_integer() - BigInt::one();
    Ok((threshold, w_bound))
}

/// Apply the lemma with the first convergent exceeding 6M, advancing to the
/// next convergent (at most [`RETRY_CONVERGENTS`] attempts) while epsilon is
/// not certifiably positive.
pub fn reduce(problem: &ReductionProblem) -> Result<ReductionResult, ReductionError> {
    problem.validate()?;
    let cf = expand(CfTarget::Log2OverLogAlpha, 80)?;
    let six_m = &problem.big_m * BigInt::from(6);
    let (k0, _) = cf.first_q_exceeding(&six_m)?;
    let cf = expand(
        CfTarget::Log2OverLogAlpha,
        (k0 + RETRY_CONVERGENTS + 2).min(MAX_QUOTIENTS),
    )?;
    if cf.convergents.len() < k0 + RETRY_CONVERGENTS {
        return Err(ReductionError::Invalid(format!(
            "M so large that the retry window passes the {MAX_QUOTIENTS}-quotient cap"
        )));
    }
    let mut last: Option<RigorousReal> = None;
    for k in k0..k0 + RETRY_CONVERGENTS {
        let q = &cf.convergents[k].1;
        match epsilon_signed(problem.mu, &problem.big_m, q, problem.precision_bits)? {
            EpsilonSign::Positive(eps) => {
                let (threshold, w_bound) =
                    threshold_and_bound(&problem.amplitude, q, &eps, problem.precision_bits)?;
                return Ok(ReductionResult {
                    q_index: k,
                    q: q.clone(),
                    epsilon: eps,
                    threshold: Some(threshold),
                    w_bound: Some(w_bound),
                    degenerate: false,
                });
            }
            EpsilonSign::NonPositive(eps) => last = Some(eps),
            EpsilonSign::Undecided => {}
        }
    }
    let exact_note = problem
        .mu
        .shift()
        .and_then(confirm_degenerate_shift)
        .unwrap_or_else(|| "no exact witness found".into());
    Err(ReductionError::Degenerate {
        shift: problem.mu.shift(),
        diagnosis: format!(
            "epsilon not certifiably positive at convergents {}..{} past q > 6M (last enclosure upper {}); {exact_note}",
            k0,
            k0 + RETRY_CONVERGENTS - 1,
            last.map_or_else(|| "n/a".into(), |e| e.to_decimal(8)),
        ),
    })
}

/// Exact confirmation that a shift collapses into Z + Z gamma.
///
/// For shift 2k, sqrt5 (1 - alpha^(-2k))^(-1) = alpha^k / F(k) in Q(sqrt5)
/// (from alpha^(2k) - 1 = sqrt5 F(k) alpha^k), so mu = k - j gamma exactly
/// when F(k) = 2^j.
pub fn confirm_degenerate_shift(shift: u32) -> Option<String> {
    if shift % 2 != 0 {
        return None;
    }
    let k = i64::from(shift / 2);
    let f_k = fib(k).ok()?;
    let j = power_of_two_exponent(&f_k)?;
    let alpha = QuadExt::alpha();
    let one = QuadExt::from_int(1);
    let inv = (&one - &alpha.pow(-i64::from(shift))?).inverse()?;
    let lhs = &QuadExt::sqrt5() * &inv;
    let rhs = (&alpha.pow(k)? / &QuadExt::from_bigint(f_k.clone()))?;
    if lhs != rhs {
        return None;
    }
    Some(format!(
        "exact witness: sqrt5/(1-alpha^-{shift}) = alpha^{k}/F({k}) with F({k}) = 2^{j}, so mu = {k} - {j}*gamma"
    ))
}

/// Common data of a batch: per-shift problems differ only in mu.
#[derive(Clone, Debug)]
pub struct BatchTemplate {
    pub big_m: BigInt,
    pub amplitude: BigRational,
    pub precision_bits: u32,
}

/// Outcome of a batch reduction over a shift range.
#[derive(Clone, Debug)]
pub struct BatchReduction {
    /// One result per shift, in range order.
    pub results: Vec<(u32, ReductionResult)>,
    /// Shifts with no certifiably positive epsilon in the whole window,
    /// together with their diagnosis.
    pub degenerate_shifts: Vec<(u32, String)>,
    /// max w_bound over the nondegenerate shifts.
    pub aggregate_w_bound: Option<BigInt>,
    /// min epsilon lower endpoint over the chosen convergents.
    pub min_epsilon: Option<BigRational>,
}

/// Reduce every shift in the range, choosing per shift the convergent
/// (among the first [`BATCH_WINDOW`] past q > 6M) that certifies the
/// smallest exponent bound. Degeneracies are data, not failures.
pub fn batch_reduce(
    shifts: RangeInclusive<u32>,
    template: &BatchTemplate,
) -> Result<BatchReduction, ReductionError> {
    if *shifts.start() < 1 || *shifts.end() > 10_000 {
        return Err(ReductionError::Invalid(
            "shift range must lie within [1, 10000]".into(),
        ));
    }
    let six_m = &template.big_m * BigInt::from(6);
    let cf = expand(CfTarget::Log2OverLogAlpha, 80)?;
    let (k0, _) = cf.first_q_exceeding(&six_m)?;
    let cf = expand(
        CfTarget::Log2OverLogAlpha,
        (k0 + BATCH_WINDOW + 2).min(MAX_QUOTIENTS),
    )?;
    if cf.convergents.len() < k0 + BATCH_WINDOW {
        return Err(ReductionError::Invalid(format!(
            "M so large that the scan window passes the {MAX_QUOTIENTS}-quotient cap"
        )));
    }
    let prec = template.precision_bits;
    let gamma = CfTarget::Log2OverLogAlpha.enclosure(prec)?;
    let mut results = Vec::new();
    let mut degenerate = Vec::new();
    let mut aggregate: Option<BigInt> = None;
    let mut min_eps: Option<BigRational> = None;
    for shift in shifts {
        let mu = MuTag::Shifted(shift);
        let mu_enc = mu.enclosure(prec)?;
        // best candidate by smallest q / eps_lower, i.e. smallest threshold
        let mut best: Option<(usize, RigorousReal, BigRational)> = None;
        let mut positives = 0usize;
        for k in k0..k0 + BATCH_WINDOW {
            let q = &cf.convergents[k].1;
            let eps = match epsilon_with_parts(&gamma, &mu_enc, &template.big_m, q) {
                Ok(e) => e,
                Err(RigorError::Precision { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            if classify(&eps) == Some(true) {
                positives += 1;
                let key = BigRational::from_integer(q.clone()) / eps.lower();
                let replace = match &best {
                    None => true,
                    Some((_, _, existing)) => key < *existing,
                };
                if replace {
                    best = Some((k, eps, key));
                }
            }
        }
        if positives == 0 {
            // no positive epsilon at the working precision: classify the
            // shift rigorously, escalating pair by pair
            let mut last_nonpositive: Option<RigorousReal> = None;
            for k in k0..k0 + BATCH_WINDOW {
                let q = &cf.convergents[k].1;
                match epsilon_signed(mu, &template.big_m, q, prec)? {
                    EpsilonSign::Positive(eps) => {
                        let key = BigRational::from_integer(q.clone()) / eps.lower();
                        best = Some((k, eps, key));
                        break;
                    }
                    EpsilonSign::NonPositive(eps) => last_nonpositive = Some(eps),
                    EpsilonSign::Undecided => {}
                }
            }
            if best.is_none() {
                let exact_note = confirm_degenerate_shift(shift)
                    .unwrap_or_else(|| "no exact witness found".into());
                let diagnosis = format!(
                    "epsilon nonpositive across convergents {}..{} (last upper {}); {exact_note}",
                    k0,
                    k0 + BATCH_WINDOW - 1,
                    last_nonpositive
                        .as_ref()
                        .map_or_else(|| "n/a".into(), |e| e.to_decimal(8)),
                );
                // fallback enclosure: q > 6M forces M ||gamma q|| < 1/6, so
                // epsilon always lies in [-1/2, 1/2]
                let fallback = RigorousReal::from_endpoints(
                    BigRational::new(BigInt::from(-1), BigInt::from(2)),
                    BigRational::new(BigInt::one(), BigInt::from(2)),
                    prec,
                );
                let placeholder = ReductionResult {
                    q_index: k0,
                    q: cf.convergents[k0].1.clone(),
                    epsilon: last_nonpositive.unwrap_or(fallback),
                    threshold: None,
                    w_bound: None,
                    degenerate: true,
                };
                degenerate.push((shift, diagnosis));
                results.push((shift, placeholder));
                continue;
            }
        }
        let (k, eps, _) = best.expect("positive candidate chosen");
        let q = &cf.convergents[k].1;
        let (threshold, w_bound) = threshold_and_bound(&template.amplitude, q, &eps, prec)?;
        aggregate = Some(match aggregate {
            Some(current) => current.max(w_bound.clone()),
            None => w_bound.clone(),
        });
        let eps_lo = eps.lower();
        min_eps = Some(match min_eps {
            Some(current) => current.min(eps_lo),
            None => eps_lo,
        });
        results.push((
            shift,
            ReductionResult {
                q_index: k,
                q: q.clone(),
                epsilon: eps,
                threshold: Some(threshold),
                w_bound: Some(w_bound),
                degenerate: false,
            },
        ));
    }
    Ok(BatchReduction {
        results,
        degenerate_shifts: degenerate,
        aggregate_w_bound: aggregate,
        min_epsilon: min_eps,
    })
}

/// Which linearized form of the two linear forms is being reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// z1 = a log2 - n log alpha + log sqrt5, controlling w = n - m.
    Z1,
    /// z2 = a log2 - n log alpha + log(sqrt5 (1-alpha^(m-n))^(-1)),
    /// controlling w = n.
    Z2,
}

/// The exponent the reduced inequality bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentRole {
    /// w = n - m.
    Shift,
    /// w = n.
    Full,
}

/// The (A, B, w) data of a reduced form; B is always alpha.
#[derive(Clone, Debug)]
pub struct LinearizedForm {
    pub which: FormKind,
    pub amplitude: BigRational,
    pub exponent_role: ExponentRole,
}

/// Certify the amplification steps and emit the reduced-form amplitude.
///
/// z1: |1 - e^z1| < 4/alpha^(n-m) with z1 < 0 and 4/alpha^3 < 0.95 give
/// e^|z1| <= 1/(1 - 4/alpha^3) < 20, so |z1|/log alpha < 80/log alpha
/// < 167 times alpha^(-(n-m)).
/// z2: |1 - e^z2| < 3/alpha^n < 1/2 gives e^|z2| < 2, so
/// |z2|/log alpha < 6/log alpha < 13 times alpha^(-n).
pub fn linearize(
    which: FormKind,
    n_floor: u64,
    min_shift: u32,
    precision_bits: u32,
) -> Result<LinearizedForm, ReductionError> {
    if n_floor < 201 || min_shift < 3 {
        return Err(ReductionError::Regime(format!(
            "certified only for n > 200 and n - m >= 3, got n_floor {n_floor}, min shift {min_shift}"
        )));
    }
    let prec = precision_bits;
    let alpha = eval_constant(NamedConstant::Alpha, prec);
    let log_alpha = eval_constant(NamedConstant::LogAlpha, prec);
    let one = RigorousReal::exact_int(1, prec);
    match which {
        FormKind::Z1 => {
            // 4/alpha^min_shift <= 4/alpha^3 < 19/20
            let decay =
                RigorousReal::exact_int(4, prec).div(&alpha.pow_int(i64::from(min_shift))?)?;
            let cap =
                RigorousReal::exact(BigRational::new(BigInt::from(19), BigInt::from(20)), prec);
            if decay.try_cmp(&cap) != Some(std::cmp::Ordering::Less) {
                return Err(ReductionError::Regime(
                    "could not certify 4/alpha^shift < 0.95".into(),
                ));
            }
            // amplification e^|z1| <= 1/(1 - 4/alpha^3) < 20
            let amp = one.div(&one.sub(&decay))?;
            let twenty = RigorousReal::exact_int(20, prec);
            if amp.try_cmp(&twenty) != Some(std::cmp::Ordering::Less) {
                return Err(ReductionError::Regime(
                    "could not certify the amplification factor below 20".into(),
                ));
            }
            // 80 / log alpha < 167
            let amplitude_true = RigorousReal::exact_int(80, prec).div(&log_alpha)?;
            let amplitude = BigRational::from_integer(BigInt::from(167));
            let a_real = RigorousReal::exact(amplitude.clone(), prec);
            if amplitude_true.try_cmp(&a_real) != Some(std::cmp::Ordering::Less) {
                return Err(ReductionError::Regime(
                    "could not certify 80/log alpha < 167".into(),
                ));
            }
            Ok(LinearizedForm {
                which,
                amplitude,
                exponent_role: ExponentRole::Shift,
            })
        }
        FormKind::Z2 => {
            // 3/alpha^n_floor < 1/2
            let n_floor_i64 = i64::try_from(n_floor)
                .map_err(|_| ReductionError::Invalid("n_floor exceeds supported range".into()))?;
            let decay = RigorousReal::exact_int(3, prec).div(&alpha.pow_int(n_floor_i64)?)?;
            let half = RigorousReal::exact(BigRational::new(BigInt::one(), BigInt::from(2)), prec);
            if decay.try_cmp(&half) != Some(std::cmp::Ordering::Less) {
                return Err(ReductionError::Regime(
                    "could not certify 3/alpha^n < 1/2".into(),
                ));
            }
            // e^|z2| < 2 follows; 6 / log alpha < 13
            let amplitude_true = RigorousReal::exact_int(6, prec).div(&log_alpha)?;
            let amplitude = BigRational::from_integer(BigInt::from(13));
            let a_real = RigorousReal::exact(amplitude.clone(), prec);
            if amplitude_true.try_cmp(&a_real) != Some(std::cmp::Ordering::Less) {
                return Err(ReductionError::Regime(
                    "could not certify 6/log alpha < 13".into(),
                ));
            }
            Ok(LinearizedForm {
                which,
                amplitude,
                exponent_role: ExponentRole::Full,
            })
        }
    }
}
