//! Exhaustive verification of F(n) - F(m) = 2^a below a cutoff.
//!
//! The search doubles as the independent oracle for the rest of the pipeline:
//! the certified bounds must shrink the problem into a range this module can
//! enumerate.

use num::bigint::BigInt;
use num::traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::sequences::fib;

/// A solution (n, m, a) of F(n) - F(m) = 2^a with m < n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolutionTriple {
    pub n: u64,
    pub m: u64,
    pub a: u64,
}

impl SolutionTriple {
    pub fn new(n: u64, m: u64, a: u64) -> Self {
        SolutionTriple { n, m, a }
    }
}

impl std::fmt::Display for SolutionTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(n={}, m={}, a={})", self.n, self.m, self.a)
    }
}

/// If `d` is a positive power of two, return its exponent.
///
/// Exact integer bit test; no floating point is involved.
pub fn power_of_two_exponent(d: &BigInt) -> Option<u32> {
    if !d.is_positive() {
        return None;
    }
    let mag = d.magnitude();
    let tz = mag.trailing_zeros().expect("positive value");
    if mag.bits() == tz + 1 {
        Some(u32::try_from(tz).expect("exponent fits u32"))
    } else {
        None
    }
}

/// All solutions with 0 <= m < n <= n_max, sorted by (n, m).
pub fn brute_force(n_max: u64) -> Vec<SolutionTriple> {
    // iterative Fibonacci table keeps this linear in n_max^2 big-int subtractions
    let mut fibs: Vec<BigInt> = Vec::with_capacity(n_max as usize + 1);
    fibs.push(BigInt::zero());
    fibs.push(BigInt::from(1));
    for k in 2..=n_max as usize {
        let next = &fibs[k - 1] + &fibs[k - 2];
        fibs.push(next);
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        for m in 0..n {
            let d = &fibs[n as usize] - &fibs[m as usize];
            if let Some(a) = power_of_two_exponent(&d) {
                out.push(SolutionTriple::new(n, m, u64::from(a)));
            }
        }
    }
    out
}

/// Check the defining equation of a triple exactly.
pub fn is_solution(t: &SolutionTriple) -> bool {
    if t.m >= t.n {
        return false;
    }
    let (Ok(fn_), Ok(fm)) = (fib(t.n as i64), fib(t.m as i64)) else {
        return false;
    };
    let d = fn_ - fm;
    power_of_two_exponent(&d) == Some(t.a as u32)
}

/// The sixteen solutions below 200, frozen for cross-checks.
pub fn known_solutions() -> Vec<SolutionTriple> {
    let raw = [
        (1, 0, 0),
        (2, 0, 0),
        (3, 0, 1),
        (3, 1, 0),
        (3, 2, 0),
        (4, 1, 1),
        (4, 2, 1),
        (4, 3, 0),
        (5, 1, 2),
        (5, 2, 2),
        (5, 4, 1),
        (6, 0, 3),
        (7, 5, 3),
        (8, 5, 4),
        (8, 7, 3),
        (9, 3, 5),
    ];
    raw.iter()
        .map(|&(n, m, a)| SolutionTriple::new(n, m, a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_cutoffs() {
        assert_eq!(
            brute_force(2),
            vec![SolutionTriple::new(1, 0, 0), SolutionTriple::new(2, 0, 0)]
        );
        assert_eq!(
            brute_force(3),
            vec![
                SolutionTriple::new(1, 0, 0),
                SolutionTriple::new(2, 0, 0),
                SolutionTriple::new(3, 0, 1),
                SolutionTriple::new(3, 1, 0),
                SolutionTriple::new(3, 2, 0),
            ]
        );
    }

    #[test]
    fn full_search_matches_known_list() {
        assert_eq!(brute_force(200), known_solutions());
    }

    #[test]
    fn is_solution_examples() {
        assert!(is_solution(&SolutionTriple::new(6, 0, 3)));
        assert!(is_solution(&SolutionTriple::new(7, 5, 3)));
        assert!(!is_solution(&SolutionTriple::new(6, 1, 3)));
        assert!(!is_solution(&SolutionTriple::new(3, 3, 0)));
    }

    #[test]
    fn power_of_two_detection() {
        assert_eq!(power_of_two_exponent(&BigInt::from(1)), Some(0));
        assert_eq!(power_of_two_exponent(&BigInt::from(32)), Some(5));
        assert_eq!(power_of_two_exponent(&BigInt::from(0)), None);
        assert_eq!(power_of_two_exponent(&BigInt::from(-8)), None);
        assert_eq!(power_of_two_exponent(&BigInt::from(48)), None);
    }

    #[test]
    fn output_sorted_and_duplicate_free() {
        let sols = brute_force(120);
        let mut sorted = sols.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sols, sorted);
    }
}
