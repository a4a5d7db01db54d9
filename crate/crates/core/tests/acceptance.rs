//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and pinning its tolerances in code.
//!
//! Two checks are currently expected to fail; they pin reference data for
//! the reduction step that the library's certified arithmetic shows to be
//! unattainable (see the failure messages for the measured values):
//!   - criterion 5 expects a convergent denominator above 6 * 2.91e28 at an
//!     index in [63, 65]; the certified expansion reaches that size first at
//!     index 66.
//!   - criterion 7 expects the batch minimum of epsilon to reach 0.49; the
//!     certified per-shift minimum over [3, 146] is about 0.0227 (the 0.499
//!     figure is reproduced exactly, but as the value of shift 15 alone at
//!     the convergent of index 43, not as the minimum over all shifts).

use std::process::Command;
use std::time::Instant;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use fibpow2::cases::{all_residual_cases, cross_check_against_search};
use fibpow2::contfrac::{expand, CfTarget};
use fibpow2::heights::{height, AlgebraicDescriptor};
use fibpow2::matveev::{absolute_bound, shift_bound_inequality, ShiftForm};
use fibpow2::quadratic::QuadExt;
use fibpow2::reduction::{batch_reduce, epsilon, BatchTemplate, MuTag, ReductionProblem};
use fibpow2::rigor::{eval_constant, Expr, NamedConstant, RigorousReal};
use fibpow2::search::{brute_force, SolutionTriple};
use fibpow2::sequences::{binet_residual, difference_factorization, fib, lucas};

fn rat(s: &str) -> BigRational {
    s.parse().expect("rational literal")
}

fn int(s: &str) -> BigInt {
    s.parse().expect("integer literal")
}

fn decimal(s: &str) -> BigRational {
    let neg = s.starts_with('-');
    let body = s.trim_start_matches('-');
    let (i, f) = body.split_once('.').unwrap_or((body, ""));
    let scale = BigInt::from(10u32).pow(f.len() as u32);
    let v = BigRational::new(format!("{i}{f}").parse().unwrap(), scale);
    if neg {
        -v
    } else {
        v
    }
}

#[test]
fn criterion_01_solution_set() {
    let started = Instant::now();
    let found = brute_force(200);
    let elapsed = started.elapsed();

    let expected: Vec<SolutionTriple> = [
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
    ]
    .iter()
    .map(|&(n, m, a)| SolutionTriple::new(n, m, a))
    .collect();

    assert_eq!(
        found, expected,
        "search below 200 must list exactly 16 triples"
    );
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "search took {elapsed:?}, budget is 1 s"
    );

    // the same list through the CLI surface
    let out = Command::new(env!("CARGO_BIN_EXE_fibpow2"))
        .args(["search", "--nmax", "200"])
        .output()
        .expect("search subcommand runs");
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("16 solutions"), "stdout: {stdout}");
    assert!(stdout.contains("(n=9, m=3, a=5)"));

    println!("criterion 01 (solution set): PASS — 16 triples in {elapsed:?}");
}

#[test]
fn criterion_02_heights() {
    let tol = decimal("0.0001");
    let checks = [
        (AlgebraicDescriptor::rational(2, 1), "0.6931"),
        (AlgebraicDescriptor::Named(NamedConstant::Alpha), "0.2406"),
        (AlgebraicDescriptor::Named(NamedConstant::Sqrt5), "0.8047"),
    ];
    for (descriptor, target) in checks {
        let h = height(&descriptor, 256).expect("height computable");
        let t = decimal(target);
        assert!(
            h.lower() >= &t - &tol && h.upper() <= &t + &tol,
            "height enclosure [{}, {}] not within 1e-4 of {target}",
            h.lower(),
            h.upper()
        );
    }
    println!("criterion 02 (heights): PASS — all three within 1e-4");
}

#[test]
fn criterion_03_shift_inequality() {
    let report = shift_bound_inequality(256).expect("certified coefficient");
    let ceiling = rat("2400000000000");
    assert!(
        report.constant.upper() <= ceiling,
        "certified coefficient {} exceeds 2.4e12",
        report.constant.to_decimal(2)
    );
    println!(
        "criterion 03 (shift inequality): PASS — certified coefficient {} <= 2.4e12",
        report.constant.to_decimal(2)
    );
}

#[test]
fn criterion_04_absolute_bounds() {
    let started = Instant::now();
    let symbolic = absolute_bound(
        &ShiftForm::Symbolic {
            coefficient: rat("2400000000000"),
        },
        200,
        256,
    )
    .expect("symbolic bound");
    let capped = absolute_bound(&ShiftForm::Cap(146), 200, 256).expect("capped bound");
    let elapsed = started.elapsed();

    let symbolic_ceiling = int("30555000000000000000000000000"); // 2.91e28 * 1.05
    let capped_ceiling = int("7938000000000000"); // 7.56e15 * 1.05
    assert!(
        symbolic.resolved_bound <= symbolic_ceiling,
        "symbolic bound {} above ceiling",
        symbolic.resolved_bound
    );
    assert!(
        capped.resolved_bound <= capped_ceiling,
        "capped bound {} above ceiling",
        capped.resolved_bound
    );
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "bounds took {elapsed:?}, budget is 10 s"
    );
    println!(
        "criterion 04 (absolute bounds): PASS — {} and {} in {elapsed:?}",
        symbolic.resolved_bound, capped.resolved_bound
    );
}

#[test]
fn criterion_05_continued_fraction() {
    let cf = expand(CfTarget::Log2OverLogAlpha, 75).expect("certified expansion");
    assert!(
        cf.determinant_identity_holds(),
        "determinant identity must hold for every computed convergent"
    );

    let threshold_2 = int("7600000000000000") * BigInt::from(6);
    let second = (43..=45).any(|k| cf.convergents[k].1 > threshold_2);
    assert!(second, "no index in [43, 45] exceeds 6 * 7.6e15");

    let threshold_1 = int("29100000000000000000000000000") * BigInt::from(6);
    let (first_idx, first_q) = cf
        .first_q_exceeding(&threshold_1)
        .expect("threshold reachable");
    let first = (63..=65).any(|k| cf.convergents[k].1 > threshold_1);
    assert!(
        first,
        "no index in [63, 65] exceeds 6 * 2.91e28 = {threshold_1}: \
         q_63 = {}, q_64 = {}, q_65 = {}; the first denominator past the \
         threshold is q_{first_idx} = {first_q}",
        cf.convergents[63].1, cf.convergents[64].1, cf.convergents[65].1,
    );
    println!("criterion 05 (continued fraction): PASS");
}

#[test]
fn criterion_06_first_reduction() {
    let m1 = int("29100000000000000000000000000");
    let problem = ReductionProblem {
        mu: MuTag::Homogeneous,
        big_m: m1.clone(),
        amplitude: BigRational::from_integer(BigInt::from(167)),
        precision_bits: 256,
    };

    // epsilon at the reference convergent (index 64 in the p0/q0 = a0/1
    // convention) must certify a lower bound of at least 0.18
    let cf = expand(CfTarget::Log2OverLogAlpha, 70).expect("expansion");
    let eps_ref = epsilon(&problem, &cf.convergents[64].1).expect("epsilon computable");
    assert!(
        eps_ref.certainly_positive() && eps_ref.lower() >= decimal("0.18"),
        "epsilon at the reference convergent is {} (lower {}), needs >= 0.18",
        eps_ref.to_decimal(6),
        eps_ref.lower()
    );

    // the sound reduction uses the first convergent past 6M
    let result = fibpow2::reduction::reduce(&problem).expect("reduction succeeds");
    let w = result.w_bound.clone().expect("nondegenerate");
    assert!(
        w <= BigInt::from(160),
        "reduced shift bound {w} exceeds 160"
    );
    println!(
        "criterion 06 (first reduction): PASS — epsilon {} at reference q_64; \
         certified shift bound {} (threshold {}, target 146 / published threshold 146.408)",
        eps_ref.to_decimal(6),
        w,
        result.threshold.unwrap().to_decimal(4)
    );
}

#[test]
fn criterion_07_batch_reduction() {
    let started = Instant::now();
    let template = BatchTemplate {
        big_m: int("7600000000000000"),
        amplitude: BigRational::from_integer(BigInt::from(13)),
        precision_bits: 256,
    };
    let batch = batch_reduce(3..=146, &template).expect("batch runs");
    let elapsed = started.elapsed();

    let degenerate: Vec<u32> = batch.degenerate_shifts.iter().map(|(s, _)| *s).collect();
    assert_eq!(
        degenerate,
        vec![4, 12],
        "degenerate shifts over [3, 146] must be exactly {{4, 12}}"
    );

    let aggregate = batch.aggregate_w_bound.clone().expect("bound exists");
    assert!(
        aggregate <= BigInt::from(200),
        "aggregate bound {aggregate} does not contradict n > 200"
    );
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "batch took {elapsed:?}, budget is 2 min"
    );

    // reproduce the reference per-shift value: shift 15 at the convergent of
    // index 43 evaluates to ~0.49939
    let cf = expand(CfTarget::Log2OverLogAlpha, 50).expect("expansion");
    let shift15 = ReductionProblem {
        mu: MuTag::Shifted(15),
        big_m: template.big_m.clone(),
        amplitude: template.amplitude.clone(),
        precision_bits: 256,
    };
    let eps15 = epsilon(&shift15, &cf.convergents[43].1).expect("epsilon computable");

    let min_eps = batch.min_epsilon.clone().expect("minimum exists");
    assert!(
        min_eps >= decimal("0.49"),
        "min epsilon over admissible shifts is {} (aggregate bound {aggregate}); \
         the reference figure 0.49939 is reproduced exactly, but only as the \
         per-shift value of shift 15 at the index-43 convergent ({}), not as \
         the minimum over [3, 146]",
        fibpow2::rigor::rational_to_decimal(&min_eps, 8),
        eps15.to_decimal(8),
    );
    println!(
        "criterion 07 (batch reduction): PASS — degenerate {{4, 12}}, min eps {}, bound {}",
        fibpow2::rigor::rational_to_decimal(&min_eps, 6),
        aggregate
    );
}

#[test]
fn criterion_08_degeneracy_identities() {
    // sqrt5 (1 - alpha^-4)^(-1) = alpha^2 in exact Q(sqrt5) arithmetic
    let alpha = QuadExt::alpha();
    let one = QuadExt::from_int(1);
    let lhs4 = &QuadExt::sqrt5() * &(&one - &alpha.pow(-4).unwrap()).inverse().unwrap();
    assert_eq!(lhs4, alpha.pow(2).unwrap());

    // sqrt5 (1 - alpha^-12)^(-1) = alpha^6 / 8
    let lhs12 = &QuadExt::sqrt5() * &(&one - &alpha.pow(-12).unwrap()).inverse().unwrap();
    let rhs12 = (&alpha.pow(6).unwrap() / &QuadExt::from_int(8)).unwrap();
    assert_eq!(lhs12, rhs12);

    // the underlying identity alpha^(2k) - 1 = sqrt5 F(k) alpha^k for even k
    for k in [2i64, 6, 10, 20] {
        let lhs = &alpha.pow(2 * k).unwrap() - &one;
        let rhs =
            &(&QuadExt::sqrt5() * &QuadExt::from_bigint(fib(k).unwrap())) * &alpha.pow(k).unwrap();
        assert_eq!(lhs, rhs, "k = {k}");
    }
    println!("criterion 08 (degeneracy identities): PASS — exact witnesses for shifts 4 and 12");
}

#[test]
fn criterion_09_residual_cases() {
    let verdicts = all_residual_cases();
    let by_shift = |s: u32| verdicts.iter().find(|v| v.shift == s).expect("verdict");

    assert_eq!(
        by_shift(4).small_solutions,
        vec![SolutionTriple::new(5, 1, 2)],
        "shift 4 must yield exactly (5, 1, 2)"
    );
    assert!(
        by_shift(12).small_solutions.is_empty(),
        "shift 12 must be solution-free"
    );
    assert!(verdicts.iter().all(|v| v.large_solution_free));
    assert!(
        cross_check_against_search(&verdicts, 200),
        "residual verdicts must agree with the exhaustive search"
    );
    println!("criterion 09 (residual cases): PASS — all four verdicts cross-checked");
}

#[test]
fn criterion_10_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_fibpow2");
    let dir = tempdir();
    let cert_path = dir.join("cert.json");

    // prove writes a certificate and exits 0
    let prove = Command::new(bin)
        .args(["prove", "--nmax", "200", "--precision", "256", "--out"])
        .arg(&cert_path)
        .output()
        .expect("prove runs");
    assert!(
        prove.status.success(),
        "prove failed: {}",
        String::from_utf8_lossy(&prove.stderr)
    );

    // verify accepts the genuine certificate
    let verify = Command::new(bin)
        .arg("verify")
        .arg(&cert_path)
        .output()
        .expect("verify runs");
    assert!(
        verify.status.success(),
        "verify rejected a genuine certificate: {}",
        String::from_utf8_lossy(&verify.stderr)
    );

    // single-field tampering must be rejected
    let text = std::fs::read_to_string(&cert_path).expect("certificate readable");
    let tampered_cases: Vec<(&str, String)> = vec![
        ("epsilon", {
            let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
            let stage = v["stages"]
                .as_array_mut()
                .unwrap()
                .iter_mut()
                .find(|s| s["name"] == "reduction_1")
                .unwrap();
            stage["outputs"]["epsilon"]["lo"] = serde_json::Value::String("10".into());
            serde_json::to_string(&v).unwrap()
        }),
        ("conclusion triple", {
            let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
            v["conclusion"]
                .as_array_mut()
                .unwrap()
                .push(serde_json::json!({
                    "n": 10, "m": 9, "a": 1
                }));
            serde_json::to_string(&v).unwrap()
        }),
        ("missing stage", {
            let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
            let stages = v["stages"].as_array_mut().unwrap();
            stages.retain(|s| s["name"] != "residual_cases");
            serde_json::to_string(&v).unwrap()
        }),
        ("aggregate bound", {
            let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
            let stage = v["stages"]
                .as_array_mut()
                .unwrap()
                .iter_mut()
                .find(|s| s["name"] == "reduction_2")
                .unwrap();
            stage["outputs"]["aggregate_w_bound"] = serde_json::Value::String("9".into());
            serde_json::to_string(&v).unwrap()
        }),
    ];
    for (what, tampered) in tampered_cases {
        let path = dir.join("tampered.json");
        std::fs::write(&path, tampered).unwrap();
        let out = Command::new(bin).arg("verify").arg(&path).output().unwrap();
        assert!(
            !out.status.success(),
            "verify accepted a certificate with a tampered {what}"
        );
    }

    // compact re-run of the stated property ranges
    for k in [1u64, 10, 100, 500] {
        assert!(binet_residual(k, 256).contains(&BigRational::zero()));
    }
    for k in 1..=500i64 {
        assert_eq!(fib(k + 1).unwrap() + fib(k - 1).unwrap(), lucas(k).unwrap());
    }
    for n in (2..=100i64).step_by(7) {
        for m in (0..n).filter(|m| (n - m) % 2 == 0) {
            let f = difference_factorization(n, m).unwrap();
            assert_eq!(f.product(), fib(n).unwrap() - fib(m).unwrap());
        }
    }
    let e = Expr::Log(Box::new(Expr::Constant(NamedConstant::Alpha)));
    let lo = e.eval(128).unwrap();
    let hi = e.eval(256).unwrap();
    assert!(lo.overlaps(&hi) && hi.radius() < lo.radius());
    let alpha = eval_constant(NamedConstant::Alpha, 256);
    for k in [1i64, 2, 10, 100, 500] {
        let f = RigorousReal::exact_bigint(fib(k).unwrap(), 256);
        assert!(alpha.pow_int(k - 2).unwrap().lower() <= f.upper());
        assert!(f.lower() <= alpha.pow_int(k - 1).unwrap().upper());
    }

    // diagnostic subcommands: degenerate-shift diagnosis exits 0, the
    // continued fraction prints certified convergents
    let out = Command::new(bin)
        .args(["reduce", "--stage", "2", "--shift", "4"])
        .output()
        .expect("reduce subcommand runs");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("degenerate"));
    let out = Command::new(bin)
        .args(["cf", "--terms", "10"])
        .output()
        .expect("cf subcommand runs");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("q=1905"));

    println!("criterion 10 (end to end): PASS — prove, verify, tamper rejection, properties");
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("fibpow2-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}
