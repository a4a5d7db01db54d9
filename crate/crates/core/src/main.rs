//! Thin command-line front end; all logic lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::bigint::BigInt;

use fibpow2::contfrac::{expand, CfTarget};
use fibpow2::pipeline::{run_proof, verify_certificate, ProofCertificate, ProofConfig};
use fibpow2::reduction::{
    batch_reduce, linearize, reduce, BatchTemplate, FormKind, MuTag, ReductionError,
    ReductionProblem,
};
use fibpow2::rigor::DEFAULT_PRECISION_BITS;
use fibpow2::search::brute_force;

#[derive(Parser)]
#[command(
    name = "fibpow2",
    version,
    about = "Certified solver for F(n) - F(m) = 2^a"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full proof and write the certificate.
    Prove {
        /// Search cutoff; the proof contradicts any solution above it.
        #[arg(long, default_value_t = 200)]
        nmax: u64,
        /// Working precision in bits.
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision: u32,
        /// Certificate output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Independently recheck a certificate file.
    Verify { file: PathBuf },
    /// Exhaustive search below a cutoff.
    Search {
        #[arg(long)]
        nmax: u64,
    },
    /// Certified continued fraction of log 2 / log alpha.
    Cf {
        /// Number of partial quotients.
        #[arg(long)]
        terms: usize,
    },
    /// Run a single reduction with full diagnostics.
    Reduce {
        /// 1 = homogeneous form bounding n - m; 2 = shifted form bounding n.
        #[arg(long)]
        stage: u8,
        /// Shift for stage 2 (whole batch when omitted).
        #[arg(long)]
        shift: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Prove {
            nmax,
            precision,
            out,
        } => {
            let config = ProofConfig {
                n_cutoff: nmax,
                precision_bits: precision,
            };
            let cert = run_proof(&config).map_err(|e| e.to_string())?;
            let text = cert.to_json();
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|e| e.to_string())?;
                    println!(
                        "proof complete: {} solutions, certificate written to {}",
                        cert.conclusion.len(),
                        path.display()
                    );
                }
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| e.to_string())?;
            let cert = ProofCertificate::from_json(&text).map_err(|e| e.to_string())?;
            let report = verify_certificate(&cert);
            if report.ok {
                println!("certificate verified: all stages re-checked");
                Ok(ExitCode::SUCCESS)
            } else {
                for v in &report.violations {
                    eprintln!("violation: {v}");
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Search { nmax } => {
            let solutions = brute_force(nmax);
            for t in &solutions {
                println!("{t}");
            }
            println!("{} solutions with n <= {nmax}", solutions.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Cf { terms } => {
            let cf = expand(CfTarget::Log2OverLogAlpha, terms).map_err(|e| e.to_string())?;
            println!("certified at {} bits", cf.precision_bits);
            for (k, (a, (p, q))) in cf.quotients.iter().zip(&cf.convergents).enumerate() {
                println!("k={k:3}  a={a}  p={p}  q={q}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce {
            stage,
            shift,
            precision,
        } => match stage {
            1 => {
                let form = linearize(FormKind::Z1, 201, 3, precision).map_err(|e| e.to_string())?;
                let problem = ReductionProblem {
                    mu: MuTag::Homogeneous,
                    big_m: reference_m1(),
                    amplitude: form.amplitude,
                    precision_bits: precision,
                };
                let result = reduce(&problem).map_err(|e| e.to_string())?;
                println!("convergent index {}: q = {}", result.q_index, result.q);
                println!("epsilon = {}", result.epsilon.to_decimal(12));
                println!(
                    "threshold = {}",
                    result.threshold.expect("nondegenerate").to_decimal(6)
                );
                println!("n - m <= {}", result.w_bound.expect("nondegenerate"));
                Ok(ExitCode::SUCCESS)
            }
            2 => {
                let form = linearize(FormKind::Z2, 201, 3, precision).map_err(|e| e.to_string())?;
                match shift {
                    Some(s) => {
                        let problem = ReductionProblem {
                            mu: MuTag::Shifted(s),
                            big_m: reference_m2(),
                            amplitude: form.amplitude,
                            precision_bits: precision,
                        };
                        match reduce(&problem) {
                            Ok(result) => {
                                println!(
                                    "shift {s}: convergent index {}: q = {}",
                                    result.q_index, result.q
                                );
                                println!("epsilon = {}", result.epsilon.to_decimal(12));
                                println!("n <= {}", result.w_bound.expect("nondegenerate"));
                            }
                            Err(ReductionError::Degenerate { diagnosis, .. }) => {
                                println!("shift {s} is degenerate: {diagnosis}");
                            }
                            Err(e) => return Err(e.to_string()),
                        }
                        Ok(ExitCode::SUCCESS)
                    }
                    None => {
                        let template = BatchTemplate {
                            big_m: reference_m2(),
                            amplitude: form.amplitude,
                            precision_bits: precision,
                        };
                        let batch = batch_reduce(3..=146, &template).map_err(|e| e.to_string())?;
                        for (s, r) in &batch.results {
                            if r.degenerate {
                                println!("shift {s:3}: degenerate");
                            } else {
                                println!(
                                    "shift {s:3}: q_index {} epsilon {} n <= {}",
                                    r.q_index,
                                    r.epsilon.to_decimal(8),
                                    r.w_bound.as_ref().expect("nondegenerate")
                                );
                            }
                        }
                        for (s, d) in &batch.degenerate_shifts {
                            println!("degenerate shift {s}: {d}");
                        }
                        if let Some(w) = &batch.aggregate_w_bound {
                            println!("aggregate: n <= {w}");
                        }
                        Ok(ExitCode::SUCCESS)
                    }
                }
            }
            other => Err(format!("unknown reduction stage {other}; use 1 or 2")),
        },
    }
}

fn reference_m1() -> BigInt {
    "29100000000000000000000000000".parse().expect("literal")
}

fn reference_m2() -> BigInt {
    "7600000000000000".parse().expect("literal")
}
