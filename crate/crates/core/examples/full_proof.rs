//! Run the whole proof, inspect the certificate, and re-verify it.
//!
//! Run with: cargo run --release --example full_proof

use fibpow2::pipeline::{run_proof, verify_certificate, ProofConfig};

fn main() {
    let config = ProofConfig::default();
    println!(
        "running the proof at {} bits with cutoff {} ...",
        config.precision_bits, config.n_cutoff
    );
    let cert = run_proof(&config).expect("proof must certify every stage");

    println!("\nstages:");
    for stage in &cert.stages {
        println!("  {}", stage.name);
    }

    println!("\nconclusion: the {} solutions are", cert.conclusion.len());
    for t in &cert.conclusion {
        println!("  {t}");
    }

    let report = verify_certificate(&cert);
    println!("\nindependent re-verification: ok = {}", report.ok);
    for v in &report.violations {
        println!("  violation: {v}");
    }

    // certificates are plain JSON; the full transcript is reproducible
    let json = cert.to_json();
    println!("\ncertificate size: {} bytes of JSON", json.len());
}
