//! Exhaustive search for F(n) - F(m) = 2^a below a cutoff.
//!
//! Run with: cargo run --example search_solutions

use fibpow2::search::{brute_force, is_solution, SolutionTriple};

fn main() {
    for n_max in [3u64, 50, 200] {
        let solutions = brute_force(n_max);
        println!("n <= {n_max}: {} solutions", solutions.len());
        for t in &solutions {
            println!("  {t}   F({}) - F({}) = 2^{}", t.n, t.m, t.a);
        }
    }

    // the solution set is stable: pushing the cutoff much higher finds nothing new
    assert_eq!(brute_force(1000).len(), 16);
    println!("\nno further solutions up to n = 1000");

    // the checker rejects near misses
    let bogus = SolutionTriple::new(6, 1, 3); // F(6) - F(1) = 7
    println!("is_solution{bogus} = {}", is_solution(&bogus));
}
