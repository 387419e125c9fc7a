//! Solves a problem, prints the proof and re-verifies it independently.
//!
//! Usage: `cargo run --example prove_and_check [problem file]`

use std::fs;

use ddar::engine::{solve, verify_proof, SolverConfig};
use ddar::geometry::parse_problem;
use ddar::matcher::builtin_catalog;

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => fs::read_to_string(path).expect("readable problem"),
        None => include_str!("../corpus/orthocenter.txt").to_string(),
    };
    let problem = parse_problem(&text).unwrap();
    let catalog = builtin_catalog();
    let sol = solve(&problem, &catalog, &SolverConfig::default()).unwrap();
    println!("outcome: {} in {:.2?}", sol.outcome().as_str(), sol.times.total());
    match sol.proof() {
        Ok(proof) => {
            print!("{}", proof.to_text(&problem));
            println!("verified: {}", verify_proof(&proof, &problem, &catalog));
        }
        Err(e) => println!("{e}"),
    }
}
