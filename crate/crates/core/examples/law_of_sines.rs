//! The intersecting-chords problem needs sine variables: it saturates without
//! them and is proven with them.

use ddar::engine::{solve, SolverConfig};
use ddar::geometry::parse_problem;
use ddar::matcher::builtin_catalog;

fn main() {
    let problem = parse_problem(include_str!("../corpus/intersecting_chords.txt")).unwrap();
    let catalog = builtin_catalog();
    for law_of_sines in [false, true] {
        let cfg = SolverConfig {
            law_of_sines,
            ..SolverConfig::default()
        };
        let sol = solve(&problem, &catalog, &cfg).unwrap();
        println!(
            "law_of_sines={law_of_sines}: {} ({} equations, {:.2?} in the loop)",
            sol.outcome().as_str(),
            sol.result.stats.equations,
            sol.times.saturation
        );
        if let Ok(p) = sol.proof() {
            print!("{}", p.to_text(&problem));
        }
    }
}
