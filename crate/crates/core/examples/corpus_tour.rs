//! Solves every bundled problem with and without the law of sines.

use std::fs;

use ddar::engine::{solve, verify_proof, SolverConfig};
use ddar::geometry::parse_problem;
use ddar::matcher::builtin_catalog;

fn main() {
    let catalog = builtin_catalog();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let mut paths: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    for path in paths {
        let problem = parse_problem(&fs::read_to_string(&path).unwrap()).unwrap();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        for sines in [false, true] {
            let cfg = SolverConfig {
                law_of_sines: sines,
                ..SolverConfig::default()
            };
            let sol = solve(&problem, &catalog, &cfg).unwrap();
            let checked = sol.proof().map(|p| verify_proof(&p, &problem, &catalog));
            println!(
                "{name:<22} sines={sines:<5} {:<12} instances={:<5} steps={:<4} row_ops={:<7} {:?} verified={:?}",
                sol.outcome().as_str(),
                sol.instances.len(),
                sol.result.records.len(),
                sol.result.stats.table.row_ops,
                sol.times.total(),
                checked.ok(),
            );
        }
    }
}
