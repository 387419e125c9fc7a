//! Row operations spent by table queries with and without resumption.

use std::fs;

use ddar::engine::{solve, SolverConfig};
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
    println!("{:<24} {:>8} {:>8} {:>7} {:>8}", "problem", "resumed", "restart", "phases", "queries");
    for path in paths {
        let problem = parse_problem(&fs::read_to_string(&path).unwrap()).unwrap();
        let on = solve(&problem, &catalog, &SolverConfig::default()).unwrap();
        let off_cfg = SolverConfig {
            resume_queries: false,
            ..SolverConfig::default()
        };
        let off = solve(&problem, &catalog, &off_cfg).unwrap();
        let s = &on.result.stats;
        println!(
            "{:<24} {:>8} {:>8} {:>7} {:>8}",
            path.file_stem().unwrap().to_string_lossy(),
            s.table.row_ops,
            off.result.stats.table.row_ops,
            s.ar_phases,
            s.table.queries,
        );
    }
}
