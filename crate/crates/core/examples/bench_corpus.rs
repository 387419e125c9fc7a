//! Runs the bundled corpus through the benchmark harness and prints the table.

use std::path::Path;

use ddar::cli::{bench_dir, Manifest};
use ddar::engine::SolverConfig;
use ddar::matcher::builtin_catalog;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let manifest = Manifest::load(&dir.join("manifest.json")).unwrap();
    let report = bench_dir(&dir, &builtin_catalog(), &SolverConfig::default(), 0, Some(&manifest)).unwrap();
    print!("{}", report.to_table());
    println!("manifest mismatches: {}", report.mismatches().len());
}
