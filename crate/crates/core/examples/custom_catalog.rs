//! Builds a one-rule catalog from text, checks its witness and solves with it.

use ddar::engine::{solve, SolverConfig};
use ddar::geometry::parse_problem;
use ddar::matcher::{format_catalog, parse_catalog};

const CATALOG: &str = "
rule kite_perp
  hyp cong $p $a $p $b
  hyp cong $q $a $q $b
  concl perp $p $q $a $b
  witness a = free; b = free; c = free; d = free; p = circumcenter a b c; q = circumcenter a b d
  source mined
";

fn main() {
    let catalog = parse_catalog(CATALOG).expect("catalog parses");
    for rule in &catalog {
        rule.check_witness(0..4).expect("witness holds");
    }
    print!("{}", format_catalog(&catalog));
    let problem = parse_problem(include_str!("../corpus/kite.txt")).unwrap();
    let sol = solve(&problem, &catalog, &SolverConfig::default()).unwrap();
    println!("outcome: {}", sol.outcome().as_str());
    if let Ok(p) = sol.proof() {
        print!("{}", p.to_text(&problem));
    }
}
