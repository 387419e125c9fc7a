//! Lists the configurations found in a diagram of Varignon's quadrilateral.

use ddar::diagram::{build_diagram, TAU_CHECK};
use ddar::geometry::parse_problem;
use ddar::matcher::detect_configurations;

fn main() {
    let text = include_str!("../corpus/varignon.txt");
    let problem = parse_problem(text).unwrap();
    let c = build_diagram(&problem, 0).unwrap();
    let cfg = detect_configurations(&c, TAU_CHECK);
    println!(
        "coll {} cyclic {} para {} perp {} cong {} midpoint {} similar {} bisectors {}",
        cfg.coll.len(),
        cfg.cyclic.len(),
        cfg.para.len(),
        cfg.perp.len(),
        cfg.cong.len(),
        cfg.midpoint.len(),
        cfg.similar.len(),
        cfg.bisectors.len()
    );
    for s in cfg.para.iter().chain(&cfg.midpoint) {
        println!("  {}", problem.render(s));
    }
    for pair in cfg.similar.iter().take(5) {
        let names = |t: [ddar::geometry::PointId; 3]| t.map(|p| problem.name(p).to_string()).join("");
        println!("  {} ~ {}{}", names(pair.first), names(pair.second), if pair.reflected { " (reflected)" } else { "" });
    }
}
