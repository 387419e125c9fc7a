//! Enumerates every numerically true rule instance for the centroid problem.

use std::collections::BTreeMap;

use ddar::diagram::{build_diagram, TAU_CHECK};
use ddar::geometry::parse_problem;
use ddar::matcher::{builtin_catalog, detect_configurations, match_rules};

fn main() {
    let problem = parse_problem(include_str!("../corpus/centroid.txt")).unwrap();
    let catalog = builtin_catalog();
    let c = build_diagram(&problem, 0).unwrap();
    let cfg = detect_configurations(&c, TAU_CHECK);
    let instances = match_rules(&cfg, &catalog, &c, TAU_CHECK);
    let mut per_rule: BTreeMap<&str, usize> = BTreeMap::new();
    for i in &instances {
        *per_rule.entry(i.rule.as_str()).or_default() += 1;
    }
    println!("{} rules, {} instances", catalog.len(), instances.len());
    for (rule, n) in per_rule {
        println!("  {rule:<24} {n}");
    }
    if let Some(i) = instances.first() {
        let hyps: Vec<String> = i.hypotheses.iter().map(|h| problem.render(h)).collect();
        println!("e.g. {}: {} => {}", i.rule, hyps.join(", "), problem.render(&i.conclusion));
    }
}
