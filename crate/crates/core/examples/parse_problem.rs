//! Parses a problem, prints its construction facts and round-trips it
//! through text and JSON.

use ddar::geometry::parse_problem;

const ORTHOCENTER: &str = "
a = free
b = free
c = free
d = foot a b c
e = foot b a c
h = intersect_ll a d b e
? perp c h a b
";

fn main() {
    let problem = parse_problem(ORTHOCENTER).expect("valid problem");
    println!("{} points, goal: {}", problem.num_points(), problem.render(problem.goal()));
    for (step, s) in problem.given() {
        println!("  step {step}: {}", problem.render(&s));
    }
    assert_eq!(parse_problem(&problem.to_text()).unwrap(), problem);
    println!("{}", problem.to_json());

    match parse_problem("a = free\nb = twist a\n? coll a b a\n") {
        Err(e) => println!("error: {e}"),
        Ok(_) => unreachable!(),
    }
}
