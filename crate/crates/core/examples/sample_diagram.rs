//! Samples coordinates for a problem and evaluates statements on them.

use ddar::diagram::{build_diagram, numeric_holds, TAU_CHECK};
use ddar::geometry::parse_problem;

fn main() {
    let problem = parse_problem(
        "o = free\na = free\nb = on_circle o a\nc = on_circle o a\nd = on_circle o a\n? cyclic a b c d\n",
    )
    .unwrap();
    for seed in 0..3 {
        let c = build_diagram(&problem, seed).expect("diagram");
        print!("seed {seed}:");
        for p in problem.points() {
            let [x, y] = c.point(p);
            print!(" {}=({x:.3}, {y:.3})", problem.name(p));
        }
        println!();
        let goal = problem.goal();
        println!("  {} holds: {} (residual {:.1e})", problem.render(goal), numeric_holds(goal, &c, TAU_CHECK), c.residual(goal));
        let wrong = problem.parse_statement("cong o a a b").unwrap();
        println!("  {} holds: {}", problem.render(&wrong), numeric_holds(&wrong, &c, TAU_CHECK));
    }
}
