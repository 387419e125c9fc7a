//! Exact linear reasoning over squared lengths: derives the median-length
//! relation from two parallelogram-law equations and prints the certificate.

use ddar::ar::{ArTable, EqId, Equation, QueryResult, Table};
use ddar::geometry::PointId;

fn main() {
    let [a, b, c, m, d] = [0, 1, 2, 3, 4].map(PointId);
    let names: Vec<String> = ["a", "b", "c", "m", "d"].iter().map(|s| s.to_string()).collect();
    let facts = [
        // parallelogram abdc: 2ab^2 + 2ac^2 = bc^2 + ad^2
        Equation::from_segments(Table::SqLen, &[(2, a, b), (2, a, c), (-1, b, c), (-1, a, d)], 0),
        // m is the midpoint of ad: ad^2 = 4am^2
        Equation::from_segments(Table::SqLen, &[(1, a, d), (-4, a, m)], 0),
    ];
    let mut table = ArTable::new(Table::SqLen);
    for (i, f) in facts.iter().enumerate() {
        table.insert(f, EqId(i as u32)).unwrap();
        println!("inserted {}", f.display_with(&names));
    }
    let goal = Equation::from_segments(Table::SqLen, &[(2, a, b), (2, a, c), (-1, b, c), (-4, a, m)], 0);
    match table.query(&goal) {
        QueryResult::Proven(cert) => {
            println!("proved {}", goal.display_with(&names));
            for (id, k) in &cert.combination {
                println!("  {k} * ({})", facts[id.0 as usize].display_with(&names));
            }
            assert!(cert.verify(|id| facts.get(id.0 as usize).cloned()));
        }
        QueryResult::Pending => println!("not derivable"),
    }
    let unrelated = Equation::from_segments(Table::SqLen, &[(1, a, b), (-1, a, c)], 0);
    println!("ab^2 = ac^2 derivable: {}", table.query(&unrelated).is_proven());
    println!("{:?}", table.stats());
}
