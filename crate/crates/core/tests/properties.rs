mod common;

use ddar::ar::{ArTable, EqId, Equation, QueryResult, Table};
use ddar::diagram::{build_diagram, numeric_holds, Coordinates, TAU_CHECK};
use ddar::geometry::{canonicalize, parse_problem, symmetry_group, PointId, Problem, Statement};
use ddar::matcher::detect_configurations;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn problems_round_trip_through_text_and_json() {
    let mut r = rng(1);
    for _ in 0..100 {
        let n = r.gen_range(4..=12);
        let p = random_problem(&mut r, n);
        let text = p.to_text();
        assert_eq!(parse_problem(&text).unwrap(), p, "{text}");
        assert_eq!(Problem::from_json(&p.to_json()).unwrap(), p);
    }
}

#[test]
fn construction_facts_hold_in_sampled_diagrams() {
    let mut r = rng(2);
    let mut built = 0;
    let mut seed = 0u64;
    while built < 100 {
        seed += 1;
        let n = r.gen_range(4..=10);
        let p = random_problem(&mut r, n);
        // random constructions can be unsolvable (parallel lines, a missed circle)
        let Ok(c) = build_diagram(&p, seed) else {
            continue;
        };
        built += 1;
        for (step, s) in p.given() {
            assert!(numeric_holds(&s, &c, TAU_CHECK), "seed {seed} step {step}: {}\n{}", p.render(&s), p.to_text());
        }
    }
    assert!(seed < 1000);
}

#[test]
fn diagrams_are_reproducible() {
    for cp in corpus() {
        let a = build_diagram(&cp.problem, 7).unwrap();
        let b = build_diagram(&cp.problem, 7).unwrap();
        assert_eq!(a, b, "{}", cp.name);
    }
}

#[test]
fn detection_is_scale_invariant() {
    for cp in corpus() {
        let c = build_diagram(&cp.problem, 3).unwrap();
        let base = detect_configurations(&c, TAU_CHECK);
        for factor in [1e-3, 0.5, 7.0, 1e4] {
            assert_eq!(detect_configurations(&c.scaled(factor), TAU_CHECK), base, "{} x{factor}", cp.name);
        }
    }
}

fn point() -> impl Strategy<Value = [f64; 2]> {
    [-100.0..100.0f64, -100.0..100.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn right_angles_satisfy_the_squared_length_identity(a in point(), b in point(), c in point(), t in -5.0..5.0f64) {
        prop_assume!((a[0] - b[0]).hypot(a[1] - b[1]) > 1e-3);
        let d = [c[0] - t * (b[1] - a[1]), c[1] + t * (b[0] - a[0])];
        let coords = Coordinates::from_points(vec![a, b, c, d]);
        let [pa, pb, pc, pd] = [0, 1, 2, 3].map(PointId);
        prop_assert!(coords.perp_identity(pa, pb, pc, pd).abs() < 1e-9);
    }

    #[test]
    fn identity_and_dot_product_agree(a in point(), b in point(), c in point(), d in point()) {
        let coords = Coordinates::from_points(vec![a, b, c, d]);
        let [pa, pb, pc, pd] = [0, 1, 2, 3].map(PointId);
        // AC^2 + BD^2 - AD^2 - BC^2 = -2 (B - A).(D - C)
        let (i, dot) = (coords.perp_identity(pa, pb, pc, pd), coords.perp_dot(pa, pb, pc, pd));
        prop_assert!((i + dot).abs() < 1e-9);
    }

    #[test]
    fn canonical_forms_are_orbit_invariant(args in proptest::collection::vec(0u16..8, 8), kind in 0usize..7) {
        let a: Vec<PointId> = args.into_iter().map(PointId).collect();
        let s = match kind {
            0 => Statement::Coll([a[0], a[1], a[2]]),
            1 => Statement::Cyclic([a[0], a[1], a[2], a[3]]),
            2 => Statement::Para([a[0], a[1], a[2], a[3]]),
            3 => Statement::Perp([a[0], a[1], a[2], a[3]]),
            4 => Statement::Cong([a[0], a[1], a[2], a[3]]),
            5 => Statement::EqAngle(a.clone().try_into().unwrap()),
            _ => Statement::EqRatio(a.clone().try_into().unwrap()),
        };
        let canon = canonicalize(&s);
        prop_assert_eq!(canonicalize(&canon), canon.clone());
        for g in symmetry_group(s.kind()) {
            prop_assert_eq!(canonicalize(&s.permuted(g)), canon.clone());
        }
    }

    #[test]
    fn symmetric_statements_evaluate_alike(seed in 0u64..1000, perm in 0usize..8) {
        let p = parse_problem("a = free\nb = free\nc = free\nd = on_circle a b\ne = midpoint c d\n? coll a b c\n").unwrap();
        let c = build_diagram(&p, seed).unwrap();
        let s = Statement::EqRatio([0, 1, 2, 3, 4, 0, 1, 3].map(PointId));
        let g = symmetry_group(s.kind());
        let t = s.permuted(&g[perm % g.len()]);
        prop_assert_eq!(numeric_holds(&s, &c, TAU_CHECK), numeric_holds(&t, &c, TAU_CHECK));
    }
}

/// Queries interleaved with inserts: a resumable table and a restarting one
/// give the same answers, and every certificate re-sums exactly.
#[test]
fn resumed_queries_match_fresh_queries() {
    let mut r = rng(6);
    for table in [Table::Len, Table::LogLen, Table::SqLen] {
        for _ in 0..60 {
            let vars = segment_vars(r.gen_range(3..=12));
            let mut resumed = ArTable::new(table);
            let mut fresh = ArTable::new(table).without_resumption();
            let mut log: Vec<Equation> = Vec::new();
            let targets: Vec<Equation> = (0..4).map(|_| random_equation(&mut r, table, &vars, false)).collect();
            for i in 0..r.gen_range(1..=25u32) {
                let eq = random_equation(&mut r, table, &vars, false);
                let a = resumed.insert(&eq, EqId(i)).is_ok();
                let b = fresh.insert(&eq, EqId(i)).is_ok();
                assert_eq!(a, b);
                log.push(eq);
                for t in &targets {
                    let (x, y) = (resumed.query(t), fresh.query(t));
                    assert_eq!(x.is_proven(), y.is_proven());
                    for q in [x, y] {
                        if let QueryResult::Proven(cert) = q {
                            assert!(cert.verify(|id| log.get(id.0 as usize).cloned()));
                        }
                    }
                }
            }
            assert!(resumed.stats().row_ops <= fresh.stats().row_ops);
            assert!(resumed.check_invariants(|id| log.get(id.0 as usize).cloned()));
        }
    }
}

/// The final row space does not depend on insertion order.
#[test]
fn rref_is_order_insensitive() {
    use rand::seq::SliceRandom;
    let mut r = rng(7);
    for table in [Table::Len, Table::LogLen, Table::SqLen] {
        for _ in 0..40 {
            let vars = segment_vars(r.gen_range(2..=15));
            let mut eqs: Vec<Equation> = (0..r.gen_range(1..=20)).map(|_| random_equation(&mut r, table, &vars, false)).collect();
            let build = |eqs: &[Equation]| {
                let mut t = ArTable::new(table);
                for (i, e) in eqs.iter().enumerate() {
                    t.insert(e, EqId(i as u32)).unwrap();
                }
                t.rref()
            };
            let first = build(&eqs);
            eqs.shuffle(&mut r);
            assert_eq!(build(&eqs), first);
            assert_eq!(batch_rref(&eqs), Some(first));
        }
    }
}
