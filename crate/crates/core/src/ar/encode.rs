//! Translation of statements into table equations.
//!
//! A statement has two encodings: the equations it contributes once it is
//! established (`statement_to_equations`), and the alternative sets of
//! equations that are each sufficient to prove it (`proof_obligations`).

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Equation, Rational, Table, VarKey};
use crate::diagram::Coordinates;
use crate::geometry::{PointId, Statement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("statement uses sine variables but the law-of-sines extension is disabled")]
    ExtensionDisabled,
}

/// Non-degenerate triangles whose angle sines may appear as variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SineDomain {
    triangles: BTreeSet<[PointId; 3]>,
    points: Vec<PointId>,
}

/// Smallest normalized doubled area for a triangle to carry sine variables.
const SINE_MIN_AREA: f64 = 1e-6;

impl SineDomain {
    pub fn from_diagram(c: &Coordinates) -> SineDomain {
        let n = c.len();
        let mut triangles = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                for d in b + 1..n {
                    let (a, b, d) = (PointId::from(a), PointId::from(b), PointId::from(d));
                    if c.area2(a, b, d).abs() > SINE_MIN_AREA {
                        triangles.insert([a, b, d]);
                    }
                }
            }
        }
        SineDomain {
            triangles,
            points: (0..n).map(PointId::from).collect(),
        }
    }

    pub fn contains(&self, a: PointId, b: PointId, c: PointId) -> bool {
        let mut t = [a, b, c];
        t.sort();
        self.triangles.contains(&t)
    }

    pub fn triangles(&self) -> impl Iterator<Item = &[PointId; 3]> {
        self.triangles.iter()
    }

    fn sin(&self, x: PointId, v: PointId, y: PointId) -> Option<VarKey> {
        if self.contains(x, v, y) {
            VarKey::sin(x, v, y)
        } else {
            None
        }
    }
}

/// Optional encodings. `law_of_sines: None` is the default configuration.
#[derive(Debug, Clone, Default)]
pub struct ArOptions {
    pub law_of_sines: Option<SineDomain>,
}

impl ArOptions {
    pub fn with_sines(domain: SineDomain) -> ArOptions {
        ArOptions {
            law_of_sines: Some(domain),
        }
    }
}

fn q(i: i64) -> Rational {
    Rational::from_integer(i.into())
}

fn seg_eq(table: Table, terms: &[(i64, PointId, PointId)]) -> Equation {
    Equation::from_segments(table, terms, 0)
}

fn log_eq(terms: &[(i64, PointId, PointId)]) -> Option<Equation> {
    // a zero-length segment has no logarithm
    if terms.iter().any(|&(_, a, b)| a == b) {
        return None;
    }
    Some(Equation::from_segments(Table::LogLen, terms, 0))
}

fn perp_identity(a: PointId, b: PointId, c: PointId, d: PointId) -> Equation {
    // ab ⟂ cd  <=>  |ac|^2 + |bd|^2 - |ad|^2 - |bc|^2 = 0
    seg_eq(Table::SqLen, &[(1, a, c), (1, b, d), (-1, a, d), (-1, b, c)])
}

/// Vertex shared by two lines, with the two other endpoints.
fn vertex_of(l1: (PointId, PointId), l2: (PointId, PointId)) -> Option<(PointId, PointId, PointId)> {
    let (a, b) = l1;
    let (c, d) = l2;
    let shared = [(a, b, c, d), (a, b, d, c), (b, a, c, d), (b, a, d, c)]
        .into_iter()
        .find(|&(v, _, w, _)| v == w)?;
    let (v, x, _, y) = shared;
    if x == y || x == v || y == v {
        return None;
    }
    Some((x, v, y))
}

fn sine_consequences(s: &Statement, dom: &SineDomain) -> Vec<Equation> {
    let mut out = Vec::new();
    let logsin = |terms: Vec<(VarKey, i64)>, constant: i64| {
        Equation::new(Table::LogLen, terms.into_iter().map(|(k, c)| (k, q(c))), q(constant))
    };
    match s {
        Statement::EqAngle(a) => {
            let lines: Vec<(PointId, PointId)> = (0..4).map(|i| (a[2 * i], a[2 * i + 1])).collect();
            for (p, r) in [((0, 1), (2, 3)), ((0, 2), (1, 3))] {
                let left = vertex_of(lines[p.0], lines[p.1]).and_then(|(x, v, y)| dom.sin(x, v, y));
                let right = vertex_of(lines[r.0], lines[r.1]).and_then(|(x, v, y)| dom.sin(x, v, y));
                if let (Some(k1), Some(k2)) = (left, right) {
                    out.push(logsin(vec![(k1, 1), (k2, -1)], 0));
                }
            }
        }
        Statement::Perp([a, b, c, d]) => {
            if let Some(k) = vertex_of((*a, *b), (*c, *d)).and_then(|(x, v, y)| dom.sin(x, v, y)) {
                out.push(logsin(vec![(k, 1)], 0));
            }
        }
        Statement::Coll([x, y, z]) if x != y && y != z && x != z => {
            for &p in &dom.points {
                if p == *x || p == *y || p == *z {
                    continue;
                }
                for (v, o1, o2) in [(*x, *y, *z), (*y, *x, *z), (*z, *x, *y)] {
                    if let (Some(k1), Some(k2)) = (dom.sin(p, v, o1), dom.sin(p, v, o2)) {
                        out.push(logsin(vec![(k1, 1), (k2, -1)], 0));
                    }
                }
            }
        }
        _ => {}
    }
    out
}

fn check_sines(eq: &Equation, opts: &ArOptions) -> Result<(), EncodeError> {
    if eq.uses_sines() && opts.law_of_sines.is_none() {
        Err(EncodeError::ExtensionDisabled)
    } else {
        Ok(())
    }
}

/// Equations contributed to the tables once `s` is established.
pub fn statement_to_equations(s: &Statement, opts: &ArOptions) -> Result<Vec<Equation>, EncodeError> {
    let mut out: Vec<Equation> = match s {
        Statement::Cong([a, b, c, d]) => {
            let mut v = vec![
                seg_eq(Table::Len, &[(1, *a, *b), (-1, *c, *d)]),
                seg_eq(Table::SqLen, &[(1, *a, *b), (-1, *c, *d)]),
            ];
            v.extend(log_eq(&[(1, *a, *b), (-1, *c, *d)]));
            v
        }
        Statement::Perp([a, b, c, d]) => vec![perp_identity(*a, *b, *c, *d)],
        Statement::Midpoint([m, a, b]) => {
            let mut v = vec![
                seg_eq(Table::Len, &[(1, *a, *m), (-1, *m, *b)]),
                seg_eq(Table::Len, &[(1, *a, *b), (-2, *a, *m)]),
                seg_eq(Table::SqLen, &[(1, *a, *m), (-1, *m, *b)]),
                seg_eq(Table::SqLen, &[(1, *a, *b), (-4, *a, *m)]),
            ];
            v.extend(log_eq(&[(1, *a, *m), (-1, *m, *b)]));
            v
        }
        Statement::EqRatio([a, b, c, d, e, f, g, h]) => {
            log_eq(&[(1, *a, *b), (-1, *c, *d), (-1, *e, *f), (1, *g, *h)])
                .into_iter()
                .collect()
        }
        Statement::AREq(eq) => {
            check_sines(eq, opts)?;
            vec![eq.clone()]
        }
        Statement::Coll(_) | Statement::Cyclic(_) | Statement::Para(_) | Statement::EqAngle(_) => vec![],
    };
    if let Some(dom) = &opts.law_of_sines {
        out.extend(sine_consequences(s, dom));
    }
    out.retain(|e| !e.is_tautology());
    out.sort();
    out.dedup();
    Ok(out)
}

/// Alternative equation sets, each of which proves `s` when all of its members
/// are derivable. Empty when `s` is not decidable by the tables.
pub fn proof_obligations(s: &Statement, opts: &ArOptions) -> Result<Vec<Vec<Equation>>, EncodeError> {
    let alts: Vec<Vec<Equation>> = match s {
        // lengths are non-negative, so any one of the three encodings suffices
        Statement::Cong([a, b, c, d]) => {
            let mut v = vec![
                vec![seg_eq(Table::Len, &[(1, *a, *b), (-1, *c, *d)])],
                vec![seg_eq(Table::SqLen, &[(1, *a, *b), (-1, *c, *d)])],
            ];
            if let Some(e) = log_eq(&[(1, *a, *b), (-1, *c, *d)]) {
                v.push(vec![e]);
            }
            v
        }
        Statement::Perp([a, b, c, d]) => vec![vec![perp_identity(*a, *b, *c, *d)]],
        // |am| = |mb| and |ab| = 2|am| force m onto the segment, at its middle
        Statement::Midpoint([m, a, b]) if a != b && m != a && m != b => vec![
            vec![
                seg_eq(Table::Len, &[(1, *a, *m), (-1, *m, *b)]),
                seg_eq(Table::Len, &[(1, *a, *b), (-2, *a, *m)]),
            ],
            vec![
                seg_eq(Table::SqLen, &[(1, *a, *m), (-1, *m, *b)]),
                seg_eq(Table::SqLen, &[(1, *a, *b), (-4, *a, *m)]),
            ],
        ],
        Statement::EqRatio([a, b, c, d, e, f, g, h]) => {
            log_eq(&[(1, *a, *b), (-1, *c, *d), (-1, *e, *f), (1, *g, *h)])
                .map(|e| vec![e])
                .into_iter()
                .collect()
        }
        Statement::AREq(eq) => {
            check_sines(eq, opts)?;
            vec![vec![eq.clone()]]
        }
        _ => vec![],
    };
    Ok(alts
        .into_iter()
        .map(|alt| alt.into_iter().filter(|e| !e.is_tautology()).collect::<Vec<_>>())
        .collect())
}

/// Law of sines for triangle `abc` in the log table:
/// `log|bc| - log sin A = log|ca| - log sin B = log|ab| - log sin C`.
pub fn law_of_sines_equations(tri: [PointId; 3], opts: &ArOptions) -> Result<Vec<Equation>, EncodeError> {
    let dom = opts.law_of_sines.as_ref().ok_or(EncodeError::ExtensionDisabled)?;
    let [a, b, c] = tri;
    let (Some(sa), Some(sb), Some(sc)) = (dom.sin(b, a, c), dom.sin(a, b, c), dom.sin(a, c, b)) else {
        return Ok(vec![]);
    };
    let (Some(bc), Some(ca), Some(ab)) = (VarKey::seg(b, c), VarKey::seg(c, a), VarKey::seg(a, b)) else {
        return Ok(vec![]);
    };
    let one = Rational::one;
    let mk = |l1: VarKey, s1: VarKey, l2: VarKey, s2: VarKey| {
        Equation::new(
            Table::LogLen,
            [(l1, one()), (s1, -one()), (l2, -one()), (s2, one())],
            Rational::zero(),
        )
    };
    Ok(vec![mk(bc, sa, ca, sb), mk(ca, sb, ab, sc)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u16) -> PointId {
        PointId(i)
    }

    fn none() -> ArOptions {
        ArOptions::default()
    }

    fn in_table(eqs: &[Equation], t: Table) -> Vec<Equation> {
        eqs.iter().filter(|e| e.table() == t).cloned().collect()
    }

    #[test]
    fn perp_uses_squared_length_identity() {
        let (a, b, c, d) = (p(0), p(1), p(2), p(3));
        let eqs = statement_to_equations(&Statement::perp(a, c, b, d), &none()).unwrap();
        // |ab|^2 + |cd|^2 - |ad|^2 - |cb|^2 = 0
        let expected = seg_eq(Table::SqLen, &[(1, a, b), (1, c, d), (-1, a, d), (-1, c, b)]);
        assert_eq!(eqs, vec![expected]);
    }

    #[test]
    fn midpoint_length_relations() {
        let (m, a, b) = (p(2), p(0), p(1));
        let eqs = statement_to_equations(&Statement::midpoint(m, a, b), &none()).unwrap();
        let mut expected = vec![
            seg_eq(Table::Len, &[(1, a, m), (-1, m, b)]),
            seg_eq(Table::Len, &[(1, a, b), (-2, a, m)]),
        ];
        expected.sort();
        assert_eq!(in_table(&eqs, Table::Len), expected);
    }

    #[test]
    fn tautological_cong_is_empty() {
        let eqs = statement_to_equations(&Statement::cong(p(0), p(1), p(0), p(1)), &none()).unwrap();
        assert!(eqs.is_empty());
    }

    #[test]
    fn angle_kinds_have_no_equations() {
        for s in [
            Statement::coll(p(0), p(1), p(2)),
            Statement::para(p(0), p(1), p(2), p(3)),
            Statement::cyclic(p(0), p(1), p(2), p(3)),
        ] {
            assert!(statement_to_equations(&s, &none()).unwrap().is_empty());
            assert!(proof_obligations(&s, &none()).unwrap().is_empty());
        }
    }

    #[test]
    fn sines_require_extension() {
        let k = VarKey::sin(p(0), p(1), p(2)).unwrap();
        let eq = Equation::new(Table::LogLen, [(k, q(1))], q(0));
        let s = Statement::areq(eq);
        assert_eq!(statement_to_equations(&s, &none()), Err(EncodeError::ExtensionDisabled));
        assert_eq!(law_of_sines_equations([p(0), p(1), p(2)], &none()), Err(EncodeError::ExtensionDisabled));
    }

    #[test]
    fn law_of_sines_shape() {
        let c = Coordinates::from_points(vec![[0.0, 0.0], [1.0, 0.0], [0.2, 0.9]]);
        let opts = ArOptions::with_sines(SineDomain::from_diagram(&c));
        let eqs = law_of_sines_equations([p(0), p(1), p(2)], &opts).unwrap();
        assert_eq!(eqs.len(), 2);
        for e in &eqs {
            assert_eq!(e.table(), Table::LogLen);
            assert_eq!(e.terms().len(), 4);
            // numerically exact up to rounding
            assert!(c.equation_residual(e).abs() < 1e-12);
        }
    }
}
