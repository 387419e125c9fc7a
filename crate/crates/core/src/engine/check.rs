//! Proof checker.
//!
//! Works only from the proof, the problem and the rule catalog. It has its own
//! statement encodings, its own rule instantiation and its own exact
//! summation of certificates; nothing from the solving loop is reused. Every
//! step is also re-evaluated on a freshly sampled diagram.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::proof::{EquationSource, Proof, ProofEquation};
use super::saturate::Justification;
use crate::ar::{Equation, Rational, Table, VarKey};
use crate::diagram::{build_diagram, numeric_holds, Coordinates, TAU_CHECK};
use crate::geometry::{canonicalize, PointId, Problem, Statement};
use crate::matcher::Rule;

/// Seed of the diagram the checker samples on its own.
pub const CHECK_SEED: u64 = 0x5eed_c0de_0bad_f00d;

/// Triangles with a smaller normalized doubled area may not carry sines.
const SINE_AREA: f64 = 1e-6;

type Terms = BTreeMap<VarKey, Rational>;

fn int(i: i64) -> Rational {
    Rational::from_integer(i.into())
}

fn lin(table: Table, terms: &[(i64, Option<VarKey>)]) -> Option<Equation> {
    let mut out = Vec::new();
    for (c, k) in terms {
        out.push(((*k)?, int(*c)));
    }
    Some(Equation::new(table, out, Rational::zero()))
}

fn s(a: PointId, b: PointId) -> Option<VarKey> {
    VarKey::seg(a, b)
}

/// `|s1| - |s2|` with zero-length segments dropped (valid in Len and SqLen).
fn diff(table: Table, a: PointId, b: PointId, c: PointId, d: PointId) -> Equation {
    let terms: Vec<(VarKey, Rational)> = [(s(a, b), 1), (s(c, d), -1)]
        .into_iter()
        .filter_map(|(k, c)| k.map(|k| (k, int(c))))
        .collect();
    Equation::new(table, terms, Rational::zero())
}

/// ab perpendicular to cd, through squared lengths:
/// |ac|^2 - |ad|^2 = |bc|^2 - |bd|^2.
fn perpendicularity(a: PointId, b: PointId, c: PointId, d: PointId) -> Equation {
    let terms: Vec<(VarKey, Rational)> = [(s(a, c), 1), (s(a, d), -1), (s(b, c), -1), (s(b, d), 1)]
        .into_iter()
        .filter_map(|(k, c)| k.map(|k| (k, int(c))))
        .collect();
    Equation::new(Table::SqLen, terms, Rational::zero())
}

fn corner(l1: (PointId, PointId), l2: (PointId, PointId)) -> Option<(PointId, PointId, PointId)> {
    for (v, x) in [(l1.0, l1.1), (l1.1, l1.0)] {
        for (w, y) in [(l2.0, l2.1), (l2.1, l2.0)] {
            if v == w && x != y && x != v && y != v {
                return Some((x, v, y));
            }
        }
    }
    None
}

fn sine(t: Option<(PointId, PointId, PointId)>) -> Option<VarKey> {
    let (x, v, y) = t?;
    VarKey::sin(x, v, y)
}

/// Every equation the checker accepts as a consequence of `st`. Sine
/// equations are included unconditionally; their triangles are vetted
/// separately.
fn consequences(st: &Statement, n: usize) -> Vec<Equation> {
    let mut out = Vec::new();
    match st {
        Statement::Cong([a, b, c, d]) => {
            out.push(diff(Table::Len, *a, *b, *c, *d));
            out.push(diff(Table::SqLen, *a, *b, *c, *d));
            out.extend(lin(Table::LogLen, &[(1, s(*a, *b)), (-1, s(*c, *d))]));
        }
        Statement::Perp([a, b, c, d]) => {
            out.push(perpendicularity(*a, *b, *c, *d));
            out.extend(sine(corner((*a, *b), (*c, *d))).map(|k| Equation::new(Table::LogLen, [(k, int(1))], int(0))));
        }
        Statement::Midpoint([m, a, b]) => {
            out.extend(lin(Table::Len, &[(1, s(*a, *m)), (-1, s(*m, *b))]));
            out.extend(lin(Table::Len, &[(1, s(*a, *b)), (-2, s(*a, *m))]));
            out.extend(lin(Table::SqLen, &[(1, s(*a, *m)), (-1, s(*m, *b))]));
            out.extend(lin(Table::SqLen, &[(1, s(*a, *b)), (-4, s(*a, *m))]));
            out.extend(lin(Table::LogLen, &[(1, s(*a, *m)), (-1, s(*m, *b))]));
        }
        Statement::EqRatio([a, b, c, d, e, f, g, h]) => {
            out.extend(lin(
                Table::LogLen,
                &[(1, s(*a, *b)), (-1, s(*c, *d)), (-1, s(*e, *f)), (1, s(*g, *h))],
            ));
        }
        Statement::EqAngle(x) => {
            let l = |i: usize| (x[2 * i], x[2 * i + 1]);
            for ((p, q), (r, t)) in [((0, 1), (2, 3)), ((0, 2), (1, 3))] {
                if let (Some(k1), Some(k2)) = (sine(corner(l(p), l(q))), sine(corner(l(r), l(t)))) {
                    out.push(Equation::new(Table::LogLen, [(k1, int(1)), (k2, int(-1))], int(0)));
                }
            }
        }
        Statement::Coll([x, y, z]) => {
            for p in 0..n {
                let p = PointId::from(p);
                if [x, y, z].contains(&&p) {
                    continue;
                }
                for (v, o1, o2) in [(x, y, z), (y, z, x), (z, x, y)] {
                    if let (Some(k1), Some(k2)) = (VarKey::sin(p, *v, *o1), VarKey::sin(p, *v, *o2)) {
                        out.push(Equation::new(Table::LogLen, [(k1, int(1)), (k2, int(-1))], int(0)));
                    }
                }
            }
        }
        Statement::AREq(e) => out.push(e.clone()),
        Statement::Cyclic(_) | Statement::Para(_) => {}
    }
    out.retain(|e| !e.is_tautology());
    out
}

/// Sufficient equation sets for `st`.
fn sufficient(st: &Statement) -> Vec<Vec<Equation>> {
    let alts: Vec<Vec<Equation>> = match st {
        Statement::Cong([a, b, c, d]) => {
            let mut v = vec![
                vec![diff(Table::Len, *a, *b, *c, *d)],
                vec![diff(Table::SqLen, *a, *b, *c, *d)],
            ];
            if let Some(e) = lin(Table::LogLen, &[(1, s(*a, *b)), (-1, s(*c, *d))]) {
                v.push(vec![e]);
            }
            v
        }
        Statement::Perp([a, b, c, d]) => vec![vec![perpendicularity(*a, *b, *c, *d)]],
        Statement::Midpoint([m, a, b]) if m != a && m != b && a != b => {
            let pair = |t: Table, k: i64| {
                vec![
                    lin(t, &[(1, s(*a, *m)), (-1, s(*m, *b))]).unwrap(),
                    lin(t, &[(1, s(*a, *b)), (-k, s(*a, *m))]).unwrap(),
                ]
            };
            vec![pair(Table::Len, 2), pair(Table::SqLen, 4)]
        }
        Statement::EqRatio([a, b, c, d, e, f, g, h]) => lin(
            Table::LogLen,
            &[(1, s(*a, *b)), (-1, s(*c, *d)), (-1, s(*e, *f)), (1, s(*g, *h))],
        )
        .map(|e| vec![e])
        .into_iter()
        .collect(),
        Statement::AREq(e) => vec![vec![e.clone()]],
        _ => vec![],
    };
    alts.into_iter()
        .map(|v| v.into_iter().filter(|e| !e.is_tautology()).collect())
        .collect()
}

/// `|bc| / sin A = |ca| / sin B = |ab| / sin C` in logarithms.
fn sines_of(t: [PointId; 3]) -> Vec<Equation> {
    let [a, b, c] = t;
    let (Some(sa), Some(sb), Some(sc)) = (VarKey::sin(b, a, c), VarKey::sin(a, b, c), VarKey::sin(a, c, b)) else {
        return vec![];
    };
    let (Some(bc), Some(ca), Some(ab)) = (s(b, c), s(c, a), s(a, b)) else {
        return vec![];
    };
    let pair = |l1, s1, l2, s2| Equation::new(Table::LogLen, [(l1, int(1)), (s1, int(-1)), (l2, int(-1)), (s2, int(1))], int(0));
    vec![pair(bc, sa, ca, sb), pair(ca, sb, ab, sc), pair(bc, sa, ab, sc)]
}

fn sines_ok(e: &Equation, c: &Coordinates) -> bool {
    e.terms().keys().all(|k| match *k {
        VarKey::Sin(x, v, y) => c.area2(x, v, y).abs() > SINE_AREA,
        VarKey::Seg(..) => true,
    })
}

/// Exact `sum(coef * eq)`.
fn combine(parts: &[(&Rational, &Equation)]) -> Option<(Table, Terms, Rational)> {
    let table = parts.first()?.1.table();
    let mut terms: Terms = BTreeMap::new();
    let mut constant = Rational::zero();
    for (coef, eq) in parts {
        if eq.table() != table {
            return None;
        }
        for (k, v) in eq.terms() {
            let e = terms.entry(*k).or_insert_with(Rational::zero);
            *e += *coef * v;
        }
        constant += *coef * eq.constant();
    }
    terms.retain(|_, v| !v.is_zero());
    Some((table, terms, constant))
}

fn relabel(pattern: &Statement, binding: &[PointId]) -> Option<Statement> {
    let look = |p: PointId| binding.get(p.index()).copied();
    let st = match pattern {
        Statement::AREq(e) => {
            let mut terms = Vec::new();
            for (k, c) in e.terms() {
                let key = match *k {
                    VarKey::Seg(a, b) => VarKey::seg(look(a)?, look(b)?)?,
                    VarKey::Sin(x, v, y) => VarKey::sin(look(x)?, look(v)?, look(y)?)?,
                };
                terms.push((key, c.clone()));
            }
            Statement::AREq(Equation::new(e.table(), terms, e.constant().clone()))
        }
        other => {
            let args: Vec<PointId> = other.args().iter().map(|p| look(*p)).collect::<Option<_>>()?;
            Statement::from_args(other.kind(), &args)?
        }
    };
    Some(canonicalize(&st))
}

struct Checker<'a> {
    proof: &'a Proof,
    problem: &'a Problem,
    rules: HashMap<&'a str, &'a Rule>,
    eqs: HashMap<u32, &'a ProofEquation>,
    diagram: Coordinates,
}

impl Checker<'_> {
    fn statement_ok(&self, st: &Statement) -> Result<(), String> {
        let n = self.problem.num_points();
        if st.points().iter().any(|p| p.index() >= n) {
            return Err("statement mentions an unknown point".into());
        }
        if &canonicalize(st) != st {
            return Err("statement is not in canonical form".into());
        }
        Ok(())
    }

    fn given(&self, st: &Statement, k: usize) -> Result<(), String> {
        let con = self
            .problem
            .constructions()
            .get(k)
            .ok_or_else(|| format!("construction {k} does not exist"))?;
        if con.kind.implied(con.out, &con.inputs).contains(st) {
            Ok(())
        } else {
            Err(format!("not implied by construction {k}"))
        }
    }

    fn rule(&self, i: usize, st: &Statement, id: &str, binding: &[PointId]) -> Result<(), String> {
        let rule = self.rules.get(id).ok_or_else(|| format!("unknown rule `{id}`"))?;
        if binding.len() != rule.vars.len() {
            return Err(format!("rule `{id}` expects {} variables", rule.vars.len()));
        }
        for (j, p) in binding.iter().enumerate() {
            if p.index() >= self.problem.num_points() || binding[..j].contains(p) {
                return Err(format!("rule `{id}`: binding is not injective or out of range"));
            }
        }
        let concl = relabel(&rule.conclusion, binding).ok_or("conclusion does not instantiate")?;
        if &concl != st {
            return Err(format!("rule `{id}` concludes something else under this binding"));
        }
        let dep_statements: Vec<&Statement> = self.proof.steps[i].deps.iter().map(|d| &self.proof.steps[*d].statement).collect();
        for h in &rule.hypotheses {
            let h = relabel(h, binding).ok_or("hypothesis does not instantiate")?;
            if !dep_statements.contains(&&h) {
                return Err(format!("rule `{id}`: hypothesis {h} is not among the dependencies"));
            }
        }
        Ok(())
    }

    fn cited(&self, i: usize, id: u32) -> Result<&Equation, String> {
        let pe = self.eqs.get(&id).ok_or_else(|| format!("certificate cites missing equation {id}"))?;
        match pe.source {
            EquationSource::Step(k) => {
                if k >= i || !self.proof.steps[i].deps.contains(&k) {
                    return Err(format!("equation {id} comes from step {k}, which is not a dependency"));
                }
                let n = self.problem.num_points();
                if !consequences(&self.proof.steps[k].statement, n).contains(&pe.equation) {
                    return Err(format!("equation {id} does not follow from step {k}"));
                }
            }
            EquationSource::LawOfSines(t) => {
                if t.iter().any(|p| p.index() >= self.problem.num_points()) {
                    return Err("law of sines over unknown points".into());
                }
                if !sines_of(t).contains(&pe.equation) {
                    return Err(format!("equation {id} is not a law of sines instance"));
                }
            }
        }
        if !sines_ok(&pe.equation, &self.diagram) {
            return Err(format!("equation {id} uses the sine of a degenerate angle"));
        }
        Ok(&pe.equation)
    }

    fn algebra(&self, i: usize, st: &Statement, certs: &[crate::ar::Certificate]) -> Result<(), String> {
        if certs.is_empty() {
            return Err("no certificates".into());
        }
        let mut targets = Vec::new();
        for (ci, cert) in certs.iter().enumerate() {
            let mut parts = Vec::new();
            for (id, coef) in &cert.combination {
                parts.push((coef, self.cited(i, id.0)?));
            }
            let (table, terms, constant) = combine(&parts).ok_or_else(|| format!("certificate {ci} mixes tables or is empty"))?;
            let target = &cert.target;
            if table != target.table() || &terms != target.terms() || &constant != target.constant() {
                return Err(format!("certificate {ci} does not sum to its target"));
            }
            targets.push(target.clone());
        }
        targets.sort();
        let ok = sufficient(st).into_iter().any(|mut alt| {
            alt.sort();
            alt == targets
        });
        if ok {
            Ok(())
        } else {
            Err("certified equations do not establish the statement".into())
        }
    }

    fn run(&self) -> Result<(), String> {
        let steps = &self.proof.steps;
        if self.proof.goal != *self.problem.goal() {
            return Err("proof goal differs from the problem goal".into());
        }
        let last = steps.last().ok_or("empty proof")?;
        if last.statement != self.proof.goal {
            return Err("last step is not the goal".into());
        }
        for (i, step) in steps.iter().enumerate() {
            let fail = |m: String| format!("step {i}: {m}");
            if step.index != i {
                return Err(fail(format!("index {} out of order", step.index)));
            }
            for &d in &step.deps {
                if d >= i {
                    return Err(fail(format!("dependency {d} does not precede the step")));
                }
            }
            self.statement_ok(&step.statement).map_err(fail)?;
            match &step.justification {
                Justification::Given { construction } => self.given(&step.statement, *construction),
                Justification::Rule { rule, binding } => self.rule(i, &step.statement, rule, binding),
                Justification::Ar { certificates } => self.algebra(i, &step.statement, certificates),
            }
            .map_err(fail)?;
            if !numeric_holds(&step.statement, &self.diagram, TAU_CHECK) {
                return Err(fail("statement is false on an independent diagram".into()));
            }
        }
        Ok(())
    }
}

/// Checks `proof` against `problem` and `catalog`; the error is the first
/// failure found.
pub fn check_proof(proof: &Proof, problem: &Problem, catalog: &[Rule]) -> Result<(), String> {
    let diagram = build_diagram(problem, CHECK_SEED).map_err(|e| format!("cannot sample a diagram: {e}"))?;
    let checker = Checker {
        proof,
        problem,
        rules: catalog.iter().map(|r| (r.id.as_str(), r)).collect(),
        eqs: proof.equations.iter().map(|e| (e.id.0, e)).collect(),
        diagram,
    };
    if checker.eqs.len() != proof.equations.len() {
        return Err("duplicate equation ids".into());
    }
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| checker.run()))
        .unwrap_or_else(|_| Err("malformed proof".into()))
}

/// Whether `proof` checks.
pub fn verify_proof(proof: &Proof, problem: &Problem, catalog: &[Rule]) -> bool {
    check_proof(proof, problem, catalog).is_ok()
}
