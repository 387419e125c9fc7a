//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use ddar::ar::{Equation, Rational, Table, VarKey};
use ddar::cli::{Manifest, ManifestEntry};
use ddar::diagram::{numeric_holds, Coordinates};
use ddar::engine::{Justification, Proof};
use ddar::geometry::{parse_problem, PointId, Problem, Statement};
use ddar::matcher::{
    bisector_statement, canonical_similar, make_instance, normalize_instances, similarity_statements, Bisector,
    ConfigSet, Rule, RuleInstance,
};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub struct CorpusProblem {
    pub name: String,
    pub path: PathBuf,
    pub problem: Problem,
    pub entry: ManifestEntry,
}

pub fn corpus() -> Vec<CorpusProblem> {
    let dir = corpus_dir();
    let manifest = Manifest::load(&dir.join("manifest.json")).expect("manifest");
    manifest
        .problems
        .into_iter()
        .map(|entry| {
            let path = dir.join(&entry.file);
            let text = fs::read_to_string(&path).expect("corpus file");
            CorpusProblem {
                name: entry.file.trim_end_matches(".txt").to_string(),
                problem: parse_problem(&text).expect("corpus parses"),
                path,
                entry,
            }
        })
        .collect()
}

fn pid(i: usize) -> PointId {
    PointId(i as u16)
}

// ---------------------------------------------------------------------------
// random problems

const NAMES: &str = "abcdefghijklmnopqrstuvwxyz";

fn pick_distinct<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

/// A syntactically valid problem with `n` points (4 <= n <= 26) and a goal
/// that need not be true.
pub fn random_problem_text<R: Rng>(rng: &mut R, n: usize) -> String {
    let name = |i: usize| NAMES[i..i + 1].to_string();
    let mut lines = Vec::new();
    for i in 0..3.min(n) {
        lines.push(format!("{} = free", name(i)));
    }
    for i in 3..n {
        let args = |rng: &mut R, k: usize| -> String {
            pick_distinct(rng, i, k).into_iter().map(name).collect::<Vec<_>>().join(" ")
        };
        let body = match rng.gen_range(0..13) {
            0 => "free".to_string(),
            1 => format!("midpoint {}", args(rng, 2)),
            2 => format!("on_line {}", args(rng, 2)),
            3 => format!("on_circle {}", args(rng, 2)),
            4 if i >= 3 => format!("foot {}", args(rng, 3)),
            5 => format!("circumcenter {}", args(rng, 3)),
            6 if i >= 4 => format!("intersect_ll {}", args(rng, 4)),
            7 => format!("reflect {}", args(rng, 2)),
            8 => format!("reflect {}", args(rng, 3)),
            9 => format!("parallel {}", args(rng, 3)),
            10 => format!("perpendicular {}", args(rng, 3)),
            11 if i >= 4 => format!("intersect_lc {}", args(rng, 4)),
            _ => format!("midpoint {}", args(rng, 2)),
        };
        lines.push(format!("{} = {body}", name(i)));
    }
    let pts = |rng: &mut R, k: usize| -> String {
        pick_distinct(rng, n, k).into_iter().map(name).collect::<Vec<_>>().join(" ")
    };
    let goal = match rng.gen_range(0..9) {
        0 => format!("coll {}", pts(rng, 3)),
        1 => format!("cyclic {}", pts(rng, 4)),
        2 => format!("para {}", pts(rng, 4)),
        3 => format!("perp {}", pts(rng, 4)),
        4 => format!("cong {}", pts(rng, 4)),
        5 => format!("midpoint {}", pts(rng, 3)),
        6 => {
            let a = pick_distinct(rng, n, 4);
            let b = pick_distinct(rng, n, 4);
            let s: Vec<String> = a.into_iter().chain(b).map(name).collect();
            format!("eqangle {}", s.join(" "))
        }
        7 => {
            let a = pick_distinct(rng, n, 4);
            let b = pick_distinct(rng, n, 4);
            let s: Vec<String> = a.into_iter().chain(b).map(name).collect();
            format!("eqratio {}", s.join(" "))
        }
        _ => {
            let a = pick_distinct(rng, n, 4);
            format!(
                "areq sqlen {} {} {} {} {} {} = {}",
                rng.gen_range(1..5),
                name(a[0]),
                name(a[1]),
                -rng.gen_range(1..5),
                name(a[2]),
                name(a[3]),
                rng.gen_range(-3..4)
            )
        }
    };
    lines.push(format!("? {goal}"));
    lines.join("\n") + "\n"
}

pub fn random_problem<R: Rng>(rng: &mut R, n: usize) -> Problem {
    loop {
        let text = random_problem_text(rng, n);
        if let Ok(p) = parse_problem(&text) {
            return p;
        }
    }
}

// ---------------------------------------------------------------------------
// brute-force configuration detection

fn two_segments(a: usize, b: usize, c: usize, d: usize) -> bool {
    let (mut s, mut t) = ([a, b], [c, d]);
    s.sort();
    t.sort();
    a != b && c != d && s != t
}

/// Every family member by trying all point tuples.
pub fn brute_force_configurations(c: &Coordinates, tol: f64) -> ConfigSet {
    let n = c.len();
    let mut out = ConfigSet::default();
    let holds = |s: &Statement| numeric_holds(s, c, tol);
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                if a == b || b == d || a == d {
                    continue;
                }
                let s = Statement::coll(pid(a), pid(b), pid(d));
                if holds(&s) {
                    out.coll.insert(s);
                }
                let m = Statement::midpoint(pid(a), pid(b), pid(d));
                if holds(&m) {
                    out.midpoint.insert(m);
                }
                for e in 0..n {
                    if [a, b, d].contains(&e) {
                        continue;
                    }
                    let s = Statement::cyclic(pid(a), pid(b), pid(d), pid(e));
                    if holds(&s) {
                        out.cyclic.insert(s);
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                for e in 0..n {
                    if !two_segments(a, b, d, e) {
                        continue;
                    }
                    let (pa, pb, pd, pe) = (pid(a), pid(b), pid(d), pid(e));
                    for (s, set) in [
                        (Statement::para(pa, pb, pd, pe), &mut out.para),
                        (Statement::perp(pa, pb, pd, pe), &mut out.perp),
                        (Statement::cong(pa, pb, pd, pe), &mut out.cong),
                    ] {
                        if holds(&s) {
                            set.insert(s);
                        }
                    }
                }
            }
        }
    }

    let mut tris = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                if !holds(&Statement::coll(pid(a), pid(b), pid(d))) {
                    tris.push([pid(a), pid(b), pid(d)]);
                }
            }
        }
    }
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for (i, t1) in tris.iter().enumerate() {
        for t2 in &tris[i + 1..] {
            for p in PERMS {
                let u = [t2[p[0]], t2[p[1]], t2[p[2]]];
                if similarity_statements(*t1, u).iter().all(|s| holds(s)) {
                    let reflected = (c.area2(t1[0], t1[1], t1[2]) > 0.0) != (c.area2(u[0], u[1], u[2]) > 0.0);
                    out.similar.insert(canonical_similar(*t1, u, reflected));
                }
            }
        }
    }

    for a in 0..n {
        for x in 0..n {
            for y in x + 1..n {
                if a == x || a == y || holds(&Statement::coll(pid(a), pid(x), pid(y))) {
                    continue;
                }
                for d in 0..n {
                    if [a, x, y].contains(&d) {
                        continue;
                    }
                    let b = Bisector {
                        vertex: pid(a),
                        sides: [pid(x), pid(y)],
                        point: pid(d),
                    };
                    if holds(&bisector_statement(&b)) {
                        out.bisectors.insert(b);
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// brute-force matching

fn bindings(n: usize, k: usize, prefix: &mut Vec<PointId>, f: &mut dyn FnMut(&[PointId])) {
    if prefix.len() == k {
        f(prefix);
        return;
    }
    for p in 0..n {
        let p = pid(p);
        if prefix.contains(&p) {
            continue;
        }
        prefix.push(p);
        bindings(n, k, prefix, f);
        prefix.pop();
    }
}

/// Every injective binding of every rule whose hypotheses and conclusion hold.
pub fn brute_force_instances(catalog: &[Rule], c: &Coordinates, tol: f64) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    for rule in catalog {
        let holds = |pat: &Statement, b: &[PointId]| {
            Rule::instantiate(pat, b).is_some_and(|s| numeric_holds(&s, c, tol))
        };
        bindings(c.len(), rule.vars.len(), &mut Vec::new(), &mut |b| {
            if rule.hypotheses.iter().all(|h| holds(h, b)) && holds(&rule.conclusion, b) {
                if let Some(inst) = make_instance(rule, b) {
                    out.push(inst);
                }
            }
        });
    }
    normalize_instances(out)
}

// ---------------------------------------------------------------------------
// batch elimination

pub type Row = (VarKey, BTreeMap<VarKey, Rational>, Rational);

/// Dense Gauss-Jordan elimination of `eqs`. Returns the monic reduced rows
/// sorted by pivot, or `None` when the system is inconsistent.
pub fn batch_rref(eqs: &[Equation]) -> Option<Vec<Row>> {
    let cols: Vec<VarKey> = eqs
        .iter()
        .flat_map(|e| e.terms().keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let w = cols.len();
    let mut m: Vec<Vec<Rational>> = eqs
        .iter()
        .map(|e| {
            let mut row = vec![Rational::zero(); w + 1];
            for (k, v) in e.terms() {
                row[cols.binary_search(k).unwrap()] = v.clone();
            }
            row[w] = e.constant().clone();
            row
        })
        .collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..w {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=w {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[w].is_zero()) {
        return None;
    }
    Some(
        pivots
            .iter()
            .enumerate()
            .map(|(i, &col)| {
                let terms = (0..w)
                    .filter(|&j| !m[i][j].is_zero())
                    .map(|j| (cols[j], m[i][j].clone()))
                    .collect();
                (cols[col], terms, m[i][w].clone())
            })
            .collect(),
    )
}

/// A random equation over `vars` with entries whose numerators and
/// denominators are at most 1000 in magnitude.
pub fn random_equation<R: Rng>(rng: &mut R, table: Table, vars: &[VarKey], constants: bool) -> Equation {
    let q = |rng: &mut R| {
        let mut num = 0i64;
        while num == 0 {
            num = rng.gen_range(-1000..=1000);
        }
        Rational::new(num.into(), rng.gen_range(1i64..=1000).into())
    };
    let k = rng.gen_range(1..=4.min(vars.len()));
    let terms: Vec<(VarKey, Rational)> = vars.choose_multiple(rng, k).map(|v| (*v, q(rng))).collect();
    let constant = if constants && rng.gen_bool(0.3) {
        q(rng)
    } else {
        Rational::zero()
    };
    Equation::new(table, terms, constant)
}

/// Distinct segment variables over enough points for `k` of them.
pub fn segment_vars(k: usize) -> Vec<VarKey> {
    let mut out = Vec::new();
    for a in 0..12 {
        for b in a + 1..12 {
            out.push(VarKey::seg(pid(a), pid(b)).unwrap());
        }
    }
    out.truncate(k);
    out
}

// ---------------------------------------------------------------------------
// certificates

/// Re-sums a certificate's combination over the proof's cited equations with
/// plain map arithmetic and compares with the target.
pub fn replay_certificate(proof: &Proof, target: &Equation, combination: &BTreeMap<ddar::ar::EqId, Rational>) -> bool {
    let mut terms: BTreeMap<VarKey, Rational> = BTreeMap::new();
    let mut constant = Rational::zero();
    for (id, coef) in combination {
        let Some(e) = proof.equations.iter().find(|e| e.id == *id) else {
            return false;
        };
        if e.equation.table() != target.table() {
            return false;
        }
        for (k, v) in e.equation.terms() {
            *terms.entry(*k).or_insert_with(Rational::zero) += coef * v;
        }
        constant += coef * e.equation.constant();
    }
    terms.retain(|_, v| !v.is_zero());
    terms == *target.terms() && constant == *target.constant()
}

/// Number of certificates in a proof and how many replay.
pub fn replay_all(proof: &Proof) -> (usize, usize) {
    let mut total = 0;
    let mut ok = 0;
    for step in &proof.steps {
        if let Justification::Ar { certificates } = &step.justification {
            for c in certificates {
                total += 1;
                ok += usize::from(replay_certificate(proof, &c.target, &c.combination));
            }
        }
    }
    (total, ok)
}

/// `x` rounded away from zero, for readable tampering.
pub fn bump(x: &Rational, delta: i64) -> Rational {
    let d = Rational::from_integer(delta.into());
    if x.is_negative() {
        x - d
    } else {
        x + d
    }
}
