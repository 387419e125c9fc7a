//! Enumeration of numerically true rule instances.
//!
//! Each rule is matched by a backtracking join over its hypotheses. A
//! hypothesis is satisfied from the configuration index of its kind when
//! possible, from sorted angle/ratio tables for `eqangle`/`eqratio`, and by
//! plain enumeration otherwise. Every candidate is confirmed with
//! `numeric_holds`, so the result coincides with trying every injective
//! binding.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{circular_window, linear_window, segments, ConfigSet};
use super::rule::Rule;
use crate::diagram::{numeric_holds, Coordinates};
use crate::geometry::{symmetry_group, Kind, PointId, Statement};

/// A rule with its variables bound to points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleInstance {
    pub rule: String,
    /// `binding[var]` for the rule's variables in declaration order.
    pub binding: Vec<PointId>,
    /// Canonical, sorted, without duplicates.
    pub hypotheses: Vec<Statement>,
    pub conclusion: Statement,
}

impl RuleInstance {
    fn key(&self) -> (&str, &Statement, &[Statement]) {
        (&self.rule, &self.conclusion, &self.hypotheses)
    }
}

impl PartialOrd for RuleInstance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RuleInstance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key()).then_with(|| self.binding.cmp(&other.binding))
    }
}

/// Builds an instance from a full binding, or `None` when the result is
/// degenerate or its conclusion is already a hypothesis.
pub fn make_instance(rule: &Rule, binding: &[PointId]) -> Option<RuleInstance> {
    let conclusion = Rule::instantiate(&rule.conclusion, binding)?;
    if conclusion.equation().is_some_and(|e| e.is_tautology()) {
        return None;
    }
    let mut hypotheses = Vec::with_capacity(rule.hypotheses.len());
    for h in &rule.hypotheses {
        hypotheses.push(Rule::instantiate(h, binding)?);
    }
    hypotheses.sort();
    hypotheses.dedup();
    if hypotheses.contains(&conclusion) {
        return None;
    }
    Some(RuleInstance {
        rule: rule.id.clone(),
        binding: binding.to_vec(),
        hypotheses,
        conclusion,
    })
}

type Binding = Vec<Option<PointId>>;

/// Ordered segment pairs sorted by a key (line angle or log length ratio).
struct PairTable {
    keys: Vec<f64>,
    pairs: Vec<((PointId, PointId), (PointId, PointId))>,
}

impl PairTable {
    fn build(c: &Coordinates, key: impl Fn(&(PointId, PointId), &(PointId, PointId)) -> f64) -> PairTable {
        let segs = segments(c.len());
        let mut rows = Vec::with_capacity(segs.len() * segs.len());
        for s in &segs {
            for t in &segs {
                if s != t {
                    rows.push((key(s, t), (*s, *t)));
                }
            }
        }
        rows.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        PairTable {
            keys: rows.iter().map(|r| r.0).collect(),
            pairs: rows.into_iter().map(|r| r.1).collect(),
        }
    }
}

/// Extra window width absorbing rounding between raw and canonical forms.
const SLACK: f64 = 1e-9;

struct Matcher<'a> {
    c: &'a Coordinates,
    cfg: &'a ConfigSet,
    tol: f64,
    n: usize,
    angles: OnceLock<PairTable>,
    ratios: OnceLock<PairTable>,
}

fn vars_of(pat: &Statement) -> Vec<usize> {
    let mut v: Vec<usize> = pat.points().iter().map(|p| p.index()).collect();
    v.sort();
    v.dedup();
    v
}

fn all_distinct(xs: &[PointId]) -> bool {
    xs.iter().enumerate().all(|(i, x)| !xs[..i].contains(x))
}

/// Whether every injective instance of `pat` lies in its index family.
fn indexable(pat: &Statement) -> bool {
    let a = pat.args();
    match pat.kind() {
        Kind::Coll | Kind::Cyclic | Kind::Midpoint => all_distinct(a),
        Kind::Para | Kind::Perp | Kind::Cong => {
            let (mut s, mut t) = ([a[0], a[1]], [a[2], a[3]]);
            s.sort();
            t.sort();
            a[0] != a[1] && a[2] != a[3] && s != t
        }
        _ => false,
    }
}

/// Whether the halves of an angle or ratio equality can use a pair table.
fn tabular(pat: &Statement) -> bool {
    let a = pat.args();
    let ok_half = |h: &[PointId]| {
        let (mut s, mut t) = ([h[0], h[1]], [h[2], h[3]]);
        s.sort();
        t.sort();
        h[0] != h[1] && h[2] != h[3] && s != t
    };
    matches!(pat.kind(), Kind::EqAngle | Kind::EqRatio) && ok_half(&a[..4]) && ok_half(&a[4..])
}

fn unify(pattern: &[PointId], target: &[PointId], b: &Binding, used: &[bool]) -> Option<Binding> {
    let mut out = b.clone();
    let mut newly: Vec<PointId> = Vec::new();
    for (v, &p) in pattern.iter().zip(target) {
        match out[v.index()] {
            Some(q) if q == p => {}
            Some(_) => return None,
            None => {
                if used[p.index()] || newly.contains(&p) {
                    return None;
                }
                out[v.index()] = Some(p);
                newly.push(p);
            }
        }
    }
    Some(out)
}

fn used_points(b: &Binding, n: usize) -> Vec<bool> {
    let mut used = vec![false; n];
    for p in b.iter().flatten() {
        used[p.index()] = true;
    }
    used
}

fn full(b: &Binding) -> Vec<PointId> {
    b.iter().map(|p| p.unwrap_or(PointId(u16::MAX))).collect()
}

impl<'a> Matcher<'a> {
    fn holds_under(&self, pat: &Statement, b: &Binding) -> bool {
        match Rule::instantiate(pat, &full(b)) {
            Some(s) => numeric_holds(&s, self.c, self.tol),
            None => false,
        }
    }

    fn family(&self, kind: Kind) -> &BTreeSet<Statement> {
        match kind {
            Kind::Coll => &self.cfg.coll,
            Kind::Cyclic => &self.cfg.cyclic,
            Kind::Para => &self.cfg.para,
            Kind::Perp => &self.cfg.perp,
            Kind::Cong => &self.cfg.cong,
            Kind::Midpoint => &self.cfg.midpoint,
            _ => unreachable!("no index for {kind:?}"),
        }
    }

    /// Every injective extension of `b` over `vars`.
    fn enumerate(&self, b: &Binding, vars: &[usize], out: &mut Vec<Binding>) {
        let Some((&v, rest)) = vars.split_first() else {
            out.push(b.clone());
            return;
        };
        if b[v].is_some() {
            return self.enumerate(b, rest, out);
        }
        let used = used_points(b, self.n);
        for p in 0..self.n {
            if used[p] {
                continue;
            }
            let mut next = b.clone();
            next[v] = Some(PointId::from(p));
            self.enumerate(&next, rest, out);
        }
    }

    fn unbound(pat: &Statement, b: &Binding) -> usize {
        vars_of(pat).into_iter().filter(|&v| b[v].is_none()).count()
    }

    /// Rough number of candidate extensions, used only for ordering.
    fn cost(&self, pat: &Statement, b: &Binding) -> f64 {
        let u = Self::unbound(pat, b);
        if u == 0 {
            return 0.0;
        }
        let n = self.n as f64;
        if indexable(pat) {
            let g = symmetry_group(pat.kind()).len() as f64;
            return (self.family(pat.kind()).len() as f64 * g).max(1.0);
        }
        if tabular(pat) {
            let a = pat.args();
            let half_unbound = |h: &[PointId]| {
                let mut v: Vec<usize> = h.iter().map(|p| p.index()).filter(|&v| b[v].is_none()).collect();
                v.sort();
                v.dedup();
                v.len() as i32
            };
            let src = half_unbound(&a[..4]).min(half_unbound(&a[4..]));
            return n.powi(src) * 4.0 + 1.0;
        }
        n.powi(u as i32)
    }

    fn extend(&self, pat: &Statement, b: &Binding) -> Vec<Binding> {
        let mut out = Vec::new();
        if Self::unbound(pat, b) == 0 {
            if self.holds_under(pat, b) {
                out.push(b.clone());
            }
            return out;
        }
        if indexable(pat) {
            let used = used_points(b, self.n);
            let group = symmetry_group(pat.kind());
            for member in self.family(pat.kind()) {
                for g in group {
                    let target = member.permuted(g);
                    if let Some(nb) = unify(pat.args(), target.args(), b, &used) {
                        out.push(nb);
                    }
                }
            }
        } else if tabular(pat) {
            self.extend_tabular(pat, b, &mut out);
        } else {
            let mut cands = Vec::new();
            self.enumerate(b, &vars_of(pat), &mut cands);
            out.extend(cands.into_iter().filter(|nb| self.holds_under(pat, nb)));
        }
        out.sort();
        out.dedup();
        out
    }

    fn extend_tabular(&self, pat: &Statement, b: &Binding, out: &mut Vec<Binding>) {
        let a = pat.args();
        let bound_in = |h: &[PointId]| h.iter().filter(|p| b[p.index()].is_some()).count();
        let (src, other) = if bound_in(&a[4..]) > bound_in(&a[..4]) {
            (&a[4..], &a[..4])
        } else {
            (&a[..4], &a[4..])
        };
        let angle = pat.kind() == Kind::EqAngle;
        let table = if angle {
            self.angles.get_or_init(|| {
                PairTable::build(self.c, |s, t| self.c.line_angle(s.0, s.1, t.0, t.1))
            })
        } else {
            self.ratios.get_or_init(|| {
                PairTable::build(self.c, |s, t| self.c.length(s.0, s.1).ln() - self.c.length(t.0, t.1).ln())
            })
        };
        let mut src_vars: Vec<usize> = src.iter().map(|p| p.index()).collect();
        src_vars.sort();
        src_vars.dedup();
        let mut partial = Vec::new();
        self.enumerate(b, &src_vars, &mut partial);
        let w = self.tol + SLACK;
        for pb in partial {
            let pt = |i: usize| pb[src[i].index()].expect("source half bound");
            let key = if angle {
                self.c.line_angle(pt(0), pt(1), pt(2), pt(3))
            } else {
                self.c.length(pt(0), pt(1)).ln() - self.c.length(pt(2), pt(3)).ln()
            };
            let hits: Vec<usize> = if angle {
                circular_window(&table.keys, key, w, PI)
            } else {
                linear_window(&table.keys, key, w).collect()
            };
            let used = used_points(&pb, self.n);
            for k in hits {
                let ((s0, s1), (t0, t1)) = table.pairs[k];
                for target in [[s0, s1, t0, t1], [s1, s0, t0, t1], [s0, s1, t1, t0], [s1, s0, t1, t0]] {
                    if let Some(nb) = unify(other, &target, &pb, &used) {
                        if self.holds_under(pat, &nb) {
                            out.push(nb);
                        }
                    }
                }
            }
        }
    }

    fn match_rule(&self, rule: &Rule) -> Vec<RuleInstance> {
        if rule.vars.len() > self.n {
            return Vec::new();
        }
        let mut frontier: Vec<Binding> = vec![vec![None; rule.vars.len()]];
        let mut remaining: Vec<&Statement> = rule.hypotheses.iter().collect();
        while !remaining.is_empty() && !frontier.is_empty() {
            // cheapest next hypothesis given what the first binding has bound;
            // all bindings in the frontier bind the same variables
            let probe = &frontier[0];
            let (idx, _) = remaining
                .iter()
                .enumerate()
                .map(|(i, h)| (i, self.cost(h, probe)))
                .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)))
                .expect("non-empty");
            let pat = remaining.remove(idx);
            let mut next: Vec<Binding> = frontier.iter().flat_map(|b| self.extend(pat, b)).collect();
            next.sort();
            next.dedup();
            frontier = next;
        }
        let mut out = Vec::new();
        for b in frontier {
            let binding = full(&b);
            if !self.holds_under(&rule.conclusion, &b) {
                continue;
            }
            if let Some(inst) = make_instance(rule, &binding) {
                out.push(inst);
            }
        }
        out
    }
}

/// Deduplicates by (rule, hypotheses, conclusion), keeping the smallest
/// binding, and sorts.
pub fn normalize_instances(mut v: Vec<RuleInstance>) -> Vec<RuleInstance> {
    v.sort();
    v.dedup_by(|a, b| a.key() == b.key());
    v
}

/// All instances of `catalog` whose hypotheses and conclusion hold in `c`.
pub fn match_rules(cfg: &ConfigSet, catalog: &[Rule], c: &Coordinates, tol: f64) -> Vec<RuleInstance> {
    let m = Matcher {
        c,
        cfg,
        tol,
        n: c.len(),
        angles: OnceLock::new(),
        ratios: OnceLock::new(),
    };
    let all: Vec<RuleInstance> = catalog.par_iter().flat_map_iter(|r| m.match_rule(r)).collect();
    normalize_instances(all)
}
