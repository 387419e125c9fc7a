//! Constructive problem language.
//!
//! ```text
//! # comments run to end of line; `;` also separates items
//! a = free
//! b = free 1.5 0          # optional fixed coordinates
//! m = midpoint a b
//! ? coll m a b
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::statement::{canonicalize, Kind, Statement};
use super::PointId;
use crate::ar::{parse_rational, Equation, Table, VarKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: unknown constructor `{name}`")]
    UnknownConstructor { line: usize, name: String },
    #[error("line {line}: unknown predicate `{name}`")]
    UnknownPredicate { line: usize, name: String },
    #[error("line {line}: `{what}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        line: usize,
        what: String,
        expected: String,
        found: usize,
    },
    #[error("line {line}: undeclared point `{name}`")]
    UndeclaredPoint { line: usize, name: String },
    #[error("line {line}: point `{name}` is already declared")]
    DuplicatePoint { line: usize, name: String },
    #[error("line {line}: invalid point name `{name}`")]
    InvalidName { line: usize, name: String },
    #[error("line {line}: invalid number `{text}`")]
    InvalidNumber { line: usize, text: String },
    #[error("line {line}: degenerate arguments for `{what}`")]
    DegenerateArguments { line: usize, what: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: missing goal line `? <predicate> <args...>`")]
    MissingGoal { line: usize },
    #[error("line {line}: only one goal is allowed and it must come last")]
    MisplacedGoal { line: usize },
    #[error("invalid problem JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    /// A free point, optionally pinned to fixed coordinates.
    Free { at: Option<[f64; 2]> },
    /// `on_line a b`
    OnLine,
    /// `on_circle o a`: on the circle centered `o` through `a`.
    OnCircle,
    /// `midpoint a b`
    Midpoint,
    /// `foot p a b`: foot of the perpendicular from `p` to `ab`.
    Foot,
    /// `circumcenter a b c`
    Circumcenter,
    /// `intersect_ll a b c d`: lines `ab` and `cd`.
    IntersectLineLine,
    /// `intersect_lc a b o p`: line `ab` and the circle centered `o` through `p`.
    IntersectLineCircle,
    /// `intersect_cc o p q r`: circles centered `o` through `p` and `q` through `r`.
    IntersectCircleCircle,
    /// `reflect p a b`: mirror image of `p` in line `ab`.
    ReflectLine,
    /// `reflect p a`: mirror image of `p` through point `a`.
    ReflectPoint,
    /// `parallel p a b`: a point on the line through `p` parallel to `ab`.
    ParallelThrough,
    /// `perpendicular p a b`: a point on the line through `p` perpendicular to `ab`.
    PerpendicularThrough,
}

impl ConstructionKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            ConstructionKind::Free { .. } => "free",
            ConstructionKind::OnLine => "on_line",
            ConstructionKind::OnCircle => "on_circle",
            ConstructionKind::Midpoint => "midpoint",
            ConstructionKind::Foot => "foot",
            ConstructionKind::Circumcenter => "circumcenter",
            ConstructionKind::IntersectLineLine => "intersect_ll",
            ConstructionKind::IntersectLineCircle => "intersect_lc",
            ConstructionKind::IntersectCircleCircle => "intersect_cc",
            ConstructionKind::ReflectLine | ConstructionKind::ReflectPoint => "reflect",
            ConstructionKind::ParallelThrough => "parallel",
            ConstructionKind::PerpendicularThrough => "perpendicular",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            ConstructionKind::Free { .. } => 0,
            ConstructionKind::OnLine | ConstructionKind::OnCircle | ConstructionKind::Midpoint => 2,
            ConstructionKind::ReflectPoint => 2,
            ConstructionKind::Foot
            | ConstructionKind::Circumcenter
            | ConstructionKind::ReflectLine
            | ConstructionKind::ParallelThrough
            | ConstructionKind::PerpendicularThrough => 3,
            ConstructionKind::IntersectLineLine
            | ConstructionKind::IntersectLineCircle
            | ConstructionKind::IntersectCircleCircle => 4,
        }
    }

    /// Index pairs of inputs that must be distinct for the construction to make sense.
    fn distinct_pairs(&self) -> &'static [(usize, usize)] {
        match self {
            ConstructionKind::Free { .. } => &[],
            ConstructionKind::OnLine | ConstructionKind::OnCircle | ConstructionKind::Midpoint => &[(0, 1)],
            ConstructionKind::ReflectPoint => &[(0, 1)],
            ConstructionKind::Foot | ConstructionKind::Circumcenter | ConstructionKind::ReflectLine => {
                &[(0, 1), (0, 2), (1, 2)]
            }
            // the line may pass through `a` or `b`
            ConstructionKind::ParallelThrough | ConstructionKind::PerpendicularThrough => &[(1, 2)],
            ConstructionKind::IntersectLineLine => &[(0, 1), (2, 3)],
            ConstructionKind::IntersectLineCircle => &[(0, 1), (2, 3)],
            ConstructionKind::IntersectCircleCircle => &[(0, 1), (2, 3), (0, 2)],
        }
    }

    /// The defining relations of a construction with output `x`.
    pub fn implied(&self, x: PointId, inp: &[PointId]) -> Vec<Statement> {
        use Statement as S;
        let mut out = match *self {
            ConstructionKind::Free { .. } => vec![],
            ConstructionKind::OnLine => vec![S::coll(x, inp[0], inp[1])],
            ConstructionKind::OnCircle => vec![S::cong(inp[0], x, inp[0], inp[1])],
            ConstructionKind::Midpoint => vec![
                S::coll(x, inp[0], inp[1]),
                S::cong(inp[0], x, x, inp[1]),
                S::midpoint(x, inp[0], inp[1]),
            ],
            ConstructionKind::Foot => vec![S::coll(x, inp[1], inp[2]), S::perp(inp[0], x, inp[1], inp[2])],
            ConstructionKind::Circumcenter => vec![
                S::cong(x, inp[0], x, inp[1]),
                S::cong(x, inp[1], x, inp[2]),
                S::cong(x, inp[0], x, inp[2]),
            ],
            ConstructionKind::IntersectLineLine => {
                vec![S::coll(x, inp[0], inp[1]), S::coll(x, inp[2], inp[3])]
            }
            ConstructionKind::IntersectLineCircle => {
                vec![S::coll(x, inp[0], inp[1]), S::cong(inp[2], x, inp[2], inp[3])]
            }
            ConstructionKind::IntersectCircleCircle => vec![
                S::cong(inp[0], x, inp[0], inp[1]),
                S::cong(inp[2], x, inp[2], inp[3]),
            ],
            ConstructionKind::ReflectLine => vec![
                S::perp(inp[0], x, inp[1], inp[2]),
                S::cong(inp[1], inp[0], inp[1], x),
                S::cong(inp[2], inp[0], inp[2], x),
            ],
            ConstructionKind::ReflectPoint => vec![
                S::coll(inp[1], inp[0], x),
                S::cong(inp[0], inp[1], inp[1], x),
                S::midpoint(inp[1], inp[0], x),
            ],
            ConstructionKind::ParallelThrough => vec![S::para(inp[0], x, inp[1], inp[2])],
            ConstructionKind::PerpendicularThrough => vec![S::perp(inp[0], x, inp[1], inp[2])],
        };
        out.sort();
        out.dedup();
        out
    }
}

/// One step `out = kind inputs...` with its defining facts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub kind: ConstructionKind,
    pub out: PointId,
    pub inputs: Vec<PointId>,
    pub implied: Vec<Statement>,
}

/// A constructive problem: points introduced in order plus a goal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Problem {
    names: Vec<String>,
    constructions: Vec<Construction>,
    goal: Statement,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s != "sin" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses a predicate `kw args...` whose point tokens are resolved by `resolve`.
/// The result is not canonicalized.
pub(crate) fn parse_statement_tokens<E>(
    tokens: &[&str],
    line: usize,
    mut resolve: impl FnMut(&str) -> Result<PointId, E>,
) -> Result<Statement, E>
where
    E: From<ParseError>,
{
    let kw = tokens.first().ok_or(ParseError::Syntax {
        line,
        message: "empty predicate".into(),
    })?;
    let kind = Kind::from_keyword(kw).ok_or_else(|| ParseError::UnknownPredicate {
        line,
        name: kw.to_string(),
    })?;
    if kind == Kind::AREq {
        return parse_equation_tokens(&tokens[1..], line, resolve).map(Statement::AREq);
    }
    let arity = kind.arity().unwrap();
    if tokens.len() - 1 != arity {
        return Err(ParseError::ArityMismatch {
            line,
            what: kw.to_string(),
            expected: arity.to_string(),
            found: tokens.len() - 1,
        }
        .into());
    }
    let mut args = Vec::with_capacity(arity);
    for t in &tokens[1..] {
        args.push(resolve(t)?);
    }
    Ok(Statement::from_args(kind, &args).expect("arity checked"))
}

/// `<table> (<coef> <p> <q> | <coef> sin <x> <v> <y>)* = <rhs>`
pub(crate) fn parse_equation_tokens<E>(
    tokens: &[&str],
    line: usize,
    mut resolve: impl FnMut(&str) -> Result<PointId, E>,
) -> Result<Equation, E>
where
    E: From<ParseError>,
{
    let syntax = |m: &str| ParseError::Syntax {
        line,
        message: m.to_string(),
    };
    let table = tokens
        .first()
        .and_then(|t| Table::from_keyword(t))
        .ok_or_else(|| syntax("areq needs a table: len, loglen or sqlen"))?;
    let mut i = 1;
    let mut terms = Vec::new();
    let rhs = loop {
        let tok = *tokens.get(i).ok_or_else(|| syntax("equation is missing `= <rhs>`"))?;
        if tok == "=" {
            let rhs = tokens.get(i + 1).ok_or_else(|| syntax("missing right-hand side"))?;
            if tokens.len() != i + 2 {
                return Err(syntax("trailing tokens after right-hand side").into());
            }
            break parse_rational(rhs).ok_or_else(|| ParseError::InvalidNumber {
                line,
                text: rhs.to_string(),
            })?;
        }
        let coef = parse_rational(tok).ok_or_else(|| ParseError::InvalidNumber {
            line,
            text: tok.to_string(),
        })?;
        let next = *tokens.get(i + 1).ok_or_else(|| syntax("dangling coefficient"))?;
        if next == "sin" {
            let pts = tokens.get(i + 2..i + 5).ok_or_else(|| syntax("sin needs three points"))?;
            let (x, v, y) = (resolve(pts[0])?, resolve(pts[1])?, resolve(pts[2])?);
            let key = VarKey::sin(x, v, y).ok_or_else(|| syntax("degenerate sine term"))?;
            terms.push((key, coef));
            i += 5;
        } else {
            let pts = tokens.get(i + 1..i + 3).ok_or_else(|| syntax("segment needs two points"))?;
            let (a, b) = (resolve(pts[0])?, resolve(pts[1])?);
            let key = VarKey::seg(a, b).ok_or_else(|| syntax("zero-length segment term"))?;
            terms.push((key, coef));
            i += 3;
        }
    };
    Ok(Equation::new(table, terms, -rhs))
}

fn split_items(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().flat_map(|(ln, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        content
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(move |s| (ln + 1, s))
    })
}

/// Parses the constructive problem language.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let mut builder = ProblemBuilder::default();
    let mut goal: Option<Statement> = None;
    let mut last_line = 0;
    for (line, item) in split_items(text) {
        last_line = line;
        if goal.is_some() {
            return Err(ParseError::MisplacedGoal { line });
        }
        if let Some(rest) = item.strip_prefix('?') {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            let st = parse_statement_tokens(&tokens, line, |n| builder.lookup(n, line))?;
            goal = Some(canonicalize(&st));
            continue;
        }
        let (lhs, rhs) = item.split_once('=').ok_or_else(|| ParseError::Syntax {
            line,
            message: format!("expected `<name> = <constructor> <args...>`, got `{item}`"),
        })?;
        let name = lhs.trim();
        let tokens: Vec<&str> = rhs.split_whitespace().collect();
        builder.add(name, &tokens, line)?;
    }
    let goal = goal.ok_or(ParseError::MissingGoal { line: last_line })?;
    Ok(builder.finish(goal))
}

#[derive(Default)]
struct ProblemBuilder {
    names: Vec<String>,
    index: HashMap<String, PointId>,
    constructions: Vec<Construction>,
}

impl ProblemBuilder {
    fn lookup(&self, name: &str, line: usize) -> Result<PointId, ParseError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ParseError::UndeclaredPoint {
                line,
                name: name.to_string(),
            })
    }

    fn add(&mut self, name: &str, tokens: &[&str], line: usize) -> Result<(), ParseError> {
        if !valid_name(name) {
            return Err(ParseError::InvalidName {
                line,
                name: name.to_string(),
            });
        }
        if self.index.contains_key(name) {
            return Err(ParseError::DuplicatePoint {
                line,
                name: name.to_string(),
            });
        }
        let kw = *tokens.first().ok_or_else(|| ParseError::Syntax {
            line,
            message: "missing constructor".into(),
        })?;
        let args = &tokens[1..];
        let kind = match kw {
            "free" => match args.len() {
                0 => ConstructionKind::Free { at: None },
                2 => {
                    let num = |t: &str| {
                        t.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| ParseError::InvalidNumber {
                                line,
                                text: t.to_string(),
                            })
                    };
                    ConstructionKind::Free {
                        at: Some([num(args[0])?, num(args[1])?]),
                    }
                }
                n => {
                    return Err(ParseError::ArityMismatch {
                        line,
                        what: kw.into(),
                        expected: "0 or 2".into(),
                        found: n,
                    })
                }
            },
            "reflect" => match args.len() {
                2 => ConstructionKind::ReflectPoint,
                3 => ConstructionKind::ReflectLine,
                n => {
                    return Err(ParseError::ArityMismatch {
                        line,
                        what: kw.into(),
                        expected: "2 or 3".into(),
                        found: n,
                    })
                }
            },
            "on_line" => ConstructionKind::OnLine,
            "on_circle" => ConstructionKind::OnCircle,
            "midpoint" => ConstructionKind::Midpoint,
            "foot" => ConstructionKind::Foot,
            "circumcenter" => ConstructionKind::Circumcenter,
            "intersect_ll" => ConstructionKind::IntersectLineLine,
            "intersect_lc" => ConstructionKind::IntersectLineCircle,
            "intersect_cc" => ConstructionKind::IntersectCircleCircle,
            "parallel" => ConstructionKind::ParallelThrough,
            "perpendicular" => ConstructionKind::PerpendicularThrough,
            other => {
                return Err(ParseError::UnknownConstructor {
                    line,
                    name: other.to_string(),
                })
            }
        };
        let inputs = if matches!(kind, ConstructionKind::Free { .. }) {
            vec![]
        } else {
            if args.len() != kind.arity() {
                return Err(ParseError::ArityMismatch {
                    line,
                    what: kw.into(),
                    expected: kind.arity().to_string(),
                    found: args.len(),
                });
            }
            args.iter()
                .map(|a| self.lookup(a, line))
                .collect::<Result<Vec<_>, _>>()?
        };
        self.push(name.to_string(), kind, inputs, line)
    }

    fn push(
        &mut self,
        name: String,
        kind: ConstructionKind,
        inputs: Vec<PointId>,
        line: usize,
    ) -> Result<(), ParseError> {
        if kind
            .distinct_pairs()
            .iter()
            .any(|&(i, j)| inputs[i] == inputs[j])
        {
            return Err(ParseError::DegenerateArguments {
                line,
                what: kind.keyword().into(),
            });
        }
        let out = PointId::from(self.names.len());
        let implied = kind.implied(out, &inputs);
        self.index.insert(name.clone(), out);
        self.names.push(name);
        self.constructions.push(Construction {
            kind,
            out,
            inputs,
            implied,
        });
        Ok(())
    }

    fn finish(self, goal: Statement) -> Problem {
        Problem {
            names: self.names,
            constructions: self.constructions,
            goal,
        }
    }
}

#[derive(Deserialize)]
struct ProblemJson {
    names: Vec<String>,
    constructions: Vec<Construction>,
    goal: Statement,
}

impl Problem {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, p: PointId) -> &str {
        &self.names[p.index()]
    }

    pub fn num_points(&self) -> usize {
        self.names.len()
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        (0..self.names.len()).map(PointId::from)
    }

    pub fn point(&self, name: &str) -> Option<PointId> {
        self.names.iter().position(|n| n == name).map(PointId::from)
    }

    pub fn constructions(&self) -> &[Construction] {
        &self.constructions
    }

    pub fn goal(&self) -> &Statement {
        &self.goal
    }

    /// Replaces the goal, canonicalizing it. Points must be declared.
    pub fn with_goal(mut self, goal: Statement) -> Option<Problem> {
        if goal.points().iter().any(|p| p.index() >= self.names.len()) {
            return None;
        }
        self.goal = canonicalize(&goal);
        Some(self)
    }

    /// All construction-implied statements with the index of their step.
    pub fn given(&self) -> Vec<(usize, Statement)> {
        let mut out: Vec<(usize, Statement)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, c) in self.constructions.iter().enumerate() {
            for s in &c.implied {
                if seen.insert(s.clone()) {
                    out.push((i, s.clone()));
                }
            }
        }
        out
    }

    /// Parses a single predicate using this problem's point names.
    pub fn parse_statement(&self, text: &str) -> Result<Statement, ParseError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let st = parse_statement_tokens(&tokens, 1, |n| {
            self.point(n).ok_or_else(|| ParseError::UndeclaredPoint {
                line: 1,
                name: n.to_string(),
            })
        })?;
        Ok(canonicalize(&st))
    }

    pub fn render(&self, s: &Statement) -> String {
        s.display_with(&self.names).to_string()
    }

    /// Serializes back to the problem language.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.constructions {
            write!(out, "{} = {}", self.names[c.out.index()], c.kind.keyword()).unwrap();
            if let ConstructionKind::Free { at: Some([x, y]) } = c.kind {
                write!(out, " {x} {y}").unwrap();
            }
            for p in &c.inputs {
                write!(out, " {}", self.names[p.index()]).unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "? {}", self.render(&self.goal)).unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    /// Loads the JSON form, re-deriving and checking every construction.
    pub fn from_json(text: &str) -> Result<Problem, ParseError> {
        let raw: ProblemJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        let mut b = ProblemBuilder::default();
        if raw.names.len() != raw.constructions.len() {
            return Err(ParseError::Json("one construction per point is required".into()));
        }
        for (i, (name, c)) in raw.names.iter().zip(&raw.constructions).enumerate() {
            let line = i + 1;
            if !valid_name(name) || b.index.contains_key(name) {
                return Err(ParseError::InvalidName {
                    line,
                    name: name.clone(),
                });
            }
            if c.out.index() != i || c.inputs.len() != c.kind.arity() {
                return Err(ParseError::Json(format!("construction {line} is malformed")));
            }
            if let Some(bad) = c.inputs.iter().find(|p| p.index() >= i) {
                return Err(ParseError::UndeclaredPoint {
                    line,
                    name: format!("#{}", bad.0),
                });
            }
            b.push(name.clone(), c.kind, c.inputs.clone(), line)?;
            if b.constructions[i].implied != c.implied {
                return Err(ParseError::Json(format!(
                    "construction {line} lists implied facts that differ from its definition"
                )));
            }
        }
        let goal = canonicalize(&raw.goal);
        if goal.points().iter().any(|p| p.index() >= raw.names.len()) {
            return Err(ParseError::Json("goal references an undeclared point".into()));
        }
        Ok(b.finish(goal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_problem() {
        let p = parse_problem("a = free; b = free; c = free; m = midpoint a b; ? coll m a b").unwrap();
        assert_eq!(p.num_points(), 4);
        let m = p.point("m").unwrap();
        let (a, b) = (p.point("a").unwrap(), p.point("b").unwrap());
        let implied = &p.constructions()[3].implied;
        assert!(implied.contains(&Statement::coll(m, a, b)));
        assert!(implied.contains(&Statement::cong(a, m, m, b)));
        assert_eq!(p.goal(), &Statement::coll(m, a, b));
    }

    #[test]
    fn undeclared_goal_point() {
        let err = parse_problem("a = free; ? coll a b c").unwrap_err();
        assert_eq!(
            err,
            ParseError::UndeclaredPoint {
                line: 1,
                name: "b".into()
            }
        );
    }

    #[test]
    fn error_paths_name_lines() {
        let err = parse_problem("a = free\nb = bogus a\n? coll a a b").unwrap_err();
        assert!(matches!(err, ParseError::UnknownConstructor { line: 2, .. }));
        let err = parse_problem("a = free\nb = free\nc = midpoint a\n? coll a b c").unwrap_err();
        assert!(matches!(err, ParseError::ArityMismatch { line: 3, .. }));
        let err = parse_problem("a = free\nb = free\n").unwrap_err();
        assert!(matches!(err, ParseError::MissingGoal { .. }));
        let err = parse_problem("a = free\n? coll a a a\nb = free").unwrap_err();
        assert!(matches!(err, ParseError::MisplacedGoal { line: 3 }));
        let err = parse_problem("a = free\nb = midpoint a a\n? coll a a b").unwrap_err();
        assert!(matches!(err, ParseError::DegenerateArguments { line: 2, .. }));
        let err = parse_problem("a = free\na = free\n? coll a a a").unwrap_err();
        assert!(matches!(err, ParseError::DuplicatePoint { line: 2, .. }));
    }

    #[test]
    fn areq_goal_parses() {
        let p = parse_problem(
            "a = free\nb = free\nc = free\n? areq sqlen +1 a b +1 a c -1 b c = 0",
        )
        .unwrap();
        let eq = p.goal().equation().unwrap();
        assert_eq!(eq.table(), Table::SqLen);
        assert_eq!(eq.terms().len(), 3);
        let text = p.to_text();
        assert_eq!(parse_problem(&text).unwrap(), p);
    }

    #[test]
    fn comments_and_fixed_points() {
        let p = parse_problem("# header\na = free 0 0   # origin\nb = free 1.5 -2\n? cong a b a b\n").unwrap();
        assert_eq!(
            p.constructions()[1].kind,
            ConstructionKind::Free {
                at: Some([1.5, -2.0])
            }
        );
        assert_eq!(parse_problem(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn json_round_trip() {
        let p = parse_problem("a = free; b = free; c = free; h = foot a b c; ? perp a h b c").unwrap();
        let back = Problem::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
