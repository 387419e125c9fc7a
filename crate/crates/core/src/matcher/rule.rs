//! Rule catalog: patterns over `$`-variables in the predicate syntax of the
//! problem language.
//!
//! ```text
//! # comment
//! rule midline
//!   hyp midpoint $m $a $b
//!   hyp midpoint $n $a $c
//!   concl para $m $n $b $c
//!   witness a = free; b = free; c = free; m = midpoint a b; n = midpoint a c
//! ```
//!
//! `witness` is an optional construction sequence whose point names match the
//! variable names; it is used to fuzz the rule. `source mined` marks rules
//! appended by an external mining pass.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::diagram::{build_diagram, numeric_holds, TAU_CHECK};
use crate::geometry::{parse_problem, parse_statement_tokens, ParseError, PointId, Statement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleSource {
    Builtin,
    Mined,
}

/// A rule `hyp_1, ..., hyp_k => concl`. Patterns are statements whose point
/// ids are variable indices into `vars`; they are stored as written, not
/// canonicalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub vars: Vec<String>,
    pub hypotheses: Vec<Statement>,
    pub conclusion: Statement,
    pub source: RuleSource,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Pattern { line: usize, source: ParseError },
    #[error("rule `{rule}`: {message}")]
    Invalid { rule: String, message: String },
    #[error("duplicate rule id `{0}`")]
    Duplicate(String),
    #[error("cannot read catalog {path}: {message}")]
    Io { path: String, message: String },
}

impl From<ParseError> for CatalogError {
    fn from(e: ParseError) -> Self {
        CatalogError::Pattern { line: 0, source: e }
    }
}

impl Rule {
    pub fn var(&self, i: PointId) -> &str {
        &self.vars[i.index()]
    }

    /// Instantiates a pattern under `binding[var] = point`.
    pub fn instantiate(pattern: &Statement, binding: &[PointId]) -> Option<Statement> {
        pattern.map_points(|v| binding[v.index()])
    }

    /// The record in catalog syntax; `parse_catalog` reads it back unchanged.
    pub fn to_record(&self) -> String {
        let names: Vec<String> = self.vars.iter().map(|v| format!("${v}")).collect();
        let mut out = format!("rule {}\n", self.id);
        for h in &self.hypotheses {
            let _ = writeln!(out, "  hyp {}", h.display_with(&names));
        }
        let _ = writeln!(out, "  concl {}", self.conclusion.display_with(&names));
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "  witness {w}");
        }
        if self.source == RuleSource::Mined {
            out.push_str("  source mined\n");
        }
        out
    }

    /// Builds the witness configuration under several seeds and checks that
    /// every hypothesis and the conclusion hold numerically.
    pub fn check_witness(&self, seeds: impl IntoIterator<Item = u64>) -> Result<(), String> {
        let witness = self.witness.as_ref().ok_or("rule has no witness")?;
        let concl = self.conclusion.display_with(&self.vars).to_string();
        let problem = parse_problem(&format!("{witness}\n? {concl}")).map_err(|e| format!("witness: {e}"))?;
        let binding: Vec<PointId> = self
            .vars
            .iter()
            .map(|v| problem.point(v).ok_or(format!("witness lacks point {v}")))
            .collect::<Result<_, _>>()?;
        let mut seen = binding.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != binding.len() {
            return Err("witness binding is not injective".into());
        }
        for seed in seeds {
            let c = build_diagram(&problem, seed).map_err(|e| format!("seed {seed}: {e}"))?;
            for (what, pat) in self
                .hypotheses
                .iter()
                .map(|h| ("hypothesis", h))
                .chain(std::iter::once(("conclusion", &self.conclusion)))
            {
                let s = Rule::instantiate(pat, &binding).ok_or("degenerate instantiation")?;
                if !numeric_holds(&s, &c, TAU_CHECK) {
                    return Err(format!(
                        "seed {seed}: {what} `{}` fails (residual {:e})",
                        s.display_with(problem.names()),
                        c.residual(&s)
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct Draft {
    id: String,
    vars: Vec<String>,
    index: HashMap<String, PointId>,
    hypotheses: Vec<Statement>,
    conclusion: Option<Statement>,
    source: Option<RuleSource>,
    witness: Option<String>,
}

impl Draft {
    fn pattern(&mut self, tokens: &[&str], line: usize, allow_new: bool) -> Result<Statement, CatalogError> {
        let vars = &mut self.vars;
        let index = &mut self.index;
        parse_statement_tokens(tokens, line, |t: &str| -> Result<PointId, CatalogError> {
            let name = t.strip_prefix('$').ok_or_else(|| CatalogError::Syntax {
                line,
                message: format!("expected a `$` variable, found `{t}`"),
            })?;
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(CatalogError::Syntax {
                    line,
                    message: format!("bad variable name `{t}`"),
                });
            }
            if let Some(&p) = index.get(name) {
                return Ok(p);
            }
            if !allow_new {
                return Err(CatalogError::Syntax {
                    line,
                    message: format!("conclusion variable ${name} does not occur in any hypothesis"),
                });
            }
            let p = PointId(vars.len() as u16);
            vars.push(name.to_string());
            index.insert(name.to_string(), p);
            Ok(p)
        })
        .map_err(|e| match e {
            CatalogError::Pattern { source, .. } => CatalogError::Pattern { line, source },
            e => e,
        })
    }

    fn finish(self) -> Result<Rule, CatalogError> {
        let invalid = |m: &str| CatalogError::Invalid {
            rule: self.id.clone(),
            message: m.to_string(),
        };
        if self.hypotheses.is_empty() {
            return Err(invalid("no hypotheses"));
        }
        let conclusion = self.conclusion.clone().ok_or_else(|| invalid("no conclusion"))?;
        let identity: Vec<PointId> = (0..self.vars.len()).map(PointId::from).collect();
        for pat in self.hypotheses.iter().chain(std::iter::once(&conclusion)) {
            if Rule::instantiate(pat, &identity).is_none() {
                return Err(invalid("pattern has a zero-length segment"));
            }
        }
        Ok(Rule {
            id: self.id,
            vars: self.vars,
            hypotheses: self.hypotheses,
            conclusion,
            source: self.source.unwrap_or(RuleSource::Builtin),
            witness: self.witness,
        })
    }
}

/// Parses a catalog. Rule ids must be unique.
pub fn parse_catalog(text: &str) -> Result<Vec<Rule>, CatalogError> {
    let mut rules: Vec<Rule> = Vec::new();
    let mut draft: Option<Draft> = None;
    let flush = |draft: &mut Option<Draft>, rules: &mut Vec<Rule>| -> Result<(), CatalogError> {
        if let Some(d) = draft.take() {
            let rule = d.finish()?;
            if rules.iter().any(|r| r.id == rule.id) {
                return Err(CatalogError::Duplicate(rule.id));
            }
            rules.push(rule);
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        let syntax = |m: String| CatalogError::Syntax { line, message: m };
        match head {
            "rule" => {
                flush(&mut draft, &mut rules)?;
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(syntax("`rule` takes a single id".into()));
                }
                draft = Some(Draft {
                    id: rest.to_string(),
                    ..Draft::default()
                });
            }
            "hyp" | "concl" | "witness" | "source" => {
                let d = draft
                    .as_mut()
                    .ok_or_else(|| syntax(format!("`{head}` outside a rule record")))?;
                match head {
                    "hyp" => {
                        if d.conclusion.is_some() {
                            return Err(syntax("hypotheses must precede the conclusion".into()));
                        }
                        let tokens: Vec<&str> = rest.split_whitespace().collect();
                        let s = d.pattern(&tokens, line, true)?;
                        d.hypotheses.push(s);
                    }
                    "concl" => {
                        if d.conclusion.is_some() {
                            return Err(syntax("a rule has exactly one conclusion".into()));
                        }
                        let tokens: Vec<&str> = rest.split_whitespace().collect();
                        d.conclusion = Some(d.pattern(&tokens, line, false)?);
                    }
                    "witness" => d.witness = Some(rest.to_string()),
                    _ => {
                        d.source = Some(match rest {
                            "builtin" => RuleSource::Builtin,
                            "mined" => RuleSource::Mined,
                            other => return Err(syntax(format!("unknown source `{other}`"))),
                        })
                    }
                }
            }
            other => return Err(syntax(format!("unexpected `{other}`"))),
        }
    }
    flush(&mut draft, &mut rules)?;
    Ok(rules)
}

/// Renders rules as a catalog, one record per rule, blank-line separated.
pub fn format_catalog(rules: &[Rule]) -> String {
    rules.iter().map(Rule::to_record).collect::<Vec<_>>().join("\n")
}

/// Reads a catalog file.
pub fn load_catalog(path: &std::path::Path) -> Result<Vec<Rule>, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_catalog(&text)
}

const BUILTIN: &str = include_str!("../../rules/builtin.rules");

/// The bundled rule catalog.
pub fn builtin_catalog() -> Vec<Rule> {
    parse_catalog(BUILTIN).expect("bundled catalog parses")
}

/// Source text of the bundled catalog.
pub fn builtin_catalog_text() -> &'static str {
    BUILTIN
}
