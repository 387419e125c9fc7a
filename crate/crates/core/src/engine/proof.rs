//! Proof extraction and rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::saturate::{EquationOrigin, Justification, Outcome, SaturationResult};
use crate::ar::{EqId, Equation};
use crate::geometry::{PointId, Problem, Statement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("goal was not proven (outcome: {0})")]
    GoalNotProven(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub index: usize,
    pub statement: Statement,
    pub justification: Justification,
    /// Indices of earlier steps.
    pub deps: Vec<usize>,
}

/// Where a cited equation comes from, in proof coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationSource {
    Step(usize),
    LawOfSines([PointId; 3]),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofEquation {
    pub id: EqId,
    pub source: EquationSource,
    pub equation: Equation,
}

/// Steps in dependency order; the last one states the goal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub goal: Statement,
    pub steps: Vec<ProofStep>,
    /// Every equation cited by a certificate.
    pub equations: Vec<ProofEquation>,
}

/// Backward slice from the goal, in epoch order.
pub fn extract_proof(r: &SaturationResult) -> Result<Proof, ProofError> {
    let goal_epoch = match (r.outcome, r.epoch_of(&r.goal)) {
        (Outcome::GoalProven, Some(e)) => e,
        _ => return Err(ProofError::GoalNotProven(r.outcome.as_str())),
    };
    let mut keep = BTreeSet::new();
    let mut stack = vec![goal_epoch];
    while let Some(e) = stack.pop() {
        if keep.insert(e) {
            stack.extend(r.records[e].deps.iter().copied());
        }
    }
    let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut steps = Vec::with_capacity(keep.len());
    let mut cited = BTreeSet::new();
    for &e in &keep {
        let rec = &r.records[e];
        if let Justification::Ar { certificates } = &rec.justification {
            for c in certificates {
                cited.extend(c.combination.keys().copied());
            }
        }
        steps.push(ProofStep {
            index: renumber[&e],
            statement: rec.statement.clone(),
            justification: rec.justification.clone(),
            deps: rec.deps.iter().map(|d| renumber[d]).collect(),
        });
    }
    let equations = cited
        .into_iter()
        .map(|id| {
            let logged = &r.equations[id.0 as usize];
            let source = match logged.origin {
                EquationOrigin::Statement(e) => EquationSource::Step(renumber[&e]),
                EquationOrigin::LawOfSines(t) => EquationSource::LawOfSines(t),
            };
            ProofEquation {
                id,
                source,
                equation: logged.equation.clone(),
            }
        })
        .collect();
    Ok(Proof {
        goal: r.goal.clone(),
        steps,
        equations,
    })
}

impl Proof {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proof serializes")
    }

    pub fn from_json(text: &str) -> Result<Proof, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn rule_steps(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.justification, Justification::Rule { .. }))
            .count()
    }

    /// Human-readable rendering with the problem's point names.
    pub fn to_text(&self, problem: &Problem) -> String {
        let names = problem.names();
        let mut out = String::new();
        let _ = writeln!(out, "goal: {}", self.goal.display_with(names));
        let eqs: BTreeMap<EqId, &ProofEquation> = self.equations.iter().map(|e| (e.id, e)).collect();
        let width = self.steps.len().to_string().len();
        for step in &self.steps {
            let stmt = step.statement.display_with(names).to_string();
            let deps = if step.deps.is_empty() {
                String::new()
            } else {
                let d: Vec<String> = step.deps.iter().map(|d| d.to_string()).collect();
                format!(" <- {}", d.join(", "))
            };
            match &step.justification {
                Justification::Given { construction } => {
                    let c = &problem.constructions()[*construction];
                    let _ = writeln!(
                        out,
                        "{:>width$}. {stmt}  [given: {} = {}]",
                        step.index,
                        names[c.out.index()],
                        c.kind.keyword()
                    );
                }
                Justification::Rule { rule, binding } => {
                    let b: Vec<&str> = binding.iter().map(|p| problem.name(*p)).collect();
                    let _ = writeln!(out, "{:>width$}. {stmt}  [rule {rule}({})]{deps}", step.index, b.join(" "));
                }
                Justification::Ar { certificates } => {
                    let _ = writeln!(out, "{:>width$}. {stmt}  [algebra]{deps}", step.index);
                    for c in certificates {
                        let _ = writeln!(out, "{:w$}  {}", "", c.target.display_with(names), w = width);
                        for (id, coef) in &c.combination {
                            let src = match eqs.get(id).map(|e| e.source) {
                                Some(EquationSource::Step(s)) => format!("step {s}"),
                                Some(EquationSource::LawOfSines(t)) => format!(
                                    "law of sines {} {} {}",
                                    problem.name(t[0]),
                                    problem.name(t[1]),
                                    problem.name(t[2])
                                ),
                                None => "?".into(),
                            };
                            let eq = eqs
                                .get(id)
                                .map(|e| e.equation.display_with(names).to_string())
                                .unwrap_or_default();
                            let _ = writeln!(out, "{:w$}    {coef:>6} * ({eq})  from {src}", "", w = width);
                        }
                    }
                }
            }
        }
        out
    }
}
