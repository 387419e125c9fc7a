//! Saturation, proof extraction and proof checking.

mod check;
mod proof;
mod saturate;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use check::{check_proof, verify_proof, CHECK_SEED};
pub use proof::{extract_proof, EquationSource, Proof, ProofEquation, ProofError, ProofStep};
pub use saturate::{
    saturate, saturate_until, EquationOrigin, Justification, LoggedEquation, Outcome, SaturationResult,
    SolverConfig, SolverStats, StatementRecord,
};

use crate::ar::{ArOptions, SineDomain};
use crate::diagram::{build_diagram, Coordinates, DiagramError};
use crate::geometry::Problem;
use crate::matcher::{detect_configurations, match_rules, Rule, RuleInstance};

/// Wall time per phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub diagram: Duration,
    pub matching: Duration,
    pub saturation: Duration,
}

impl PhaseTimes {
    pub fn total(&self) -> Duration {
        self.diagram + self.matching + self.saturation
    }
}

/// Everything one solve produces.
#[derive(Clone, Debug)]
pub struct Solution {
    pub diagram: Coordinates,
    pub instances: Vec<RuleInstance>,
    pub result: SaturationResult,
    pub times: PhaseTimes,
}

impl Solution {
    pub fn outcome(&self) -> Outcome {
        self.result.outcome
    }

    pub fn proof(&self) -> Result<Proof, ProofError> {
        extract_proof(&self.result)
    }
}

/// Table options for a diagram under `cfg`.
pub fn ar_options(cfg: &SolverConfig, diagram: &Coordinates) -> ArOptions {
    if cfg.law_of_sines {
        ArOptions::with_sines(SineDomain::from_diagram(diagram))
    } else {
        ArOptions::default()
    }
}

/// Diagram, matching and saturation, all under `cfg.timeout`.
pub fn solve(problem: &Problem, catalog: &[Rule], cfg: &SolverConfig) -> Result<Solution, DiagramError> {
    let start = Instant::now();
    let deadline = start + cfg.timeout;
    let diagram = build_diagram(problem, cfg.seed)?;
    let t_diagram = start.elapsed();

    let t1 = Instant::now();
    let instances = if Instant::now() < deadline {
        let configs = detect_configurations(&diagram, cfg.tolerance);
        match_rules(&configs, catalog, &diagram, cfg.tolerance)
    } else {
        Vec::new()
    };
    let t_matching = t1.elapsed();

    let t2 = Instant::now();
    let result = saturate_until(problem, &instances, cfg, ar_options(cfg, &diagram), deadline);
    let times = PhaseTimes {
        diagram: t_diagram,
        matching: t_matching,
        saturation: t2.elapsed(),
    };
    Ok(Solution {
        diagram,
        instances,
        result,
        times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_problem;
    use crate::matcher::builtin_catalog;

    fn run(text: &str) -> (Problem, Solution) {
        let p = parse_problem(text).unwrap();
        let s = solve(&p, &builtin_catalog(), &SolverConfig::default()).unwrap();
        (p, s)
    }

    #[test]
    fn midline_by_rule() {
        let (p, s) = run("a = free\nb = free\nc = free\nm = midpoint a b\nn = midpoint a c\n? para m n b c\n");
        assert_eq!(s.outcome(), Outcome::GoalProven);
        let proof = s.proof().unwrap();
        let last = proof.steps.last().unwrap();
        assert_eq!(&last.statement, p.goal());
        assert!(matches!(&last.justification, Justification::Rule { rule, .. } if rule == "midline"));
        assert!(verify_proof(&proof, &p, &builtin_catalog()));
    }

    #[test]
    fn given_goal_needs_no_rules() {
        let (_, s) = run("a = free\nb = free\nm = midpoint a b\n? midpoint m a b\n");
        assert_eq!(s.outcome(), Outcome::GoalProven);
        assert_eq!(s.result.stats.rule_firings, 0);
        assert_eq!(s.proof().unwrap().steps.len(), 1);
    }

    #[test]
    fn pythagoras_by_certificate() {
        let (p, s) = run("a = free\nb = free\nc = perpendicular a a b\n? areq sqlen 1 b c -1 a b -1 a c = 0\n");
        assert_eq!(s.outcome(), Outcome::GoalProven);
        let proof = s.proof().unwrap();
        let Justification::Ar { certificates } = &proof.steps.last().unwrap().justification else {
            panic!("expected an algebraic step");
        };
        assert_eq!(certificates.len(), 1);
        assert!(verify_proof(&proof, &p, &builtin_catalog()));
    }

    #[test]
    fn tampered_certificate_rejected() {
        let (p, s) = run("a = free\nb = free\nc = perpendicular a a b\n? areq sqlen 1 b c -1 a b -1 a c = 0\n");
        let mut proof = s.proof().unwrap();
        let last = proof.steps.last_mut().unwrap();
        if let Justification::Ar { certificates } = &mut last.justification {
            for c in certificates[0].combination.values_mut() {
                *c *= crate::ar::Rational::from_integer(2.into());
            }
        }
        let err = check_proof(&proof, &p, &builtin_catalog()).unwrap_err();
        assert!(err.contains("certificate"), "{err}");
    }

    #[test]
    fn unreachable_goal_saturates() {
        let (_, s) = run("a = free\nb = free\nc = free\n? cong a b a c\n");
        assert_eq!(s.outcome(), Outcome::Saturated);
        assert!(s.proof().is_err());
    }

    #[test]
    fn zero_timeout() {
        let p = parse_problem("a = free\nb = free\nc = free\nm = midpoint a b\nn = midpoint a c\n? para m n b c\n").unwrap();
        let cfg = SolverConfig {
            timeout: Duration::ZERO,
            ..SolverConfig::default()
        };
        assert_eq!(solve(&p, &builtin_catalog(), &cfg).unwrap().outcome(), Outcome::Timeout);
    }
}
