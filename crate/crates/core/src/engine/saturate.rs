//! The forward-chaining loop.
//!
//! Construction facts are established first. Established statements are then
//! processed in FIFO order, one generation at a time: a statement's equations
//! go into the tables and every rule instance watching it has its
//! remaining-hypothesis counter decremented; an instance reaching zero
//! establishes its conclusion. After each generation the tables are asked, in
//! sorted order, about every statement that is still unknown and could matter
//! (a hypothesis or the conclusion of an unfired instance, or the goal). The
//! same statements are asked about again and again as the tables grow, which
//! is what resumable queries are for. The loop ends at the goal, at a
//! fixpoint, at the deadline, or on an inconsistent table.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::ar::{
    law_of_sines_equations, proof_obligations, statement_to_equations, ArOptions, ArTable, Certificate, EqId,
    Equation, QueryResult, Table, TableError, TableStats,
};
use crate::diagram::TAU_CHECK;
use crate::geometry::{PointId, Problem, Statement};
use crate::matcher::RuleInstance;

/// Solver settings shared by the library entry points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    /// Budget for the whole solve, diagram and matching included.
    pub timeout: Duration,
    pub law_of_sines: bool,
    /// Matching tolerance.
    pub tolerance: f64,
    /// Resume pending table queries instead of restarting them.
    pub resume_queries: bool,
    /// Where to write a reproduction bundle if a table becomes inconsistent.
    pub repro_dir: Option<PathBuf>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            timeout: Duration::from_secs(10),
            law_of_sines: false,
            tolerance: TAU_CHECK,
            resume_queries: true,
            repro_dir: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    GoalProven,
    Saturated,
    Timeout,
    Inconsistent,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::GoalProven => "goal_proven",
            Outcome::Saturated => "saturated",
            Outcome::Timeout => "timeout",
            Outcome::Inconsistent => "inconsistent",
        }
    }
}

/// Why a statement holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Justification {
    Given { construction: usize },
    Rule { rule: String, binding: Vec<PointId> },
    Ar { certificates: Vec<Certificate> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatementRecord {
    pub statement: Statement,
    pub justification: Justification,
    /// Epochs of the statements this one was derived from.
    pub deps: Vec<usize>,
    pub epoch: usize,
}

/// Where a table equation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationOrigin {
    /// Encoding of the statement established at this epoch.
    Statement(usize),
    LawOfSines([PointId; 3]),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedEquation {
    pub equation: Equation,
    pub origin: EquationOrigin,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub instances: u64,
    pub rule_firings: u64,
    pub ar_established: u64,
    pub established: u64,
    pub equations: u64,
    pub ar_phases: u64,
    pub table: TableStats,
}

#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub outcome: Outcome,
    pub goal: Statement,
    /// Established statements in epoch order.
    pub records: Vec<StatementRecord>,
    pub equations: Vec<LoggedEquation>,
    /// Candidates still unknown when the loop stopped.
    pub unresolved: Vec<Statement>,
    pub stats: SolverStats,
    pub elapsed: Duration,
    /// Set for `Inconsistent`.
    pub diagnostic: Option<String>,
}

impl SaturationResult {
    pub fn epoch_of(&self, s: &Statement) -> Option<usize> {
        self.records.iter().position(|r| &r.statement == s)
    }

    pub fn is_established(&self, s: &Statement) -> bool {
        self.epoch_of(s).is_some()
    }

    pub fn equation(&self, id: EqId) -> Option<&Equation> {
        self.equations.get(id.0 as usize).map(|e| &e.equation)
    }
}

fn table_index(t: Table) -> usize {
    match t {
        Table::Len => 0,
        Table::LogLen => 1,
        Table::SqLen => 2,
    }
}

enum Stop {
    Timeout,
    Inconsistent(String),
}

struct State<'a> {
    problem: &'a Problem,
    instances: &'a [RuleInstance],
    opts: ArOptions,
    deadline: Instant,
    tables: [ArTable; 3],
    records: Vec<StatementRecord>,
    index: HashMap<Statement, usize>,
    equations: Vec<LoggedEquation>,
    queue: VecDeque<usize>,
    remaining: Vec<usize>,
    fired: Vec<bool>,
    watchers: HashMap<Statement, Vec<usize>>,
    obligations: HashMap<Statement, Vec<Vec<Equation>>>,
    stats: SolverStats,
}

impl<'a> State<'a> {
    fn check_deadline(&self) -> Result<(), Stop> {
        if Instant::now() >= self.deadline {
            Err(Stop::Timeout)
        } else {
            Ok(())
        }
    }

    fn establish(&mut self, s: Statement, justification: Justification, mut deps: Vec<usize>) -> bool {
        if self.index.contains_key(&s) {
            return false;
        }
        deps.sort();
        deps.dedup();
        let epoch = self.records.len();
        self.index.insert(s.clone(), epoch);
        self.records.push(StatementRecord {
            statement: s,
            justification,
            deps,
            epoch,
        });
        self.queue.push_back(epoch);
        self.stats.established += 1;
        true
    }

    fn goal_done(&self) -> bool {
        self.index.contains_key(self.problem.goal())
    }

    fn insert_equation(&mut self, equation: Equation, origin: EquationOrigin) -> Result<(), Stop> {
        let id = EqId(self.equations.len() as u32);
        let t = table_index(equation.table());
        let res = self.tables[t].insert(&equation, id);
        self.equations.push(LoggedEquation { equation, origin });
        self.stats.equations += 1;
        match res {
            Ok(_) => Ok(()),
            Err(TableError::Inconsistent { origin, combination }) => Err(Stop::Inconsistent(format!(
                "equation {} contradicts the table via {} earlier equations",
                origin.0,
                combination.len().saturating_sub(1)
            ))),
            Err(e) => Err(Stop::Inconsistent(e.to_string())),
        }
    }

    fn process(&mut self, epoch: usize) -> Result<(), Stop> {
        let s = self.records[epoch].statement.clone();
        let eqs = statement_to_equations(&s, &self.opts).map_err(|e| Stop::Inconsistent(e.to_string()))?;
        for e in eqs {
            self.insert_equation(e, EquationOrigin::Statement(epoch))?;
        }
        if let Some(ws) = self.watchers.get(&s) {
            let ws = ws.clone();
            for i in ws {
                self.remaining[i] -= 1;
                if self.remaining[i] == 0 && !self.fired[i] {
                    self.fire(i);
                }
            }
        }
        Ok(())
    }

    fn fire(&mut self, i: usize) {
        self.fired[i] = true;
        let inst = &self.instances[i];
        let deps = inst.hypotheses.iter().map(|h| self.index[h]).collect();
        let just = Justification::Rule {
            rule: inst.rule.clone(),
            binding: inst.binding.clone(),
        };
        if self.establish(inst.conclusion.clone(), just, deps) {
            self.stats.rule_firings += 1;
        }
    }

    /// Statements the tables should be asked about, goal first.
    fn candidates(&self) -> Vec<Statement> {
        let mut set = BTreeSet::new();
        for (i, inst) in self.instances.iter().enumerate() {
            if self.fired[i] {
                continue;
            }
            for h in inst.hypotheses.iter().chain([&inst.conclusion]) {
                if !self.index.contains_key(h) {
                    set.insert(h);
                }
            }
        }
        let goal = self.problem.goal();
        let mut out = Vec::with_capacity(set.len() + 1);
        if !self.index.contains_key(goal) {
            out.push(goal.clone());
        }
        out.extend(set.into_iter().filter(|s| *s != goal).cloned());
        out
    }

    fn try_prove(&mut self, s: &Statement) -> Result<Option<Vec<Certificate>>, Stop> {
        if !self.obligations.contains_key(s) {
            let alts = proof_obligations(s, &self.opts).unwrap_or_default();
            self.obligations.insert(s.clone(), alts);
        }
        let alts = self.obligations[s].clone();
        'alt: for alt in alts {
            let mut certs = Vec::with_capacity(alt.len());
            for eq in &alt {
                self.check_deadline()?;
                match self.tables[table_index(eq.table())].query(eq) {
                    QueryResult::Proven(c) => certs.push(c),
                    QueryResult::Pending => continue 'alt,
                }
            }
            return Ok(Some(certs));
        }
        Ok(None)
    }

    fn cert_deps(&self, certs: &[Certificate]) -> Vec<usize> {
        let mut deps = Vec::new();
        for c in certs {
            for id in c.combination.keys() {
                if let EquationOrigin::Statement(e) = self.equations[id.0 as usize].origin {
                    deps.push(e);
                }
            }
        }
        deps
    }

    fn ar_phase(&mut self) -> Result<bool, Stop> {
        self.stats.ar_phases += 1;
        let mut progress = false;
        for s in self.candidates() {
            if self.index.contains_key(&s) {
                continue;
            }
            if let Some(certs) = self.try_prove(&s)? {
                let deps = self.cert_deps(&certs);
                self.establish(s.clone(), Justification::Ar { certificates: certs }, deps);
                self.stats.ar_established += 1;
                progress = true;
                if &s == self.problem.goal() {
                    break;
                }
            }
        }
        Ok(progress)
    }

    fn run(&mut self) -> Result<Outcome, Stop> {
        for (step, s) in self.problem.given() {
            self.establish(s, Justification::Given { construction: step }, vec![]);
        }
        if let Some(dom) = self.opts.law_of_sines.clone() {
            for tri in dom.triangles() {
                for e in law_of_sines_equations(*tri, &self.opts).map_err(|e| Stop::Inconsistent(e.to_string()))? {
                    self.insert_equation(e, EquationOrigin::LawOfSines(*tri))?;
                }
            }
        }
        // instances with no hypotheses left to wait for
        for i in 0..self.instances.len() {
            if self.remaining[i] == 0 && !self.fired[i] {
                self.fire(i);
            }
        }
        loop {
            if self.goal_done() {
                return Ok(Outcome::GoalProven);
            }
            for _ in 0..self.queue.len() {
                let e = self.queue.pop_front().expect("generation");
                self.check_deadline()?;
                self.process(e)?;
                if self.goal_done() {
                    return Ok(Outcome::GoalProven);
                }
            }
            self.check_deadline()?;
            if !self.ar_phase()? && self.queue.is_empty() {
                return Ok(if self.goal_done() {
                    Outcome::GoalProven
                } else {
                    Outcome::Saturated
                });
            }
        }
    }
}

/// Runs the loop. `ar` carries the optional law-of-sines domain; `deadline`
/// bounds the whole run.
pub fn saturate_until(
    problem: &Problem,
    instances: &[RuleInstance],
    cfg: &SolverConfig,
    ar: ArOptions,
    deadline: Instant,
) -> SaturationResult {
    let start = Instant::now();
    let mut watchers: HashMap<Statement, Vec<usize>> = HashMap::new();
    for (i, inst) in instances.iter().enumerate() {
        for h in &inst.hypotheses {
            watchers.entry(h.clone()).or_default().push(i);
        }
    }
    let table = |t| {
        let t = ArTable::new(t);
        if cfg.resume_queries {
            t
        } else {
            t.without_resumption()
        }
    };
    let tables = [table(Table::Len), table(Table::LogLen), table(Table::SqLen)];
    let mut st = State {
        problem,
        instances,
        opts: ar,
        deadline,
        tables,
        records: Vec::new(),
        index: HashMap::new(),
        equations: Vec::new(),
        queue: VecDeque::new(),
        remaining: instances.iter().map(|i| i.hypotheses.len()).collect(),
        fired: vec![false; instances.len()],
        watchers,
        obligations: HashMap::new(),
        stats: SolverStats {
            instances: instances.len() as u64,
            ..SolverStats::default()
        },
    };
    let (outcome, diagnostic) = match st.run() {
        Ok(o) => (o, None),
        Err(Stop::Timeout) => (Outcome::Timeout, None),
        Err(Stop::Inconsistent(msg)) => (Outcome::Inconsistent, Some(msg)),
    };
    for t in &st.tables {
        st.stats.table.add(t.stats());
    }
    let unresolved = st.candidates();
    let mut result = SaturationResult {
        outcome,
        goal: problem.goal().clone(),
        records: st.records,
        equations: st.equations,
        unresolved,
        stats: st.stats,
        elapsed: start.elapsed(),
        diagnostic,
    };
    if outcome == Outcome::Inconsistent {
        if let Some(dir) = &cfg.repro_dir {
            match write_repro(dir, problem, cfg, &result) {
                Ok(path) => {
                    let d = result.diagnostic.get_or_insert_with(String::new);
                    d.push_str(&format!("; reproduction bundle at {}", path.display()));
                }
                Err(e) => {
                    let d = result.diagnostic.get_or_insert_with(String::new);
                    d.push_str(&format!("; could not write reproduction bundle: {e}"));
                }
            }
        }
    }
    result
}

/// `saturate_until` with the deadline `cfg.timeout` from now.
pub fn saturate(problem: &Problem, instances: &[RuleInstance], cfg: &SolverConfig, ar: ArOptions) -> SaturationResult {
    saturate_until(problem, instances, cfg, ar, Instant::now() + cfg.timeout)
}

fn write_repro(
    dir: &std::path::Path,
    problem: &Problem,
    cfg: &SolverConfig,
    r: &SaturationResult,
) -> std::io::Result<PathBuf> {
    #[derive(Serialize)]
    struct Bundle<'a> {
        problem: String,
        seed: u64,
        law_of_sines: bool,
        diagnostic: &'a Option<String>,
        equations: &'a [LoggedEquation],
    }
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("ddar-repro-{}.json", cfg.seed));
    let bundle = Bundle {
        problem: problem.to_text(),
        seed: cfg.seed,
        law_of_sines: cfg.law_of_sines,
        diagnostic: &r.diagnostic,
        equations: &r.equations,
    };
    std::fs::write(&path, serde_json::to_string_pretty(&bundle).map_err(std::io::Error::other)?)?;
    Ok(path)
}
