//! The `ddar` command line: `solve`, `bench` and `check`.
//!
//! Every flag can also be set through an environment variable with the
//! `DDAR_` prefix (`DDAR_SEED`, `DDAR_TIMEOUT`, `DDAR_LAW_OF_SINES`,
//! `DDAR_CATALOG`, `DDAR_JSON`, `DDAR_JOBS`).
//!
//! Exit codes of `solve`: 0 goal proven, 1 saturated, 2 timeout, 3 input
//! error, 4 inconsistent table. `check` exits 0 when the proof verifies and 1
//! otherwise. `bench` exits 0 unless a manifest disagrees (1) or the
//! directory or catalog cannot be read (3).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::{check_proof, solve, Outcome, PhaseTimes, Proof, SolverConfig, SolverStats};
use crate::geometry::{parse_problem, Problem};
use crate::matcher::{builtin_catalog, load_catalog, Rule};

pub const EXIT_PROVEN: i32 = 0;
pub const EXIT_SATURATED: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ddar", version, about = "Plane-geometry prover")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem file.
    Solve(SolveArgs),
    /// Solve every `*.txt` problem in a directory.
    Bench(BenchArgs),
    /// Verify a proof file against its problem.
    Check(CheckArgs),
}

/// Flags shared by `solve` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, env = "DDAR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Seconds.
    #[arg(long, env = "DDAR_TIMEOUT", default_value_t = 10.0)]
    pub timeout: f64,
    #[arg(long, env = "DDAR_LAW_OF_SINES")]
    pub law_of_sines: bool,
    /// Rule catalog file; the builtin catalog when absent.
    #[arg(long, env = "DDAR_CATALOG")]
    pub catalog: Option<PathBuf>,
    /// Matching tolerance override.
    #[arg(long, env = "DDAR_TOLERANCE")]
    pub tolerance: Option<f64>,
    /// JSON instead of text.
    #[arg(long, env = "DDAR_JSON")]
    pub json: bool,
}

impl Default for SolverArgs {
    fn default() -> Self {
        SolverArgs {
            seed: 0,
            timeout: 10.0,
            law_of_sines: false,
            catalog: None,
            tolerance: None,
            json: false,
        }
    }
}

impl SolverArgs {
    pub fn config(&self) -> Result<SolverConfig, String> {
        let timeout = Duration::try_from_secs_f64(self.timeout).map_err(|e| format!("--timeout: {e}"))?;
        let mut cfg = SolverConfig {
            seed: self.seed,
            timeout,
            law_of_sines: self.law_of_sines,
            ..SolverConfig::default()
        };
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("--tolerance must be positive, got {t}"));
            }
            cfg.tolerance = t;
        }
        Ok(cfg)
    }

    pub fn catalog(&self) -> Result<Vec<Rule>, String> {
        match &self.catalog {
            None => Ok(builtin_catalog()),
            Some(p) => load_catalog(p).map_err(|e| format!("{}: {e}", p.display())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also print the sampled coordinates.
    #[arg(long)]
    pub dump_diagram: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    pub dir: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Worker threads; 0 means one per logical core.
    #[arg(long, env = "DDAR_JOBS", default_value_t = 0)]
    pub jobs: usize,
    /// Expected outcomes to compare against.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    pub proof: PathBuf,
    pub problem: PathBuf,
    /// Catalog the proof's rules come from.
    #[arg(long, env = "DDAR_CATALOG")]
    pub catalog: Option<PathBuf>,
}

/// Runs a parsed command line. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::Bench(a) => cmd_bench(&a, out, err),
        Command::Check(a) => {
            let catalog = match &a.catalog {
                None => builtin_catalog(),
                Some(p) => match load_catalog(p) {
                    Ok(c) => c,
                    Err(e) => {
                        let _ = writeln!(err, "{}: {e}", p.display());
                        return 1;
                    }
                },
            };
            match cmd_check(&a.proof, &a.problem, &catalog) {
                Ok(()) => {
                    let _ = writeln!(out, "ok");
                    0
                }
                Err(msg) => {
                    let _ = writeln!(err, "{msg}");
                    1
                }
            }
        }
    }
}

pub fn exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::GoalProven => EXIT_PROVEN,
        Outcome::Saturated => EXIT_SATURATED,
        Outcome::Timeout => EXIT_TIMEOUT,
        Outcome::Inconsistent => EXIT_INCONSISTENT,
    }
}

fn read_problem(path: &Path) -> Result<Problem, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_problem(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn times_json(t: &PhaseTimes) -> Value {
    json!({
        "diagram_ms": millis(t.diagram),
        "matching_ms": millis(t.matching),
        "saturation_ms": millis(t.saturation),
        "total_ms": millis(t.total()),
    })
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let setup = (|| {
        let problem = read_problem(&args.file)?;
        let cfg = args.solver.config()?;
        let catalog = args.solver.catalog()?;
        Ok::<_, String>((problem, cfg, catalog))
    })();
    let (problem, cfg, catalog) = match setup {
        Ok(x) => x,
        Err(msg) => {
            let _ = writeln!(err, "{msg}");
            return EXIT_INPUT;
        }
    };
    let sol = match solve(&problem, &catalog, &cfg) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", args.file.display());
            return EXIT_INPUT;
        }
    };
    let outcome = sol.outcome();
    let proof = sol.proof().ok();
    if let Some(d) = &sol.result.diagnostic {
        let _ = writeln!(err, "{d}");
    }

    let text = if args.solver.json {
        let mut doc = json!({
            "problem": args.file.file_name().map(|n| n.to_string_lossy().into_owned()),
            "outcome": outcome.as_str(),
            "seed": cfg.seed,
            "law_of_sines": cfg.law_of_sines,
            "stats": sol.result.stats,
            "proof": proof,
            "metadata": { "times": times_json(&sol.times) },
        });
        if args.dump_diagram {
            doc["diagram"] = serde_json::from_str(&sol.diagram.to_json(&problem)).expect("diagram json");
        }
        serde_json::to_string_pretty(&doc).expect("json") + "\n"
    } else {
        let mut s = format!("outcome: {}\n", outcome.as_str());
        if args.dump_diagram {
            for p in problem.points() {
                let [x, y] = sol.diagram.point(p);
                s += &format!("{} = ({x:.9}, {y:.9})\n", problem.name(p));
            }
        }
        match &proof {
            Some(p) => s += &p.to_text(&problem),
            None => {
                let st = &sol.result.stats;
                s += &format!(
                    "established {} statements ({} by rules, {} by algebra) from {} instances\n",
                    st.established, st.rule_firings, st.ar_established, st.instances
                );
            }
        }
        s
    };
    let written = match &args.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "{msg}");
        return EXIT_INPUT;
    }
    exit_code(outcome)
}

/// Accepts either a bare proof or a `solve --json` document.
pub fn parse_proof_document(text: &str) -> Result<Proof, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("proof parse error: {e}"))?;
    let inner = match v.get("proof") {
        Some(Value::Null) => return Err("proof parse error: document has no proof".into()),
        Some(p) => p.clone(),
        None => v,
    };
    serde_json::from_value(inner).map_err(|e| format!("proof parse error: {e}"))
}

/// `Ok` iff the proof verifies; otherwise the first failure.
pub fn cmd_check(proof: &Path, problem: &Path, catalog: &[Rule]) -> Result<(), String> {
    let text = fs::read_to_string(proof).map_err(|e| format!("{}: {e}", proof.display()))?;
    let proof = parse_proof_document(&text)?;
    let problem = read_problem(problem)?;
    check_proof(&proof, &problem, catalog)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub file: String,
    /// Outcome name, or `error`.
    pub outcome: String,
    pub error: Option<String>,
    pub stats: SolverStats,
    pub times: PhaseTimes,
    pub expected: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchAggregate {
    pub problems: usize,
    pub solved: usize,
    pub times: PhaseTimes,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub aggregate: BenchAggregate,
}

impl BenchReport {
    pub fn from_rows(rows: Vec<BenchRow>) -> BenchReport {
        let aggregate = rows.iter().fold(BenchAggregate::default(), |mut a, r| {
            a.problems += 1;
            a.solved += usize::from(r.outcome == Outcome::GoalProven.as_str());
            a.times.diagram += r.times.diagram;
            a.times.matching += r.times.matching;
            a.times.saturation += r.times.saturation;
            a
        });
        BenchReport { rows, aggregate }
    }

    /// Rows whose outcome differs from the manifest.
    pub fn mismatches(&self) -> Vec<&BenchRow> {
        self.rows
            .iter()
            .filter(|r| r.expected.as_ref().is_some_and(|e| *e != r.outcome))
            .collect()
    }

    /// Deterministic part first; wall times only inside `metadata`.
    pub fn to_json(&self, cfg: &SolverConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "file": r.file,
                    "outcome": r.outcome,
                    "expected": r.expected,
                    "error": r.error,
                    "stats": r.stats,
                })
            })
            .collect();
        let times: BTreeMap<&str, Value> = self.rows.iter().map(|r| (r.file.as_str(), times_json(&r.times))).collect();
        let doc = json!({
            "config": { "seed": cfg.seed, "law_of_sines": cfg.law_of_sines, "tolerance": cfg.tolerance },
            "rows": rows,
            "aggregate": { "problems": self.aggregate.problems, "solved": self.aggregate.solved },
            "metadata": { "times": times, "aggregate_times": times_json(&self.aggregate.times) },
        });
        serde_json::to_string_pretty(&doc).expect("json") + "\n"
    }

    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{:<28} {:<12} {:>6} {:>8} {:>8} {:>9} {:>10}\n",
            "problem", "outcome", "steps", "rows", "diag ms", "match ms", "ddar ms"
        );
        for r in &self.rows {
            let flag = if r.expected.as_ref().is_some_and(|e| *e != r.outcome) { " !" } else { "" };
            s += &format!(
                "{:<28} {:<12} {:>6} {:>8} {:>8.1} {:>9.1} {:>10.1}{flag}\n",
                r.file,
                r.outcome,
                r.stats.established,
                r.stats.table.row_ops,
                millis(r.times.diagram),
                millis(r.times.matching),
                millis(r.times.saturation),
            );
        }
        let t = &self.aggregate.times;
        s += &format!(
            "solved {}/{}; diagram {:.1} ms, matching {:.1} ms, ddar {:.1} ms\n",
            self.aggregate.solved,
            self.aggregate.problems,
            millis(t.diagram),
            millis(t.matching),
            millis(t.saturation)
        );
        s
    }
}

/// Expected outcomes, keyed by file name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub problems: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    /// `baseline`, `law_of_sines` or `saturating`.
    pub role: String,
    pub expected: String,
    pub expected_with_sines: String,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn expected(&self, file: &str, law_of_sines: bool) -> Option<&str> {
        self.problems.iter().find(|e| e.file == file).map(|e| {
            if law_of_sines {
                e.expected_with_sines.as_str()
            } else {
                e.expected.as_str()
            }
        })
    }
}

/// Problem files of `dir`, sorted by name.
pub fn problem_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    Ok(files)
}

fn bench_one(path: &Path, catalog: &[Rule], cfg: &SolverConfig) -> BenchRow {
    let file = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let failed = |e: String| BenchRow {
        file: file.clone(),
        outcome: "error".into(),
        error: Some(e),
        stats: SolverStats::default(),
        times: PhaseTimes::default(),
        expected: None,
    };
    let problem = match read_problem(path) {
        Ok(p) => p,
        Err(e) => return failed(e),
    };
    match solve(&problem, catalog, cfg) {
        Ok(sol) => BenchRow {
            file: file.clone(),
            outcome: sol.outcome().as_str().into(),
            error: sol.result.diagnostic.clone(),
            stats: sol.result.stats,
            times: sol.times,
            expected: None,
        },
        Err(e) => failed(e.to_string()),
    }
}

/// Runs every problem of `dir` on a pool of `jobs` workers (0 = all cores).
pub fn bench_dir(
    dir: &Path,
    catalog: &[Rule],
    cfg: &SolverConfig,
    jobs: usize,
    manifest: Option<&Manifest>,
) -> Result<BenchReport, String> {
    let files = problem_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| e.to_string())?;
    let mut rows: Vec<BenchRow> = pool.install(|| files.par_iter().map(|f| bench_one(f, catalog, cfg)).collect());
    if let Some(m) = manifest {
        for r in &mut rows {
            r.expected = m.expected(&r.file, cfg.law_of_sines).map(str::to_owned);
        }
    }
    Ok(BenchReport::from_rows(rows))
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let setup = (|| {
        let cfg = args.solver.config()?;
        let catalog = args.solver.catalog()?;
        let manifest = args.manifest.as_deref().map(Manifest::load).transpose()?;
        let report = bench_dir(&args.dir, &catalog, &cfg, args.jobs, manifest.as_ref())?;
        Ok::<_, String>((cfg, report))
    })();
    let (cfg, report) = match setup {
        Ok(x) => x,
        Err(msg) => {
            let _ = writeln!(err, "{msg}");
            return EXIT_INPUT;
        }
    };
    let text = if args.solver.json {
        report.to_json(&cfg)
    } else {
        report.to_table()
    };
    let _ = out.write_all(text.as_bytes());
    let bad = report.mismatches();
    for r in &bad {
        let _ = writeln!(
            err,
            "{}: expected {}, got {}",
            r.file,
            r.expected.as_deref().unwrap_or("?"),
            r.outcome
        );
    }
    if bad.is_empty() {
        0
    } else {
        1
    }
}
