use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use driftwalk::estimator::with_workers;
use driftwalk::validation::{run_suite, Suite, SuiteReport};
use driftwalk::{estimate_grid, estimate_point, sample_exit, Estimate, ExitLaw, RngStream};
use serde::Serialize;

use crate::config::{Format, Query, RunConfig};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    ConfigError = 1,
    /// A degraded estimate, or a failed validation check.
    Degraded = 2,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub point: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub n_walks: usize,
    pub mean_steps: f64,
    pub budget_failures: usize,
    pub degraded: bool,
}

impl Record {
    fn new(point: Vec<f64>, e: &Estimate) -> Self {
        Record {
            point,
            mean: e.mean,
            stderr: e.stderr,
            ci_lo: e.ci95.0,
            ci_hi: e.ci95.1,
            n_walks: e.n_walks,
            mean_steps: e.mean_steps,
            budget_failures: e.n_budget_failures,
            degraded: e.degraded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOutput {
    pub records: Vec<Record>,
    /// Grid nodes outside the closed domain.
    pub skipped: Vec<Vec<f64>>,
}

/// Run the configured query. Grid nodes outside `D̄` are skipped; a single
/// query point outside it is an error.
pub fn solve(cfg: &RunConfig) -> anyhow::Result<SolveOutput> {
    let problem = cfg.problem_spec()?;
    let walk = cfg.walk_config(&problem)?;
    let (n, seed) = (cfg.execution.n_walks, cfg.execution.seed);
    let run = || -> anyhow::Result<SolveOutput> {
        Ok(match cfg.query()? {
            Query::Point(x) => {
                let e = estimate_point(&problem, &x, &walk, n, seed).context("query.point")?;
                SolveOutput { records: vec![Record::new(x, &e)], skipped: vec![] }
            }
            Query::Grid(grid) => {
                let g = estimate_grid(&problem, &grid, &walk, n, seed)?;
                SolveOutput {
                    records: g.nodes.into_iter().map(|n| Record::new(n.point, &n.estimate)).collect(),
                    skipped: g.skipped.into_iter().map(|s| s.1).collect(),
                }
            }
        })
    };
    match cfg.execution.workers {
        Some(w) => with_workers(w, run),
        None => run(),
    }
}

/// Header `x1..xd,mean,stderr,ci_lo,ci_hi,n_walks,mean_steps,budget_failures,degraded`;
/// floats use the shortest decimal that round-trips.
pub fn solve_csv(dim: usize, out: &SolveOutput) -> String {
    let mut s = String::new();
    for i in 1..=dim {
        write!(s, "x{i},").unwrap();
    }
    s.push_str("mean,stderr,ci_lo,ci_hi,n_walks,mean_steps,budget_failures,degraded\n");
    for r in &out.records {
        for x in &r.point {
            write!(s, "{x},").unwrap();
        }
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.mean, r.stderr, r.ci_lo, r.ci_hi, r.n_walks, r.mean_steps, r.budget_failures, r.degraded
        )
        .unwrap();
    }
    s
}

fn emit(path: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

pub fn render(cfg: &RunConfig, out: &SolveOutput) -> String {
    match cfg.output.format {
        Format::Csv => solve_csv(cfg.problem.b.len(), out),
        Format::Json => serde_json::to_string_pretty(out).expect("records serialize") + "\n",
    }
}

pub fn cmd_solve(cfg: &RunConfig) -> anyhow::Result<Status> {
    let out = solve(cfg)?;
    emit(cfg.output.path.as_deref(), &render(cfg, &out))?;
    Ok(if out.records.iter().any(|r| r.degraded) { Status::Degraded } else { Status::Success })
}

pub fn validate(selector: &str) -> anyhow::Result<SuiteReport> {
    let suite: Suite = selector.parse()?;
    Ok(run_suite(suite)?)
}

pub fn cmd_validate(selector: &str, path: Option<&Path>) -> anyhow::Result<Status> {
    let report = validate(selector)?;
    for c in &report.checks {
        eprintln!("{c}");
    }
    emit(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(if report.passed { Status::Success } else { Status::Degraded })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleExitParams {
    pub dim: usize,
    pub a: f64,
    pub b: Vec<f64>,
    pub radius: f64,
    pub n: usize,
    pub seed: u64,
}

/// `n` exit directions from the centre of a ball of the given radius, drawn
/// on stream `(seed, 0)`; rows of `d` coordinates under the header `w1..wd`.
pub fn sample_exit_csv(p: &SampleExitParams) -> anyhow::Result<String> {
    if p.dim == 0 {
        bail!("dimension must be at least 1");
    }
    if p.b.len() != p.dim {
        bail!("drift has {} components, expected {}", p.b.len(), p.dim);
    }
    let law = ExitLaw::from_drift(p.a, &p.b, p.radius)?;
    let mut rng = RngStream::new(p.seed, 0);
    let header: Vec<String> = (1..=p.dim).map(|i| format!("w{i}")).collect();
    let mut s = header.join(",") + "\n";
    for _ in 0..p.n {
        let w = sample_exit(&law, &mut rng)?;
        let row: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    Ok(s)
}

pub fn cmd_sample_exit(p: &SampleExitParams, path: Option<&Path>) -> anyhow::Result<Status> {
    emit(path, &sample_exit_csv(p)?)?;
    Ok(Status::Success)
}
