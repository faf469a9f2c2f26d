//! Monte Carlo estimates of `u(x) = E[f(Y(∞))]`.
//!
//! Walk `i` of an estimate always draws from `RngStream::new(seed, i)` and the
//! per-walk values are reduced by a fixed pairwise tree in walk order, so an
//! estimate is bit-identical for any number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{BoundaryFunction, Domain};
use crate::rng::{derive_seed, RngStream};
use crate::stats::{pairwise_sum, summarize, Z95};
use crate::walker::{run_walk, Termination, WalkConfig};
use crate::{norm, Error, Result};

/// Failure fraction above which an estimate is marked degraded.
pub const DEGRADED_FAILURE_FRACTION: f64 = 0.01;

/// Dirichlet problem `a∆u + b·∇u = 0` in `D`, `u = f` on `∂D`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    a: f64,
    drift: Vec<f64>,
    domain: Domain,
    boundary: BoundaryFunction,
    drift_speed: f64,
    drift_direction: Option<Vec<f64>>,
}

impl ProblemSpec {
    pub fn new(a: f64, drift: Vec<f64>, domain: Domain, boundary: BoundaryFunction) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("diffusion coefficient a = {a} must be positive")));
        }
        if drift.len() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), got: drift.len() });
        }
        if !drift.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("drift must be finite".into()));
        }
        boundary.validate(domain.dim())?;
        let drift_speed = norm(&drift);
        let drift_direction = (drift_speed > 0.0).then(|| drift.iter().map(|c| c / drift_speed).collect());
        Ok(Self { a, drift, domain, boundary, drift_speed, drift_direction })
    }

    /// Same operator and domain with different boundary data.
    pub fn with_boundary(&self, boundary: BoundaryFunction) -> Result<Self> {
        Self::new(self.a, self.drift.clone(), self.domain.clone(), boundary)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `σ² = 2a`.
    pub fn sigma_sq(&self) -> f64 {
        2.0 * self.a
    }

    pub fn drift(&self) -> &[f64] {
        &self.drift
    }

    pub fn drift_speed(&self) -> f64 {
        self.drift_speed
    }

    pub fn drift_direction(&self) -> Option<&[f64]> {
        self.drift_direction.as_deref()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn boundary(&self) -> &BoundaryFunction {
        &self.boundary
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    /// Normal-approximation 95% interval `mean ± 1.959964·stderr`.
    pub ci95: (f64, f64),
    pub n_walks: usize,
    pub n_budget_failures: usize,
    pub mean_steps: f64,
    pub degraded: bool,
}

impl Estimate {
    /// The value at a boundary point: exact, no walks.
    pub fn exact(value: f64) -> Self {
        Estimate {
            mean: value,
            stderr: 0.0,
            ci95: (value, value),
            n_walks: 0,
            n_budget_failures: 0,
            mean_steps: 0.0,
            degraded: false,
        }
    }

    fn from_walks(values: &[f64], steps: &[f64], failures: usize) -> Self {
        let s = summarize(values);
        let n = values.len();
        let half = Z95 * s.stderr;
        Estimate {
            mean: s.mean,
            stderr: s.stderr,
            ci95: (s.mean - half, s.mean + half),
            n_walks: n,
            n_budget_failures: failures,
            mean_steps: pairwise_sum(steps) / n as f64,
            degraded: failures as f64 > DEGRADED_FAILURE_FRACTION * n as f64,
        }
    }
}

/// Run `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("failed to build worker pool").install(f)
}

/// Estimate `u(x)` from `n_walks` independent walks keyed by `(seed, i)`.
///
/// A point on `∂D` returns `f(x)` exactly with zero standard error.
pub fn estimate_point(
    problem: &ProblemSpec,
    x: &[f64],
    cfg: &WalkConfig,
    n_walks: usize,
    seed: u64,
) -> Result<Estimate> {
    if n_walks < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 walks, got {n_walks}")));
    }
    let dom = problem.domain();
    if dom.distance_to_boundary(x)? == 0.0 {
        return Ok(Estimate::exact(problem.boundary().eval(x)));
    }
    if !dom.contains(x)? {
        return Err(Error::OutsideDomain(x.to_vec()));
    }
    let cfg = WalkConfig { record_path: false, ..*cfg };
    let walks = (0..n_walks as u64)
        .into_par_iter()
        .map(|i| {
            let out = run_walk(problem, x, &cfg, &mut RngStream::new(seed, i))?;
            Ok((
                problem.boundary().eval(&out.exit_point),
                out.steps as f64,
                out.termination == Termination::BudgetExhausted,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = walks.iter().map(|w| w.0).collect();
    let steps: Vec<f64> = walks.iter().map(|w| w.1).collect();
    let failures = walks.iter().filter(|w| w.2).count();
    Ok(Estimate::from_walks(&values, &steps, failures))
}

/// Axis-aligned lattice with `counts[i]` nodes spanning `[lo[i], hi[i]]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lattice {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Lattice {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, counts: Vec<usize>) -> Result<Self> {
        if lo.len() != hi.len() || lo.len() != counts.len() || lo.is_empty() {
            return Err(Error::InvalidParameter("lattice lo, hi and counts must have equal nonzero length".into()));
        }
        if lo.iter().chain(&hi).any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("lattice bounds must be finite".into()));
        }
        Ok(Self { lo, hi, counts })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `index` in row-major order (last axis fastest).
    pub fn node(&self, mut index: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.dim()];
        for axis in (0..self.dim()).rev() {
            let n = self.counts[axis];
            let k = index % n;
            index /= n;
            p[axis] = if n == 1 {
                self.lo[axis]
            } else {
                self.lo[axis] + (self.hi[axis] - self.lo[axis]) * k as f64 / (n - 1) as f64
            };
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridNode {
    pub index: usize,
    pub point: Vec<f64>,
    pub estimate: Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridResult {
    pub nodes: Vec<GridNode>,
    /// Nodes outside `D̄`, as `(index, point)`.
    pub skipped: Vec<(usize, Vec<f64>)>,
}

/// Estimate every lattice node in `D̄`. Node `k` uses the stream family
/// `derive_seed(seed, k)`.
pub fn estimate_grid(
    problem: &ProblemSpec,
    grid: &Lattice,
    cfg: &WalkConfig,
    n_walks: usize,
    seed: u64,
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.dim() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: grid.dim() });
    }
    let dom = problem.domain();
    let mut result = GridResult { nodes: Vec::new(), skipped: Vec::new() };
    for index in 0..grid.len() {
        let point = grid.node(index);
        if dom.distance_to_boundary(&point)? > 0.0 && !dom.contains(&point)? {
            result.skipped.push((index, point));
            continue;
        }
        let estimate = estimate_point(problem, &point, cfg, n_walks, derive_seed(seed, index as u64))?;
        result.nodes.push(GridNode { index, point, estimate });
    }
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxPrincipleReport {
    pub passed: bool,
    /// Indices (into the checked slice) whose whole CI is out of range.
    pub violations: Vec<usize>,
}

/// Flag estimates whose 95% interval lies entirely outside
/// `[min f - tol, max f + tol]`.
pub fn max_principle_check(results: &[Estimate], f_range: (f64, f64), tol: f64) -> MaxPrincipleReport {
    let (lo, hi) = (f_range.0 - tol, f_range.1 + tol);
    let violations: Vec<usize> =
        results.iter().enumerate().filter(|(_, e)| e.ci95.1 < lo || e.ci95.0 > hi).map(|(i, _)| i).collect();
    MaxPrincipleReport { passed: violations.is_empty(), violations }
}
