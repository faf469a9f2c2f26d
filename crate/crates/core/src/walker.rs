//! One realization of the walk-on-spheres chain for the drifted operator.
//!
//! From the current point `y` the chain jumps to the exit position of `X` from
//! the ball of radius `r = ς·d(y, ∂D)` around `y`. The concentration of the
//! exit law, `r‖b‖/σ²`, shrinks with the ball, so near the boundary the jumps
//! become nearly uniform. The chain is stopped once it is within `ε` of the
//! boundary and the stopping point is projected onto `∂D`.

use rayon::prelude::*;
use serde::Serialize;

use crate::estimator::ProblemSpec;
use crate::rng::RngStream;
use crate::sampling::sample_direction_into;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkConfig {
    /// Ball shrink factor `ς ∈ (0, 1]`.
    pub varsigma: f64,
    /// Shell width `ε > 0` in domain length units.
    pub epsilon: f64,
    pub max_steps: usize,
    pub record_path: bool,
}

impl WalkConfig {
    pub fn new(varsigma: f64, epsilon: f64, max_steps: usize) -> Result<Self> {
        if !(varsigma > 0.0 && varsigma <= 1.0) {
            return Err(Error::InvalidParameter(format!("varsigma must lie in (0, 1], got {varsigma}")));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        if max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be at least 1".into()));
        }
        Ok(Self { varsigma, epsilon, max_steps, record_path: false })
    }

    /// `ς = 1`, `ε = 10⁻³ × diameter`, `10⁴` steps.
    pub fn for_problem(problem: &ProblemSpec) -> Self {
        Self { varsigma: 1.0, epsilon: 1e-3 * problem.domain().diameter(), max_steps: 10_000, record_path: false }
    }

    pub fn with_record_path(mut self, record: bool) -> Self {
        self.record_path = record;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ShellReached,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkOutcome {
    /// Projection of the final position onto `∂D`.
    pub exit_point: Vec<f64>,
    /// Chain position when the walk stopped, before projection.
    pub final_position: Vec<f64>,
    pub steps: usize,
    pub termination: Termination,
    /// Every chain position including the start, when requested.
    pub path: Option<Vec<Vec<f64>>>,
}

pub fn run_walk(problem: &ProblemSpec, x: &[f64], cfg: &WalkConfig, rng: &mut RngStream) -> Result<WalkOutcome> {
    let dom = problem.domain();
    if !dom.contains(x)? {
        return Err(Error::NotInDomain(x.to_vec()));
    }
    let sigma_sq = problem.sigma_sq();
    let speed = problem.drift_speed();
    let mu = problem.drift_direction();

    let mut y = x.to_vec();
    let mut omega = vec![0.0; x.len()];
    let mut path = cfg.record_path.then(|| vec![y.clone()]);
    let mut steps = 0usize;
    let termination = loop {
        let dist = dom.distance_to_boundary(&y)?;
        if dist < cfg.epsilon {
            break Termination::ShellReached;
        }
        if steps >= cfg.max_steps {
            break Termination::BudgetExhausted;
        }
        let r = cfg.varsigma * dist;
        sample_direction_into(r * speed / sigma_sq, mu, rng, &mut omega)?;
        y.iter_mut().zip(&omega).for_each(|(yi, wi)| *yi += r * wi);
        steps += 1;
        if !y.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFiniteState(steps));
        }
        if let Some(p) = path.as_mut() {
            p.push(y.clone());
        }
    };
    let exit_point = dom.project_to_boundary(&y)?;
    Ok(WalkOutcome { exit_point, final_position: y, steps, termination, path })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepProbe {
    /// `(ε, mean steps)` in the order requested.
    pub rows: Vec<(f64, f64)>,
    /// Least-squares fit `mean steps ≈ slope · ln(1/ε) + intercept`.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub rms_residual: f64,
}

/// Mean step counts over `n_walks` walks for each shell width.
pub fn expected_steps_probe(
    problem: &ProblemSpec,
    x: &[f64],
    cfg: &WalkConfig,
    epsilons: &[f64],
    n_walks: usize,
    seed: u64,
) -> Result<StepProbe> {
    if n_walks == 0 || epsilons.is_empty() {
        return Err(Error::InvalidParameter("step probe needs walks and shell widths".into()));
    }
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let cfg = WalkConfig { epsilon: eps, record_path: false, ..*cfg };
        let counts = (0..n_walks as u64)
            .into_par_iter()
            .map(|i| run_walk(problem, x, &cfg, &mut RngStream::new(seed, i)).map(|o| o.steps as f64))
            .collect::<Result<Vec<_>>>()?;
        rows.push((eps, crate::stats::pairwise_sum(&counts) / n_walks as f64));
    }
    let xs: Vec<f64> = rows.iter().map(|(e, _)| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, s)| *s).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms_residual = (xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(StepProbe { rows, slope, intercept, rms_residual })
}
