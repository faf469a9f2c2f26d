//! Run configuration, read from TOML.
//!
//! ```toml
//! [problem]
//! a = 1.0
//! b = [1.0, 0.0]
//! domain = { shape = "ball", center = [0.0, 0.0], radius = 1.0 }
//! boundary = { kind = "exp-drift", axis = 0 }
//!
//! [walk]
//! varsigma = 1.0
//! epsilon = 1e-3
//! max_steps = 10000
//!
//! [execution]
//! n_walks = 10000
//! seed = 42
//! workers = 4
//!
//! [query]
//! point = [0.2, 0.1]
//!
//! [output]
//! format = "csv"
//! path = "u.csv"
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use driftwalk::{BoundaryFunction, Domain, Lattice, ProblemSpec, WalkConfig};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemBlock,
    #[serde(default)]
    pub walk: WalkBlock,
    pub execution: ExecutionBlock,
    pub query: QueryBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub a: f64,
    pub b: Vec<f64>,
    pub domain: DomainSpec,
    pub boundary: BoundarySpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Annulus { center: Vec<f64>, inner: f64, outer: f64 },
}

/// Boundary data. `exp-drift` takes `a` and the drift component along `axis`
/// from the problem block, so it is always the annihilated exponential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundarySpec {
    Constant { value: f64 },
    Coordinate { axis: usize },
    Affine { offset: f64, coeffs: Vec<f64> },
    ExpDrift { axis: usize },
    Sum { weights: Vec<f64>, terms: Vec<BoundarySpec> },
}

/// Unset fields fall back to `ς = 1`, `ε = 1e-3 · diam D`, 10⁴ steps.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub varsigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExecutionBlock {
    pub n_walks: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

/// Exactly one of `point` or `grid`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default)]
    pub format: Format,
    /// Standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

pub enum Query {
    Point(Vec<f64>),
    Grid(Lattice),
}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Field-level checks whose messages name the offending key.
    fn check(&self) -> anyhow::Result<()> {
        let p = &self.problem;
        if !(p.a > 0.0 && p.a.is_finite()) {
            bail!("problem.a must be positive and finite, got {}", p.a);
        }
        if p.b.is_empty() || p.b.iter().any(|x| !x.is_finite()) {
            bail!("problem.b must be a nonempty list of finite numbers");
        }
        let d = p.b.len();
        let dom_dim = match &p.domain {
            DomainSpec::Ball { center, .. } | DomainSpec::Annulus { center, .. } => center.len(),
            DomainSpec::Box { lo, hi } => {
                if lo.len() != hi.len() {
                    bail!("problem.domain.lo and problem.domain.hi differ in length");
                }
                lo.len()
            }
        };
        if dom_dim != d {
            bail!("problem.domain has dimension {dom_dim} but problem.b has {d} components");
        }
        if let Some(v) = self.walk.varsigma {
            if !(v > 0.0 && v <= 1.0) {
                bail!("walk.varsigma must lie in (0, 1], got {v}");
            }
        }
        if let Some(e) = self.walk.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                bail!("walk.epsilon must be positive, got {e}");
            }
        }
        if self.walk.max_steps == Some(0) {
            bail!("walk.max_steps must be at least 1");
        }
        if self.execution.n_walks < 2 {
            bail!("execution.n_walks must be at least 2, got {}", self.execution.n_walks);
        }
        if self.execution.workers == Some(0) {
            bail!("execution.workers must be at least 1");
        }
        match (&self.query.point, &self.query.grid) {
            (Some(x), None) if x.len() != d => bail!("query.point has {} coordinates, expected {d}", x.len()),
            (None, Some(g)) if g.lo.len() != d || g.hi.len() != d || g.counts.len() != d => {
                bail!("query.grid lo, hi and counts must each have {d} entries")
            }
            (Some(_), Some(_)) => bail!("query: give either point or grid, not both"),
            (None, None) => bail!("query: one of point or grid is required"),
            _ => {}
        }
        self.problem_spec()?;
        self.query()?;
        Ok(())
    }

    pub fn problem_spec(&self) -> anyhow::Result<ProblemSpec> {
        let p = &self.problem;
        let domain = match &p.domain {
            DomainSpec::Ball { center, radius } => Domain::ball(center.clone(), *radius),
            DomainSpec::Box { lo, hi } => Domain::axis_box(lo.clone(), hi.clone()),
            DomainSpec::Annulus { center, inner, outer } => Domain::annulus(center.clone(), *inner, *outer),
        }
        .context("problem.domain")?;
        let boundary = boundary_function(&p.boundary, p.a, &p.b).context("problem.boundary")?;
        ProblemSpec::new(p.a, p.b.clone(), domain, boundary).context("problem")
    }

    pub fn walk_config(&self, problem: &ProblemSpec) -> anyhow::Result<WalkConfig> {
        let d = WalkConfig::for_problem(problem);
        WalkConfig::new(
            self.walk.varsigma.unwrap_or(d.varsigma),
            self.walk.epsilon.unwrap_or(d.epsilon),
            self.walk.max_steps.unwrap_or(d.max_steps),
        )
        .context("walk")
    }

    pub fn query(&self) -> anyhow::Result<Query> {
        match (&self.query.point, &self.query.grid) {
            (Some(x), _) => Ok(Query::Point(x.clone())),
            (None, Some(g)) => {
                Ok(Query::Grid(Lattice::new(g.lo.clone(), g.hi.clone(), g.counts.clone()).context("query.grid")?))
            }
            (None, None) => bail!("query: one of point or grid is required"),
        }
    }
}

fn boundary_function(spec: &BoundarySpec, a: f64, b: &[f64]) -> anyhow::Result<BoundaryFunction> {
    Ok(match spec {
        BoundarySpec::Constant { value } => BoundaryFunction::constant(*value),
        BoundarySpec::Coordinate { axis } => BoundaryFunction::coordinate(*axis),
        BoundarySpec::Affine { offset, coeffs } => BoundaryFunction::affine(*offset, coeffs.clone()),
        BoundarySpec::ExpDrift { axis } => {
            let Some(&bj) = b.get(*axis) else { bail!("exp-drift axis {axis} out of range") };
            BoundaryFunction::exp_drift(*axis, a, bj)
        }
        BoundarySpec::Sum { weights, terms } => {
            if weights.len() != terms.len() {
                bail!("sum: {} weights for {} terms", weights.len(), terms.len());
            }
            let parts = weights
                .iter()
                .zip(terms)
                .map(|(w, t)| Ok((*w, boundary_function(t, a, b)?)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            BoundaryFunction::sum(parts)
        }
    })
}
