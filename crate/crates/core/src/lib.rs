//! Monte Carlo solver for the Dirichlet problem of the drifted Laplacian
//! `A = a∆ + b·∇` on bounded domains.
//!
//! The solution at an interior point `x` is the expected boundary value at the
//! limit of a walk-on-spheres chain whose jumps are the exit positions of the
//! diffusion `X_t = x + bt + σW_t` (with `σ² = 2a`) from balls inside the
//! domain. Each exit position follows a von Mises–Fisher law on the sphere, so
//! every jump is sampled exactly, without time stepping.
//!
//! Module map:
//!
//! - [`special`]: modified Bessel functions `I_v` and the normalizer `κ`.
//! - [`geometry`]: built-in domains and the analytic boundary-data vocabulary.
//! - [`rng`] and [`sampling`]: reproducible streams and the exit-law sampler.
//! - [`walker`]: one realization of the chain, stopped in an ε-shell.
//! - [`estimator`]: point and grid estimates with confidence intervals.
//! - [`validation`]: independent oracles and the pinned check suite.
//!
//! ```
//! use driftwalk::{Domain, BoundaryFunction, ProblemSpec, WalkConfig, estimate_point};
//!
//! // u(x) = exp(-x_1) solves u'' + u' = 0 (a = 1, b = (1, 0, 0)).
//! let problem = ProblemSpec::new(
//!     1.0,
//!     vec![1.0, 0.0, 0.0],
//!     Domain::ball(vec![0.0; 3], 1.0)?,
//!     BoundaryFunction::exp_drift(0, 1.0, 1.0),
//! )?;
//! let cfg = WalkConfig::new(1.0, 1e-3, 10_000)?;
//! let est = estimate_point(&problem, &[0.3, 0.2, 0.0], &cfg, 20_000, 7)?;
//! assert!((est.mean - (-0.3f64).exp()).abs() < 4.0 * est.stderr + 5e-3);
//! # Ok::<(), driftwalk::Error>(())
//! ```

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimator;
pub mod geometry;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod special;
pub mod stats;
pub mod validation;
pub mod walker;

pub use error::{Error, Result};
pub use estimator::{
    estimate_grid, estimate_point, max_principle_check, Estimate, GridResult, Lattice, MaxPrincipleReport, ProblemSpec,
};
pub use geometry::{BoundaryFunction, Domain};
pub use rng::RngStream;
pub use sampling::{exit_log_density, sample_exit, sample_uniform_sphere, ExitLaw};
pub use special::{bessel_i, kappa, log_bessel_i, log_kappa};
pub use walker::{expected_steps_probe, run_walk, Termination, WalkConfig, WalkOutcome};

/// Euclidean dot product.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
