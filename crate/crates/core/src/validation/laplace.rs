//! Laplace transform of the Brownian exit time from a ball,
//! `E[e^{-λτ_r}] = κ_d(r√(2λ))`, checked against time-stepped exits.

use rayon::prelude::*;
use serde::Serialize;

use super::euler::{simulate_ball_exit, EulerConfig};
use crate::rng::{derive_seed, RngStream};
use crate::special::kappa;
use crate::stats::summarize;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaplaceReport {
    pub dim: usize,
    pub radius: f64,
    pub lambda: f64,
    pub target: f64,
    pub coarse: f64,
    pub fine: f64,
    /// `2·fine − coarse`, cancelling the `O(√dt)` monitoring bias.
    pub extrapolated: f64,
    pub stderr: f64,
    pub z_score: f64,
    pub passed: bool,
}

fn transform_estimate(d: usize, r: f64, lambda: f64, n: usize, dt: f64, seed: u64) -> Result<(f64, f64)> {
    let cfg = EulerConfig::new(dt)?;
    let zero = vec![0.0; d];
    let values = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            simulate_ball_exit(0.5, &zero, r, &cfg, &mut RngStream::new(seed, i)).map(|e| (-lambda * e.time).exp())
        })
        .collect::<Result<Vec<_>>>()?;
    let s = summarize(&values);
    Ok((s.mean, s.stderr))
}

/// Estimate `E[e^{-λτ_r}]` for standard Brownian motion in `ℝ^d` at steps
/// `dt` and `dt/4`, extrapolate, and compare with `κ_d(r√(2λ))`. Passes when
/// `|z| < 3`.
pub fn check_laplace_transform(
    d: usize,
    r: f64,
    lambda: f64,
    n_sims: usize,
    dt: f64,
    seed: u64,
) -> Result<LaplaceReport> {
    if !(lambda > 0.0) || !(r > 0.0) || n_sims < 2 {
        return Err(Error::InvalidParameter("Laplace check needs λ > 0, r > 0 and at least 2 runs".into()));
    }
    let target = kappa(d, r * (2.0 * lambda).sqrt())?;
    let (coarse, se_c) = transform_estimate(d, r, lambda, n_sims, dt, derive_seed(seed, 0))?;
    let (fine, se_f) = transform_estimate(d, r, lambda, n_sims, 0.25 * dt, derive_seed(seed, 1))?;
    let extrapolated = 2.0 * fine - coarse;
    let stderr = (4.0 * se_f * se_f + se_c * se_c).sqrt();
    let z_score = (extrapolated - target) / stderr;
    Ok(LaplaceReport {
        dim: d,
        radius: r,
        lambda,
        target,
        coarse,
        fine,
        extrapolated,
        stderr,
        z_score,
        passed: z_score.abs() < 3.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_targets() {
        let z = 2f64.sqrt();
        assert!((kappa(3, z).unwrap() - z / z.sinh()).abs() < 1e-14);
        assert!((kappa(3, z).unwrap() - 0.7308).abs() < 5e-5);
        assert!((kappa(1, 1.0).unwrap() - 0.648054).abs() < 1e-6);
    }

    #[test]
    fn vanishing_rate_tends_to_one() {
        let rep = check_laplace_transform(2, 1.0, 1e-9, 200, 1e-2, 1).unwrap();
        assert!((rep.target - 1.0).abs() < 1e-9);
        assert!((rep.extrapolated - 1.0).abs() < 1e-6);
    }

    #[test]
    fn d3_unit_rate() {
        let rep = check_laplace_transform(3, 1.0, 1.0, 10_000, 1e-3, 2).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}
