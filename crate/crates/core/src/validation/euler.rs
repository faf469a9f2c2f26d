use crate::rng::RngStream;
use crate::{norm, Error, Result};

/// Time-stepping parameters. The walk stops at the first sample outside the
/// ball; the overshoot is not corrected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerConfig {
    pub dt: f64,
    pub max_steps: u64,
}

impl EulerConfig {
    pub fn new(dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
        }
        Ok(Self { dt, max_steps: 100_000_000 })
    }

    /// A warning when `dt` is coarse relative to the diffusive time `r²/σ²`.
    pub fn resolution_warning(&self, a: f64, r: f64) -> Option<String> {
        let scale = r * r / (2.0 * a);
        (self.dt > 1e-3 * scale).then(|| format!("dt = {} exceeds 1e-3 r²/σ² = {}", self.dt, 1e-3 * scale))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallExit {
    /// First post-exit sample, radially normalized onto the unit sphere.
    pub direction: Vec<f64>,
    /// Time of the first post-exit sample.
    pub time: f64,
}

/// Euler–Maruyama simulation of `X_t = bt + σW_t` (with `σ² = 2a`) from the
/// center of the ball of radius `r` until it leaves the ball.
pub fn simulate_ball_exit(a: f64, b: &[f64], r: f64, cfg: &EulerConfig, rng: &mut RngStream) -> Result<BallExit> {
    if !(a > 0.0) || !(r > 0.0) || b.is_empty() {
        return Err(Error::InvalidParameter("simulation needs a > 0, r > 0 and d ≥ 1".into()));
    }
    let noise = (2.0 * a * cfg.dt).sqrt();
    let r_sq = r * r;
    let mut x = vec![0.0; b.len()];
    for step in 1..=cfg.max_steps {
        let mut n_sq = 0.0;
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += bi * cfg.dt + noise * rng.standard_normal();
            n_sq += *xi * *xi;
        }
        if n_sq >= r_sq {
            let n = norm(&x);
            x.iter_mut().for_each(|c| *c /= n);
            return Ok(BallExit { direction: x, time: step as f64 * cfg.dt });
        }
    }
    Err(Error::StepBudget(cfg.max_steps))
}
