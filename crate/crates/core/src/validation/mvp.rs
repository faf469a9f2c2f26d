//! Quadrature check of the drifted mean value property
//!
//! `u(x) = κ_d(r‖b‖/σ²) ∮ u(y) exp(b·(y−x)/σ²) μ_r(dy)`,
//!
//! which holds for every sphere inside `D` exactly when `Au = 0`.

use crate::estimator::ProblemSpec;
use crate::geometry::BoundaryFunction;
use crate::quadrature::{circle_average, sphere_average};
use crate::special::kappa;
use crate::{dot, Error, Result};

/// Trapezoid nodes on the circle.
pub const CIRCLE_NODES: usize = 2048;
/// Gauss–Legendre nodes in the polar cosine on `S²`.
pub const SPHERE_POLAR_NODES: usize = 64;
/// Trapezoid nodes in azimuth on `S²`.
pub const SPHERE_AZIMUTH_NODES: usize = 128;

/// Functions the checker can evaluate on spheres.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleFunction {
    Analytic(BoundaryFunction),
    /// `y ↦ ‖y‖²`; not annihilated by `A`, so its residual must be nonzero.
    SquaredNorm,
}

impl OracleFunction {
    pub fn eval(&self, y: &[f64]) -> f64 {
        match self {
            OracleFunction::Analytic(f) => f.eval(y),
            OracleFunction::SquaredNorm => dot(y, y),
        }
    }
}

/// Quadrature value of the right-hand side minus `u(x)`.
pub fn check_mvp(problem: &ProblemSpec, u: &OracleFunction, x: &[f64], r: f64) -> Result<f64> {
    mvp_residual(problem, u, x, r, 1)
}

/// As [`check_mvp`] with every quadrature order multiplied by `refine`.
pub fn mvp_residual(problem: &ProblemSpec, u: &OracleFunction, x: &[f64], r: f64, refine: usize) -> Result<f64> {
    let d = problem.dim();
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.len() });
    }
    if let OracleFunction::Analytic(f) = u {
        f.validate(d)?;
    }
    let dist = problem.domain().distance_to_boundary(x)?;
    if !problem.domain().contains(x)? || !(r > 0.0 && r < dist) {
        return Err(Error::InvalidParameter(format!("sphere radius {r} must lie in (0, {dist})")));
    }
    let sigma_sq = problem.sigma_sq();
    let b = problem.drift();
    let mut y = vec![0.0; d];
    let mut weighted = |w: &[f64]| {
        for i in 0..d {
            y[i] = x[i] + r * w[i];
        }
        u.eval(&y) * (r * dot(b, w) / sigma_sq).exp()
    };
    let average = match d {
        1 => 0.5 * (weighted(&[1.0]) + weighted(&[-1.0])),
        2 => circle_average(CIRCLE_NODES * refine, weighted),
        3 => sphere_average(SPHERE_POLAR_NODES * refine, SPHERE_AZIMUTH_NODES * refine, weighted),
        _ => return Err(Error::InvalidParameter(format!("mean value quadrature supports d ≤ 3, got {d}"))),
    };
    Ok(kappa(d, r * problem.drift_speed() / sigma_sq)? * average - u.eval(x))
}
