//! Exact sampling of the sphere-exit law of `X_t = x + bt + σW_t`.
//!
//! Started at the center of a ball of radius `r`, the process leaves through
//! the point `x + rω` where `ω` has density `κ_d(c) exp(c μ·ω)` against the
//! uniform law on `S^{d-1}`, with concentration `c = r‖b‖/σ²` and mean
//! direction `μ = b/‖b‖`. That is a von Mises–Fisher law, sampled here by
//! rejection:
//!
//! - `d = 1`: the two-point law `P(ω = μ) = 1 / (1 + e^{-2c})`.
//! - `d = 2`: the Best–Fisher wrapped-Cauchy envelope for the angle.
//! - `d ≥ 3`: Wood's Beta envelope for `t = μ·ω`, then a uniform direction in
//!   the tangent space of `μ`.

use rand_distr::{Beta, Distribution};

use crate::rng::RngStream;
use crate::special::log_kappa;
use crate::{dot, norm, Error, Result};

/// Proposals allowed per draw before the sampler reports a failure.
pub const REJECTION_BUDGET: u64 = 1_000_000;

const UNIT_TOLERANCE: f64 = 1e-9;

/// Exit law of the drifted process from a ball, relative to its center.
#[derive(Clone, Debug, PartialEq)]
pub struct ExitLaw {
    dim: usize,
    radius: f64,
    concentration: f64,
    mean_direction: Option<Vec<f64>>,
}

impl ExitLaw {
    pub fn new(dim: usize, radius: f64, concentration: f64, mean_direction: Option<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("radius {radius} must be positive")));
        }
        if !(concentration >= 0.0) || !concentration.is_finite() {
            return Err(Error::InvalidParameter(format!("concentration {concentration} must be nonnegative")));
        }
        let mean_direction = match mean_direction {
            Some(mu) => {
                if mu.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: mu.len() });
                }
                let n = norm(&mu);
                if (n - 1.0).abs() > UNIT_TOLERANCE {
                    return Err(Error::NotUnitVector(n));
                }
                Some(mu)
            }
            None if concentration > 0.0 => {
                return Err(Error::InvalidParameter("positive concentration needs a mean direction".into()))
            }
            None => None,
        };
        Ok(Self { dim, radius, concentration, mean_direction })
    }

    /// The law for diffusion coefficient `a` (so `σ² = 2a`) and drift `b`.
    pub fn from_drift(a: f64, b: &[f64], radius: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidParameter(format!("diffusion coefficient {a} must be positive")));
        }
        let speed = norm(b);
        if speed == 0.0 {
            return Self::new(b.len(), radius, 0.0, None);
        }
        let mu = b.iter().map(|c| c / speed).collect();
        Self::new(b.len(), radius, radius * speed / (2.0 * a), Some(mu))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn concentration(&self) -> f64 {
        self.concentration
    }

    pub fn mean_direction(&self) -> Option<&[f64]> {
        self.mean_direction.as_deref()
    }
}

/// Fill `out` with a uniform point of `S^{d-1}`, `d = out.len()`.
pub fn uniform_sphere_into(rng: &mut RngStream, out: &mut [f64]) {
    if out.len() == 1 {
        out[0] = if rng.coin() { 1.0 } else { -1.0 };
        return;
    }
    loop {
        for c in out.iter_mut() {
            *c = rng.standard_normal();
        }
        let n = norm(out);
        if n > 1e-150 {
            out.iter_mut().for_each(|c| *c /= n);
            return;
        }
    }
}

pub fn sample_uniform_sphere(d: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut out = vec![0.0; d.max(1)];
    uniform_sphere_into(rng, &mut out);
    out
}

/// Best–Fisher sampler for the von Mises angle on `(-π, π]`.
fn von_mises_angle(concentration: f64, rng: &mut RngStream) -> Result<f64> {
    let k = concentration;
    let root = (1.0 + 4.0 * k * k).sqrt();
    let tau = 1.0 + root;
    // (τ - √(2τ)) / (2κ) without cancellation for small κ.
    let rho = 2.0 * k * tau / ((root + 1.0) * (tau + (2.0 * tau).sqrt()));
    let r = (1.0 + rho * rho) / (2.0 * rho);
    for _ in 0..REJECTION_BUDGET {
        let z = (std::f64::consts::PI * rng.uniform()).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = k * (r - f);
        let u2 = rng.uniform_pos();
        if c * (2.0 - c) > u2 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let theta = f.clamp(-1.0, 1.0).acos();
            return Ok(if rng.coin() { theta } else { -theta });
        }
    }
    Err(Error::RejectionBudget(REJECTION_BUDGET))
}

/// Wood's sampler for `t = μ·ω` with density `∝ (1-t²)^{(d-3)/2} e^{κt}`.
fn wood_polar_cosine(d: usize, concentration: f64, rng: &mut RngStream) -> Result<f64> {
    let m1 = (d - 1) as f64;
    let k = concentration;
    let b = m1 / (2.0 * k + (4.0 * k * k + m1 * m1).sqrt());
    let x0 = (1.0 - b) / (1.0 + b);
    let c = k * x0 + m1 * (1.0 - x0 * x0).ln();
    let beta = Beta::new(0.5 * m1, 0.5 * m1).expect("Beta parameters are positive");
    for _ in 0..REJECTION_BUDGET {
        let z: f64 = beta.sample(rng);
        let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        let u = rng.uniform_pos();
        if k * w + m1 * (1.0 - x0 * w).ln() - c >= u.ln() {
            return Ok(w.clamp(-1.0, 1.0));
        }
    }
    Err(Error::RejectionBudget(REJECTION_BUDGET))
}

/// Draw the exit direction for concentration `c` and mean direction `mu`
/// into `out`. This is the allocation-free entry point the walker uses.
pub fn sample_direction_into(
    concentration: f64,
    mu: Option<&[f64]>,
    rng: &mut RngStream,
    out: &mut [f64],
) -> Result<()> {
    let d = out.len();
    let mu = match mu {
        Some(mu) if concentration > 0.0 => mu,
        _ => {
            uniform_sphere_into(rng, out);
            return Ok(());
        }
    };
    match d {
        1 => {
            let p_forward = 1.0 / (1.0 + (-2.0 * concentration).exp());
            out[0] = if rng.uniform() < p_forward { mu[0] } else { -mu[0] };
        }
        2 => {
            let theta = von_mises_angle(concentration, rng)?;
            let (s, c) = theta.sin_cos();
            out[0] = c * mu[0] - s * mu[1];
            out[1] = c * mu[1] + s * mu[0];
        }
        _ => {
            let t = wood_polar_cosine(d, concentration, rng)?;
            // Uniform direction orthogonal to μ.
            loop {
                for o in out.iter_mut() {
                    *o = rng.standard_normal();
                }
                let along = dot(out, mu);
                out.iter_mut().zip(mu).for_each(|(o, m)| *o -= along * m);
                let n = norm(out);
                if n > 1e-12 {
                    let s = (1.0 - t * t).max(0.0).sqrt() / n;
                    out.iter_mut().zip(mu).for_each(|(o, m)| *o = t * m + s * *o);
                    break;
                }
            }
        }
    }
    Ok(())
}

/// One exit direction `ω ∈ S^{d-1}`; the exit point is `center + r ω`.
pub fn sample_exit(law: &ExitLaw, rng: &mut RngStream) -> Result<Vec<f64>> {
    let mut out = vec![0.0; law.dim];
    sample_direction_into(law.concentration, law.mean_direction(), rng, &mut out)?;
    Ok(out)
}

/// Log-density of `ω` relative to the normalized surface measure:
/// `ln κ_d(c) + c μ·ω`.
pub fn exit_log_density(law: &ExitLaw, omega: &[f64]) -> Result<f64> {
    if omega.len() != law.dim {
        return Err(Error::DimensionMismatch { expected: law.dim, got: omega.len() });
    }
    let n = norm(omega);
    if (n - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnitVector(n));
    }
    match law.mean_direction() {
        Some(mu) => Ok(log_kappa(law.dim, law.concentration)? + law.concentration * dot(mu, omega)),
        None => Ok(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::mean_resultant_length;
    use crate::stats::{ks_critical_one_sample, ks_critical_two_sample, ks_one_sample, ks_two_sample, summarize};
    use std::f64::consts::PI;

    fn axis_law(d: usize, c: f64) -> ExitLaw {
        let mut mu = vec![0.0; d];
        mu[0] = 1.0;
        ExitLaw::new(d, 1.0, c, Some(mu)).unwrap()
    }

    fn polar_cosines(law: &ExitLaw, n: usize, seed: u64) -> Vec<f64> {
        let mu = law.mean_direction().unwrap().to_vec();
        let mut rng = RngStream::new(seed, 0);
        (0..n).map(|_| dot(&sample_exit(law, &mut rng).unwrap(), &mu)).collect()
    }

    #[test]
    fn uniform_d1_is_balanced() {
        let mut rng = RngStream::new(1, 0);
        let n = 1_000_000;
        let s: f64 = (0..n).map(|_| sample_uniform_sphere(1, &mut rng)[0]).sum();
        assert!((s / n as f64).abs() < 3e-3);
    }

    #[test]
    fn uniform_d3_coordinate_means() {
        let mut rng = RngStream::new(2, 0);
        let n = 100_000;
        let mut sums = [0.0; 3];
        for _ in 0..n {
            let w = sample_uniform_sphere(3, &mut rng);
            assert!((norm(&w) - 1.0).abs() < 1e-14);
            for i in 0..3 {
                sums[i] += w[i];
            }
        }
        let se = (1.0 / 3.0 / n as f64).sqrt();
        for s in sums {
            assert!((s / n as f64).abs() < 3.0 * se);
        }
    }

    #[test]
    fn uniform_d2_angle_ks() {
        let mut rng = RngStream::new(3, 0);
        let n = 100_000;
        let angles: Vec<f64> = (0..n)
            .map(|_| {
                let w = sample_uniform_sphere(2, &mut rng);
                w[1].atan2(w[0]).rem_euclid(2.0 * PI)
            })
            .collect();
        let ks = ks_one_sample(&angles, |t| t / (2.0 * PI));
        assert!(ks < ks_critical_one_sample(n, 0.01), "ks={ks}");
    }

    #[test]
    fn two_point_law_frequency() {
        let law = ExitLaw::new(1, 1.0, 0.5, Some(vec![1.0])).unwrap();
        let p = 0.5f64.exp() / (0.5f64.exp() + (-0.5f64).exp());
        assert!((p - 0.731_058_578).abs() < 1e-9);
        let n = 100_000;
        let hits = polar_cosines(&law, n, 4).iter().filter(|&&t| t > 0.0).count();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - p).abs() < 3.0 * se);
    }

    #[test]
    fn d3_mean_cosine() {
        let expected = 1.0 / 2f64.tanh() - 0.5;
        assert!((expected - 0.537_314).abs() < 1e-6);
        let s = summarize(&polar_cosines(&axis_law(3, 2.0), 100_000, 5));
        assert!((s.mean - expected).abs() < 3.0 * s.stderr);
    }

    #[test]
    fn zero_concentration_is_uniform() {
        for d in [2, 3, 5] {
            let mut mu = vec![0.0; d];
            mu[0] = 1.0;
            let law = ExitLaw::new(d, 1.0, 0.0, Some(mu)).unwrap();
            let a = polar_cosines(&law, 20_000, 6);
            let mut rng = RngStream::new(7, 0);
            let b: Vec<f64> = (0..20_000).map(|_| sample_uniform_sphere(d, &mut rng)[0]).collect();
            assert!(ks_two_sample(&a, &b) < ks_critical_two_sample(a.len(), b.len(), 0.01));
        }
    }

    #[test]
    fn mean_resultant_length_matches_bessel_ratio() {
        for d in [2, 3, 7] {
            for c in [0.5, 2.0, 10.0] {
                let s = summarize(&polar_cosines(&axis_law(d, c), 100_000, 10 + d as u64));
                let target = mean_resultant_length(d, c).unwrap();
                assert!((s.mean - target).abs() < 3.0 * s.stderr, "d={d} c={c}: {} vs {target}", s.mean);
            }
        }
    }

    #[test]
    fn oblique_mean_direction() {
        let mu: Vec<f64> = [1.0, 2.0, -2.0].iter().map(|c| c / 3.0).collect();
        let law = ExitLaw::new(3, 1.0, 2.0, Some(mu)).unwrap();
        let s = summarize(&polar_cosines(&law, 100_000, 11));
        assert!((s.mean - (1.0 / 2f64.tanh() - 0.5)).abs() < 3.0 * s.stderr);
        // Oblique d = 2 also rotates correctly.
        let mu2 = vec![0.6, -0.8];
        let law2 = ExitLaw::new(2, 1.0, 2.0, Some(mu2)).unwrap();
        let s2 = summarize(&polar_cosines(&law2, 100_000, 12));
        assert!((s2.mean - mean_resultant_length(2, 2.0).unwrap()).abs() < 3.0 * s2.stderr);
    }

    #[test]
    fn azimuth_about_mean_is_uniform() {
        let mu: Vec<f64> = [1.0, 1.0, 1.0].iter().map(|c| c / 3f64.sqrt()).collect();
        let e1 = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
        let e2 = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
        let law = ExitLaw::new(3, 1.0, 3.0, Some(mu)).unwrap();
        let mut rng = RngStream::new(13, 0);
        let n = 100_000;
        let az: Vec<f64> = (0..n)
            .map(|_| {
                let w = sample_exit(&law, &mut rng).unwrap();
                dot(&w, &e2).atan2(dot(&w, &e1)).rem_euclid(2.0 * PI)
            })
            .collect();
        assert!(ks_one_sample(&az, |t| t / (2.0 * PI)) < ks_critical_one_sample(n, 0.01));
    }

    #[test]
    fn draws_are_reproducible() {
        let law = axis_law(4, 1.5);
        let a = polar_cosines(&law, 1000, 99);
        let b = polar_cosines(&law, 1000, 99);
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn large_concentration_stays_finite() {
        for d in [2, 3, 10] {
            let t = polar_cosines(&axis_law(d, 1e6), 1000, 14);
            assert!(t.iter().all(|t| *t > 0.99 && *t <= 1.0));
        }
    }

    #[test]
    fn log_density_examples() {
        let uniform = ExitLaw::new(3, 1.0, 0.0, None).unwrap();
        assert_eq!(exit_log_density(&uniform, &[0.0, 0.0, 1.0]).unwrap(), 0.0);
        let theta = 0.7f64;
        let d1 = ExitLaw::new(1, 1.0, theta, Some(vec![1.0])).unwrap();
        let expected = (2.0 * theta.exp() / (theta.exp() + (-theta).exp())).ln();
        assert!((exit_log_density(&d1, &[1.0]).unwrap() - expected).abs() < 1e-14);
        let d3 = axis_law(3, 2.0);
        let expected = (2.0 / 2f64.sinh()).ln() + 2.0;
        assert!((exit_log_density(&d3, &[1.0, 0.0, 0.0]).unwrap() - expected).abs() < 1e-13);
        assert!(matches!(exit_log_density(&d3, &[1.0, 1.0, 0.0]), Err(Error::NotUnitVector(_))));
    }

    #[test]
    fn from_drift_scales_concentration() {
        let law = ExitLaw::from_drift(1.0, &[3.0, 4.0], 0.5).unwrap();
        assert!((law.concentration() - 0.5 * 5.0 / 2.0).abs() < 1e-15);
        assert_eq!(law.mean_direction().unwrap(), &[0.6, 0.8]);
        assert!(ExitLaw::from_drift(0.0, &[1.0], 1.0).is_err());
        assert_eq!(ExitLaw::from_drift(1.0, &[0.0, 0.0], 1.0).unwrap().concentration(), 0.0);
    }
}
