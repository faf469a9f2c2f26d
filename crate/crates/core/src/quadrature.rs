//! Deterministic quadrature on intervals, circles and spheres.

use std::f64::consts::PI;

use crate::special::ln_gamma;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Average of `f` over the unit circle by the `n`-point trapezoid rule.
pub fn circle_average(n: usize, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    let mut s = 0.0;
    for k in 0..n {
        let t = 2.0 * PI * k as f64 / n as f64;
        s += f(&[t.cos(), t.sin()]);
    }
    s / n as f64
}

/// Average of `f` over the unit sphere `S²`: Gauss–Legendre in the polar
/// cosine times the trapezoid rule in azimuth.
pub fn sphere_average(n_polar: usize, n_azimuth: usize, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    let (nodes, weights) = gauss_legendre(n_polar);
    let mut s = 0.0;
    for (t, w) in nodes.iter().zip(&weights) {
        let s_t = (1.0 - t * t).sqrt();
        let mut ring = 0.0;
        for k in 0..n_azimuth {
            let phi = 2.0 * PI * k as f64 / n_azimuth as f64;
            ring += f(&[s_t * phi.cos(), s_t * phi.sin(), *t]);
        }
        s += w * ring / n_azimuth as f64;
    }
    0.5 * s
}

/// Average over `S^{d-1}` (`d ≥ 2`) of a function that depends only on the
/// polar cosine `t = μ·ω`, via Gauss–Legendre in the polar angle against the
/// weight `sin^{d-2} θ`.
pub fn zonal_average(d: usize, n: usize, mut g: impl FnMut(f64) -> f64) -> f64 {
    assert!(d >= 2);
    let (nodes, weights) = gauss_legendre(n);
    let mut s = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        let theta = 0.5 * PI * (x + 1.0);
        s += w * g(theta.cos()) * theta.sin().powi(d as i32 - 2);
    }
    s *= 0.5 * PI;
    // ∫_0^π sin^{d-2} θ dθ = √π Γ((d-1)/2) / Γ(d/2)
    let total = (0.5 * PI.ln() + ln_gamma(0.5 * (d as f64 - 1.0)) - ln_gamma(0.5 * d as f64)).exp();
    s / total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..=20 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for p in 0..2 * n {
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                assert!((q - exact).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn gauss_legendre_64_is_symmetric_and_sorted() {
        let (x, _) = gauss_legendre(64);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for i in 0..32 {
            assert_eq!(x[i], -x[63 - i]);
        }
    }

    #[test]
    fn sphere_and_circle_second_moments() {
        assert!((circle_average(64, |w| w[0] * w[0]) - 0.5).abs() < 1e-15);
        assert!((sphere_average(16, 32, |w| w[2] * w[2]) - 1.0 / 3.0).abs() < 1e-15);
        assert!((sphere_average(16, 32, |w| w[0] * w[0]) - 1.0 / 3.0).abs() < 1e-15);
        for d in 2..8 {
            let m = zonal_average(d, 64, |t| t * t);
            assert!((m - 1.0 / d as f64).abs() < 1e-14, "d={d}");
        }
    }
}
