//! Modified Bessel functions of the first kind and the exit-law normalizer
//!
//! `κ_d(z) = (z/2)^{d/2-1} / (Γ(d/2) I_{d/2-1}(z))`.
//!
//! `I_v` is evaluated by its ascending series for moderate arguments and by
//! the Hankel large-argument expansion once `z > max(60, 4v²)`. The series
//! is a sum of positive terms, so it is accurate for any `z`; the switch only
//! bounds its cost. Everything is carried in log space so that `κ` can be
//! evaluated for concentrations far beyond the range where `I_v` overflows.
//!
//! In the series regime `κ_d(z)` is exactly the reciprocal of the normalized
//! series sum, so no Gamma function enters and `κ(0) = 1` holds by
//! construction.

use std::f64::consts::PI;

use statrs::function::gamma;

use crate::{Error, Result};

/// Arguments above this (and above `4v²`) use the asymptotic expansion.
const ASYMPTOTIC_MIN_ARG: f64 = 60.0;

/// Rescaling step for the series accumulator, `10^280`.
const SERIES_RESCALE: f64 = 1e280;

fn check_order(v: f64) -> Result<()> {
    if !(v >= -0.5) {
        return Err(Error::BesselOrder(v));
    }
    Ok(())
}

fn check_arg(z: f64) -> Result<()> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::BesselArgument(z));
    }
    Ok(())
}

fn asymptotic_regime(v: f64, z: f64) -> bool {
    z > ASYMPTOTIC_MIN_ARG && z > 4.0 * v * v
}

/// Natural logarithm of `Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

/// `ln Σ_k (z²/4)^k Γ(v+1) / (k! Γ(v+k+1))`, i.e. `ln I_v(z)` with the leading
/// factor `(z/2)^v / Γ(v+1)` removed.
fn log_normalized_series(v: f64, z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut log_scale = 0.0_f64;
    let mut k = 1.0_f64;
    loop {
        term *= q / (k * (v + k));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
        if sum > SERIES_RESCALE {
            sum /= SERIES_RESCALE;
            term /= SERIES_RESCALE;
            log_scale += SERIES_RESCALE.ln();
        }
        k += 1.0;
    }
    sum.ln() + log_scale
}

/// Hankel expansion `ln I_v(z) ≈ z - ½ln(2πz) + ln Σ_k (-1)^k a_k(v) / z^k`.
fn log_asymptotic(v: f64, z: f64) -> f64 {
    let mu = 4.0 * v * v;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut k = 1.0_f64;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * k * z);
        if next.abs() >= term.abs() {
            break;
        }
        sum += next;
        term = next;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    z - 0.5 * (2.0 * PI * z).ln() + sum.ln()
}

/// `ln I_v(z)` for `v ≥ -1/2`, `z > 0`.
///
/// At `z = 0` this returns `0` for `v = 0`, `-∞` for `v > 0`, and a pole
/// error for `v < 0`.
pub fn log_bessel_i(v: f64, z: f64) -> Result<f64> {
    check_order(v)?;
    check_arg(z)?;
    if z == 0.0 {
        return if v == 0.0 {
            Ok(0.0)
        } else if v > 0.0 {
            Ok(f64::NEG_INFINITY)
        } else {
            Err(Error::BesselPole { order: v, arg: z })
        };
    }
    if asymptotic_regime(v, z) {
        return Ok(log_asymptotic(v, z));
    }
    Ok(v * (0.5 * z).ln() - ln_gamma(v + 1.0) + log_normalized_series(v, z))
}

/// `I_v(z)` for `v ≥ -1/2`, `z ≥ 0`.
pub fn bessel_i(v: f64, z: f64) -> Result<f64> {
    check_order(v)?;
    check_arg(z)?;
    if z == 0.0 {
        return if v == 0.0 {
            Ok(1.0)
        } else if v > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::BesselPole { order: v, arg: z })
        };
    }
    let log_value = log_bessel_i(v, z)?;
    if log_value >= f64::MAX.ln() {
        return Err(Error::BesselOverflow { order: v, arg: z });
    }
    if asymptotic_regime(v, z) {
        return Ok(log_value.exp());
    }
    // Keep the series sum out of the exponential: exp(ln S) would cost
    // |ln S| ulps of relative accuracy.
    let q = 0.25 * z * z;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut k = 1.0_f64;
    loop {
        term *= q / (k * (v + k));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
        k += 1.0;
    }
    let prefactor = (v * (0.5 * z).ln()).exp() / gamma::gamma(v + 1.0);
    Ok(prefactor * sum)
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    Ok(())
}

/// `ln κ_d(z)`; finite for every finite `z ≥ 0`.
pub fn log_kappa(d: usize, z: f64) -> Result<f64> {
    check_dim(d)?;
    check_arg(z)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    let v = 0.5 * d as f64 - 1.0;
    if asymptotic_regime(v, z) {
        Ok(v * (0.5 * z).ln() - ln_gamma(0.5 * d as f64) - log_asymptotic(v, z))
    } else {
        Ok(-log_normalized_series(v, z))
    }
}

/// The normalizer `κ_d(z) ∈ (0, 1]` of the drifted mean value property.
pub fn kappa(d: usize, z: f64) -> Result<f64> {
    log_kappa(d, z).map(f64::exp)
}

/// Mean resultant length `A_d(κ) = I_{d/2}(κ) / I_{d/2-1}(κ)` of the von
/// Mises–Fisher law on `S^{d-1}`, i.e. `E[μ·ω]`.
pub fn mean_resultant_length(d: usize, concentration: f64) -> Result<f64> {
    check_dim(d)?;
    check_arg(concentration)?;
    if concentration == 0.0 {
        return Ok(0.0);
    }
    let v = 0.5 * d as f64 - 1.0;
    if asymptotic_regime(v + 1.0, concentration) || asymptotic_regime(v, concentration) {
        return Ok((log_bessel_i(v + 1.0, concentration)? - log_bessel_i(v, concentration)?).exp());
    }
    // Ratio of the normalized series keeps the (z/2)^v / Γ(v+1) factors exact.
    let log_ratio = log_normalized_series(v + 1.0, concentration) - log_normalized_series(v, concentration);
    Ok(0.5 * concentration / (v + 1.0) * log_ratio.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Independent oracle: direct ascending series for I_0 with explicit
    /// factorials.
    fn i0_series_oracle(z: f64) -> f64 {
        let mut s = 0.0;
        let mut fact = 1.0_f64;
        for k in 0..30 {
            if k > 0 {
                fact *= k as f64;
            }
            s += (z / 2.0).powi(2 * k) / (fact * fact);
        }
        s
    }

    #[test]
    fn frozen_values() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert!((i0_series_oracle(1.0) - 1.2660658777520).abs() < 1e-12);
        assert!(rel(bessel_i(0.0, 1.0).unwrap(), i0_series_oracle(1.0)) < 1e-14);
        let half = (2.0 / PI).sqrt() * 1.0_f64.sinh();
        assert!((half - 0.9376748882454).abs() < 1e-12);
        assert!(rel(bessel_i(0.5, 1.0).unwrap(), half) < 1e-13);
    }

    #[test]
    fn log_values() {
        assert!((log_bessel_i(0.0, 1.0).unwrap() - 0.235914358507).abs() < 1e-11);
        // ln(√(2/(100π)) sinh 100) with sinh 100 = e^100 (1 - e^-200) / 2.
        let expected = 0.5 * (2.0 / (100.0 * PI)).ln() + 100.0 - LN_2;
        assert!(rel(log_bessel_i(0.5, 100.0).unwrap(), expected) < 1e-13);
        assert_eq!(log_bessel_i(0.0, 0.0).unwrap(), 0.0);
        assert!(log_bessel_i(0.0, 1e-300).unwrap().abs() < 1e-15);
        assert!(log_bessel_i(3.5, 1e4).unwrap().is_finite());
    }

    #[test]
    fn zero_argument_limits() {
        assert_eq!(bessel_i(2.0, 0.0).unwrap(), 0.0);
        assert!(matches!(bessel_i(-0.5, 0.0), Err(Error::BesselPole { .. })));
        assert!(matches!(log_bessel_i(-0.25, 0.0), Err(Error::BesselPole { .. })));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_i(-0.6, 1.0), Err(Error::BesselOrder(_))));
        assert!(matches!(bessel_i(0.0, -1.0), Err(Error::BesselArgument(_))));
        assert!(matches!(bessel_i(0.0, f64::NAN), Err(Error::BesselArgument(_))));
        assert!(matches!(bessel_i(0.0, 800.0), Err(Error::BesselOverflow { .. })));
        assert!(kappa(0, 1.0).is_err());
    }

    #[test]
    fn kappa_frozen_values() {
        for d in 1..8 {
            assert_eq!(kappa(d, 0.0).unwrap(), 1.0);
        }
        assert!((kappa(1, 1.0).unwrap() - 0.6480542736639).abs() < 1e-12);
        assert!((kappa(3, 2.0).unwrap() - 0.5514411295435664).abs() < 1e-12);
    }

    #[test]
    fn kappa_closed_forms_across_switchover() {
        let mut z = 1e-8_f64;
        while z < 2000.0 {
            let lk1 = log_kappa(1, z).unwrap();
            let exact1 = -(z + (0.5 * (1.0 + (-2.0 * z).exp())).ln());
            assert!((lk1 - exact1).abs() <= 1e-12 * exact1.abs().max(1.0), "d=1 z={z}");
            let lk3 = log_kappa(3, z).unwrap();
            let exact3 = if z < 700.0 { (z / z.sinh()).ln() } else { z.ln() - z + LN_2 };
            assert!((lk3 - exact3).abs() <= 1e-12 * exact3.abs().max(1.0), "d=3 z={z}");
            z *= 1.07;
        }
    }

    #[test]
    fn half_integer_gamma_matches_sqrt_pi_multiples() {
        let sqrt_pi = PI.sqrt();
        let mut exact = sqrt_pi; // Γ(1/2)
        let mut x = 0.5;
        for _ in 0..20 {
            let e = rel(ln_gamma(x).exp(), exact);
            assert!(e < 1e-14 * ln_gamma(x).abs().max(1.0), "x={x} err={e}");
            exact *= x;
            x += 1.0;
        }
    }

    #[test]
    fn kappa_is_decreasing_and_bounded() {
        for d in 1..=10 {
            let mut prev = 1.0;
            for i in 1..200 {
                let z = 0.05 * i as f64 * i as f64 / 10.0;
                let k = kappa(d, z).unwrap();
                assert!(k > 0.0 && k <= 1.0);
                assert!(k < prev, "d={d} z={z}");
                prev = k;
            }
        }
    }

    #[test]
    fn exp_of_log_matches_direct() {
        for &v in &[-0.5, 0.0, 0.5, 1.0, 2.5, 7.0, 30.0] {
            for &z in &[1e-6, 0.3, 1.0, 7.5, 20.0, 50.0, 300.0] {
                let direct = bessel_i(v, z).unwrap();
                let via_log = log_bessel_i(v, z).unwrap().exp();
                assert!(rel(via_log, direct) < 1e-12, "v={v} z={z}");
            }
        }
    }

    #[test]
    fn recurrence_identity() {
        for &v in &[0.5, 1.0, 1.5, 2.0] {
            let mut z = 0.1;
            while z <= 30.0 {
                let lhs = bessel_i(v - 1.0, z).unwrap() - bessel_i(v + 1.0, z).unwrap();
                let rhs = 2.0 * v / z * bessel_i(v, z).unwrap();
                assert!(rel(lhs, rhs) < 1e-10, "v={v} z={z}");
                z += 0.37;
            }
        }
    }

    #[test]
    fn series_and_asymptotic_agree_near_switch() {
        for &v in &[0.0_f64, 0.5, 1.0, 2.5] {
            for &z in &[61.0_f64, 80.0, 150.0] {
                let series = v * (0.5 * z).ln() - ln_gamma(v + 1.0) + log_normalized_series(v, z);
                let asym = log_asymptotic(v, z);
                assert!(rel(series, asym) < 1e-14, "v={v} z={z}");
            }
        }
    }

    #[test]
    fn mean_resultant_length_closed_form_d3() {
        // A_3(κ) = coth κ - 1/κ
        for &k in &[0.01_f64, 0.5, 2.0, 10.0, 100.0, 1000.0] {
            let exact = 1.0 / k.tanh() - 1.0 / k;
            assert!(rel(mean_resultant_length(3, k).unwrap(), exact) < 1e-11, "k={k}");
        }
        // A_1(κ) = tanh κ
        assert!(rel(mean_resultant_length(1, 0.5).unwrap(), 0.5_f64.tanh()) < 1e-13);
    }
}
