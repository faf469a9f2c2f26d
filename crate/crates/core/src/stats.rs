//! Order-independent reductions and the goodness-of-fit statistics used by
//! the validation suite.

use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

const PAIRWISE_BLOCK: usize = 8;

/// Sum by a fixed binary tree over the slice, so the result depends only on
/// the values and their order, never on how they were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n)`; zero for `n < 2`.
    pub stderr: f64,
    pub n: usize,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len();
    if n == 0 {
        return Summary { mean: f64::NAN, stderr: f64::NAN, n };
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n < 2 {
        return Summary { mean, stderr: 0.0, n };
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    Summary { mean, stderr: (var / n as f64).sqrt(), n }
}

/// Asymptotic Kolmogorov quantile `c(α) = sqrt(-ln(α/2)/2)`.
pub fn kolmogorov_quantile(alpha: f64) -> f64 {
    (-(0.5 * alpha).ln() / 2.0).sqrt()
}

pub fn ks_critical_one_sample(n: usize, alpha: f64) -> f64 {
    kolmogorov_quantile(alpha) / (n as f64).sqrt()
}

pub fn ks_critical_two_sample(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    kolmogorov_quantile(alpha) * ((n + m) / (n * m)).sqrt()
}

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and a
/// continuous CDF.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0_f64, |acc, (i, &x)| {
        let f = cdf(x);
        acc.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
