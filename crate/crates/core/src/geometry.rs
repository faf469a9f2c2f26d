//! Bounded open domains with closed-form distance to the boundary, and the
//! analytic boundary-data vocabulary.
//!
//! Every built-in shape satisfies the exterior-ball condition at each boundary
//! point, so all boundary points are regular and the walk-on-spheres value
//! converges to the boundary data there.

use crate::rng::RngStream;
use crate::{norm, Error, Result};

/// Points within this distance outside the closure still count as on it.
pub const CLOSURE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// Open axis-aligned box `Π (lo_i, hi_i)`.
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// Open spherical shell `inner < |x - center| < outer`.
    Annulus {
        center: Vec<f64>,
        inner: f64,
        outer: f64,
    },
}

fn finite(v: &[f64]) -> bool {
    v.iter().all(|c| c.is_finite())
}

impl Domain {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !finite(&center) {
            return Err(Error::InvalidDomain("ball center must be a finite, nonempty point".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidDomain(format!("ball radius {radius} must be positive")));
        }
        Ok(Domain::Ball { center, radius })
    }

    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidDomain("box bounds must be nonempty and of equal length".into()));
        }
        if !finite(&lo) || !finite(&hi) {
            return Err(Error::InvalidDomain("box bounds must be finite".into()));
        }
        if let Some(i) = (0..lo.len()).find(|&i| !(lo[i] < hi[i])) {
            return Err(Error::InvalidDomain(format!("box axis {i}: lo must be below hi")));
        }
        Ok(Domain::Box { lo, hi })
    }

    pub fn annulus(center: Vec<f64>, inner: f64, outer: f64) -> Result<Self> {
        if center.is_empty() || !finite(&center) {
            return Err(Error::InvalidDomain("annulus center must be a finite, nonempty point".into()));
        }
        if !(inner > 0.0 && inner < outer) || !outer.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "annulus radii must satisfy 0 < inner < outer, got {inner}, {outer}"
            )));
        }
        Ok(Domain::Annulus { center, inner, outer })
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Ball { center, .. } | Domain::Annulus { center, .. } => center.len(),
            Domain::Box { lo, .. } => lo.len(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Ball { radius, .. } => 2.0 * radius,
            Domain::Annulus { outer, .. } => 2.0 * outer,
            Domain::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| (h - l) * (h - l)).sum::<f64>().sqrt(),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    /// Signed distance to the boundary, negative inside.
    fn signed_distance(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Ball { center, radius } => radial(x, center) - radius,
            Domain::Annulus { center, inner, outer } => {
                let rho = radial(x, center);
                (inner - rho).max(rho - outer)
            }
            Domain::Box { lo, hi } => {
                let mut outside = 0.0;
                let mut inside = f64::INFINITY;
                for i in 0..lo.len() {
                    let below = lo[i] - x[i];
                    let above = x[i] - hi[i];
                    let excess = below.max(above);
                    if excess > 0.0 {
                        outside += excess * excess;
                    }
                    inside = inside.min(-excess);
                }
                if outside > 0.0 {
                    outside.sqrt()
                } else {
                    -inside
                }
            }
        }
    }

    /// Euclidean distance from `x` (inside or outside) to `∂D`.
    pub fn distance_to_boundary(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.signed_distance(x).abs())
    }

    /// Membership in the open domain; boundary points are excluded.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.signed_distance(x) < 0.0)
    }

    /// Nearest point of `∂D` to `x ∈ D̄`.
    ///
    /// Ties go to the lowest axis (and the lower face before the upper one)
    /// for boxes; the ball center projects to `center + radius·e_1`; an
    /// annulus point equidistant from both spheres goes to the outer one.
    pub fn project_to_boundary(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        if self.signed_distance(x) > CLOSURE_TOLERANCE * self.diameter().max(1.0) {
            return Err(Error::OutsideDomain(x.to_vec()));
        }
        Ok(match self {
            Domain::Ball { center, radius } => radial_projection(x, center, *radius),
            Domain::Annulus { center, inner, outer } => {
                let rho = radial(x, center);
                let target = if rho - inner < outer - rho { *inner } else { *outer };
                radial_projection(x, center, target)
            }
            Domain::Box { lo, hi } => {
                let mut p: Vec<f64> = x.iter().zip(lo.iter().zip(hi)).map(|(&c, (&l, &h))| c.clamp(l, h)).collect();
                let mut best = (f64::INFINITY, 0usize, 0.0);
                for i in 0..lo.len() {
                    for face in [lo[i], hi[i]] {
                        let gap = (p[i] - face).abs();
                        if gap < best.0 {
                            best = (gap, i, face);
                        }
                    }
                }
                p[best.1] = best.2;
                p
            }
        })
    }

    /// Residual of the boundary equation at `p`; zero on `∂D`.
    pub fn boundary_residual(&self, p: &[f64]) -> Result<f64> {
        self.distance_to_boundary(p)
    }

    /// Deterministic dense sample of `∂D` used for ranges of boundary data and
    /// for geometric self-checks. `resolution` controls the density per axis.
    pub fn boundary_mesh(&self, resolution: usize) -> Vec<Vec<f64>> {
        let resolution = resolution.max(2);
        match self {
            Domain::Ball { center, radius } => sphere_mesh(center, *radius, resolution),
            Domain::Annulus { center, inner, outer } => {
                let mut pts = sphere_mesh(center, *inner, resolution);
                pts.extend(sphere_mesh(center, *outer, resolution));
                pts
            }
            Domain::Box { lo, hi } => box_mesh(lo, hi, resolution),
        }
    }
}

fn radial(x: &[f64], center: &[f64]) -> f64 {
    x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt()
}

fn radial_projection(x: &[f64], center: &[f64], radius: f64) -> Vec<f64> {
    let rho = radial(x, center);
    if rho == 0.0 {
        let mut p = center.to_vec();
        p[0] += radius;
        return p;
    }
    x.iter().zip(center).map(|(a, c)| c + radius * (a - c) / rho).collect()
}

fn sphere_mesh(center: &[f64], radius: f64, resolution: usize) -> Vec<Vec<f64>> {
    let d = center.len();
    let place = |dir: &[f64]| -> Vec<f64> { center.iter().zip(dir).map(|(c, w)| c + radius * w).collect() };
    match d {
        1 => vec![vec![center[0] - radius], vec![center[0] + radius]],
        2 => {
            let n = 8 * resolution;
            (0..n)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    place(&[t.cos(), t.sin()])
                })
                .collect()
        }
        _ => {
            // Axis poles plus a fixed pseudo-random cloud.
            let mut pts = Vec::new();
            for i in 0..d {
                for s in [-1.0, 1.0] {
                    let mut e = vec![0.0; d];
                    e[i] = s;
                    pts.push(place(&e));
                }
            }
            let mut rng = RngStream::new(0x5EED_5EED, d as u64);
            let count = (resolution * resolution * d).min(200_000);
            let mut dir = vec![0.0; d];
            for _ in 0..count {
                loop {
                    for c in dir.iter_mut() {
                        *c = rng.standard_normal();
                    }
                    let n = norm(&dir);
                    if n > 1e-12 {
                        dir.iter_mut().for_each(|c| *c /= n);
                        break;
                    }
                }
                pts.push(place(&dir));
            }
            pts
        }
    }
}

fn box_mesh(lo: &[f64], hi: &[f64], resolution: usize) -> Vec<Vec<f64>> {
    let d = lo.len();
    if d == 1 {
        return vec![vec![lo[0]], vec![hi[0]]];
    }
    // Per-face tensor grid; cap the total for high dimensions.
    let per_axis = {
        let mut m = resolution + 1;
        while m > 2 && m.pow((d - 1) as u32) > 50_000 {
            m -= 1;
        }
        m
    };
    let mut pts = Vec::new();
    for axis in 0..d {
        for face in [lo[axis], hi[axis]] {
            let others: Vec<usize> = (0..d).filter(|&i| i != axis).collect();
            let total = per_axis.pow(others.len() as u32);
            for mut idx in 0..total {
                let mut p = vec![0.0; d];
                p[axis] = face;
                for &i in &others {
                    let k = idx % per_axis;
                    idx /= per_axis;
                    p[i] = lo[i] + (hi[i] - lo[i]) * k as f64 / (per_axis - 1) as f64;
                }
                pts.push(p);
            }
        }
    }
    pts
}

/// Boundary data drawn from a closed vocabulary of analytic functions, so
/// that harmonic extensions are available in closed form.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryFunction {
    Constant(f64),
    /// `p ↦ p_axis`.
    Coordinate(usize),
    /// `p ↦ offset + coeffs·p`.
    Affine {
        offset: f64,
        coeffs: Vec<f64>,
    },
    /// `p ↦ exp(-(2b/σ²) p_axis)` with `σ² = 2a`; annihilated by `A` when `b`
    /// is the drift component along `axis`.
    ExpDrift {
        axis: usize,
        a: f64,
        b: f64,
    },
    /// `p ↦ Σ w_k f_k(p)`.
    Sum(Vec<(f64, BoundaryFunction)>),
}

impl BoundaryFunction {
    pub fn constant(c: f64) -> Self {
        BoundaryFunction::Constant(c)
    }

    pub fn coordinate(axis: usize) -> Self {
        BoundaryFunction::Coordinate(axis)
    }

    pub fn affine(offset: f64, coeffs: Vec<f64>) -> Self {
        BoundaryFunction::Affine { offset, coeffs }
    }

    pub fn exp_drift(axis: usize, a: f64, b: f64) -> Self {
        BoundaryFunction::ExpDrift { axis, a, b }
    }

    pub fn sum(terms: Vec<(f64, BoundaryFunction)>) -> Self {
        BoundaryFunction::Sum(terms)
    }

    /// Check that every axis index and coefficient list fits dimension `d`.
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            BoundaryFunction::Constant(c) if !c.is_finite() => {
                Err(Error::InvalidParameter("constant boundary value must be finite".into()))
            }
            BoundaryFunction::Constant(_) => Ok(()),
            BoundaryFunction::Coordinate(axis) | BoundaryFunction::ExpDrift { axis, .. } if *axis >= d => {
                Err(Error::InvalidParameter(format!("axis {axis} out of range for dimension {d}")))
            }
            BoundaryFunction::ExpDrift { a, .. } if !(*a > 0.0) => {
                Err(Error::InvalidParameter(format!("exp-drift needs a > 0, got {a}")))
            }
            BoundaryFunction::Coordinate(_) | BoundaryFunction::ExpDrift { .. } => Ok(()),
            BoundaryFunction::Affine { coeffs, .. } if coeffs.len() != d => {
                Err(Error::DimensionMismatch { expected: d, got: coeffs.len() })
            }
            BoundaryFunction::Affine { .. } => Ok(()),
            BoundaryFunction::Sum(terms) => terms.iter().try_for_each(|(_, f)| f.validate(d)),
        }
    }

    /// Evaluate at `p`. Built-ins are globally defined, so this also serves as
    /// the interior evaluation of exact solutions.
    pub fn eval(&self, p: &[f64]) -> f64 {
        match self {
            BoundaryFunction::Constant(c) => *c,
            BoundaryFunction::Coordinate(axis) => p[*axis],
            BoundaryFunction::Affine { offset, coeffs } => offset + crate::dot(coeffs, p),
            BoundaryFunction::ExpDrift { axis, a, b } => (-(2.0 * b / (2.0 * a)) * p[*axis]).exp(),
            BoundaryFunction::Sum(terms) => terms.iter().map(|(w, f)| w * f.eval(p)).sum(),
        }
    }

    /// `(min, max)` of the function over a dense boundary mesh of `dom`.
    pub fn range_on_boundary(&self, dom: &Domain, resolution: usize) -> (f64, f64) {
        dom.boundary_mesh(resolution)
            .iter()
            .map(|p| self.eval(p))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}
