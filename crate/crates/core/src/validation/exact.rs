//! Closed-form solutions for boundary data whose analytic extension is
//! annihilated by `A = a∆ + b·∇`. By uniqueness of the Dirichlet problem that
//! extension is the solution.

use crate::estimator::ProblemSpec;
use crate::geometry::BoundaryFunction;
use crate::{dot, norm, Error, Result};

const HARMONIC_TOLERANCE: f64 = 1e-12;

fn check(f: &BoundaryFunction, problem: &ProblemSpec) -> Result<()> {
    let b = problem.drift();
    match f {
        BoundaryFunction::Constant(_) => Ok(()),
        // A x_j = b_j
        BoundaryFunction::Coordinate(j) if b[*j].abs() <= HARMONIC_TOLERANCE => Ok(()),
        BoundaryFunction::Coordinate(j) => {
            Err(Error::NoExactSolution(format!("coordinate {j} with nonzero drift component {}", b[*j])))
        }
        // A(c·x) = b·c
        BoundaryFunction::Affine { coeffs, .. } => {
            let bc = dot(b, coeffs);
            if bc.abs() <= HARMONIC_TOLERANCE * (1.0 + norm(b) * norm(coeffs)) {
                Ok(())
            } else {
                Err(Error::NoExactSolution(format!("affine data with b·c = {bc}")))
            }
        }
        // h = exp(-k x_j), k = b_f/a_f: A h = k (a k − b_j) h.
        BoundaryFunction::ExpDrift { axis, a, b: bf } => {
            let k = bf / a;
            let defect = k * (problem.a() * k - b[*axis]);
            if defect.abs() <= HARMONIC_TOLERANCE * (1.0 + k * k + b[*axis].abs()) {
                Ok(())
            } else {
                Err(Error::NoExactSolution(format!("exp-drift rate {k} on axis {axis} does not match the operator")))
            }
        }
        BoundaryFunction::Sum(terms) => terms.iter().try_for_each(|(_, t)| check(t, problem)),
    }
}

/// The interior solution for the problem's boundary data, as the same
/// analytic expression evaluated in `D`.
pub fn exact_solution(problem: &ProblemSpec) -> Result<BoundaryFunction> {
    check(problem.boundary(), problem)?;
    Ok(problem.boundary().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;

    fn problem(a: f64, b: Vec<f64>, f: BoundaryFunction) -> Result<ProblemSpec> {
        let d = b.len();
        ProblemSpec::new(a, b, Domain::ball(vec![0.0; d], 1.0).unwrap(), f)
    }

    /// Central finite-difference `A u` at `x`.
    fn apply_operator(p: &ProblemSpec, u: &BoundaryFunction, x: &[f64]) -> f64 {
        let h = 1e-4;
        let mut lap = 0.0;
        let mut adv = 0.0;
        for i in 0..x.len() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let (up, u0, um) = (u.eval(&xp), u.eval(x), u.eval(&xm));
            lap += (up - 2.0 * u0 + um) / (h * h);
            adv += p.drift()[i] * (up - um) / (2.0 * h);
        }
        p.a() * lap + adv
    }

    #[test]
    fn vocabulary_solutions_are_annihilated() {
        let cases = vec![
            problem(1.0, vec![1.0, 0.0, 0.0], BoundaryFunction::exp_drift(0, 1.0, 1.0)).unwrap(),
            problem(0.3, vec![0.0, -2.0], BoundaryFunction::exp_drift(1, 0.3, -2.0)).unwrap(),
            problem(1.0, vec![1.0, 0.0], BoundaryFunction::coordinate(1)).unwrap(),
            problem(2.0, vec![1.0, 2.0], BoundaryFunction::affine(3.0, vec![2.0, -1.0])).unwrap(),
            problem(
                1.0,
                vec![1.0, 0.0, -0.5],
                BoundaryFunction::sum(vec![
                    (2.0, BoundaryFunction::exp_drift(0, 1.0, 1.0)),
                    (-1.0, BoundaryFunction::exp_drift(2, 1.0, -0.5)),
                    (0.5, BoundaryFunction::coordinate(1)),
                    (1.0, BoundaryFunction::constant(4.0)),
                ]),
            )
            .unwrap(),
        ];
        for p in cases {
            let u = exact_solution(&p).unwrap();
            let x = vec![0.2; p.dim()];
            assert!(apply_operator(&p, &u, &x).abs() < 1e-5, "{p:?}");
        }
    }

    #[test]
    fn constant_and_exp_drift_examples() {
        let p = problem(1.0, vec![1.0], BoundaryFunction::constant(7.0)).unwrap();
        assert_eq!(exact_solution(&p).unwrap().eval(&[0.3]), 7.0);
        let p = problem(1.0, vec![1.0, 0.0, 0.0], BoundaryFunction::exp_drift(0, 1.0, 1.0)).unwrap();
        assert_eq!(exact_solution(&p).unwrap().eval(&[0.3, 0.2, 0.0]), (-0.3f64).exp());
    }

    #[test]
    fn non_harmonic_data_rejected() {
        let p = problem(1.0, vec![1.0, 0.0], BoundaryFunction::coordinate(0)).unwrap();
        assert!(matches!(exact_solution(&p), Err(Error::NoExactSolution(_))));
        let p = problem(1.0, vec![1.0, 0.0], BoundaryFunction::exp_drift(0, 1.0, 2.0)).unwrap();
        assert!(exact_solution(&p).is_err());
        let p = problem(1.0, vec![1.0, 1.0], BoundaryFunction::affine(0.0, vec![1.0, 0.0])).unwrap();
        assert!(exact_solution(&p).is_err());
    }
}
