//! Independent oracles for the solver.
//!
//! None of these reuse the exit-law sampler: the Euler–Maruyama simulation
//! time-steps the diffusion directly; the mean value property is checked by
//! deterministic quadrature; exact solutions come from functions annihilated
//! by `A` in closed form.

pub mod euler;
pub mod exact;
pub mod laplace;
pub mod mvp;
pub mod suite;

pub use euler::{simulate_ball_exit, BallExit, EulerConfig};
pub use exact::exact_solution;
pub use laplace::{check_laplace_transform, LaplaceReport};
pub use mvp::{check_mvp, OracleFunction};
pub use suite::{run_suite, CheckReport, Suite, SuiteReport};
