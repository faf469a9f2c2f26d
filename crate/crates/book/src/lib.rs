//! Compiles every snippet of the guide in `book/` as a doc-test, one module
//! per chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/mean_value.md")]
pub mod mean_value {}
#[doc = include_str!("../../../book/src/exit_law.md")]
pub mod exit_law {}
#[doc = include_str!("../../../book/src/walk_on_spheres.md")]
pub mod walk_on_spheres {}
#[doc = include_str!("../../../book/src/estimator.md")]
pub mod estimator {}
#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
