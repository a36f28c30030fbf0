//! Path-following interior-point solver for inequality-form linear
//! programs, `min c^T x  s.t.  A x >= b`, with fixed primal-dual
//! regularization and a selectable KKT formulation.

mod error;
mod problem;
mod solver;

pub use error::LpError;
pub use problem::{initial_point, LinearProgram};
pub use solver::{solve_lp, LpOptions, LpSolveReport, LpStatus};
