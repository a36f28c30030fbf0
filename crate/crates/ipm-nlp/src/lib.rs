//! Log-barrier interior-point solver for smooth inequality-constrained
//! NLPs, built around the primal condensed SPD system with inertia-driven
//! regularization.

mod error;
mod schedule;
mod solver;

pub use error::NlpError;
pub use schedule::{barrier_update, fraction_to_boundary, inertia_correct,
                   RegularizationSchedule};
pub use solver::{solve_nlp, NlpOptions, NlpSolveReport, NlpStatus};
