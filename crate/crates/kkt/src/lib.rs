//! Assembly, factorization, and solution of interior-point KKT systems.
//!
//! Four interchangeable formulations of the same Newton step are supported:
//! the full 3x3 system, the augmented 2x2 system obtained by eliminating the
//! slack block, the primal condensed system (SPD under inertia-corrected
//! regularization), and the dual condensed system (normal equations, for
//! diagonal Hessians). Whatever formulation is factored, the returned
//! direction is refined against the full 3x3 residual so all four agree.
//!
//! Sign conventions: the full system is solved for `(d_x, d_s, -d_lambda)`
//! and its third block row reads `J d_x - d_s + delta_d d_lambda = -(g - s)`.
//! The dense oracle in [`dense_oracle_direction`] pins these conventions in
//! tests.

mod dense;
mod error;
mod types;
mod workspace;

pub use dense::{dense_lu_solve, dense_oracle_direction};
pub use error::KktError;
pub use types::{DerivativeBundle, Direction, Formulation, IterateState};
pub use workspace::{assemble, full_residual, full_rhs, residual_vector, KktWorkspace};
