//! Sparse symmetric linear algebra for interior-point solvers.
//!
//! Provides compressed sparse-column storage, fill-reducing ordering,
//! static-pivot simplicial LDL^T factorization with inertia extraction,
//! triangular solves, and iterative refinement. The factorization never
//! pivots dynamically: near-zero pivots are either perturbed by a small
//! static value or reported as an error, so the factor structure is fixed
//! by the symbolic analysis alone.

mod error;
mod matrix;
mod mmio;
mod numeric;
mod order;
mod perm;
mod symbolic;

pub use error::SparseError;
pub use matrix::SparseMatrix;
pub use mmio::{read_matrix_market, write_matrix_market};
pub use numeric::{
    iterative_refinement, ldlt_factorize, solve, FactorizeOptions, Inertia, NumericFactorization,
    RefinementOptions, RefinementResult,
};
pub use order::amd_order;
pub use perm::Permutation;
pub use symbolic::{symbolic_analyze, SymbolicFactorization};
