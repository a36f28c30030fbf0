//! Template-based algebraic modeling with reverse-mode first derivatives
//! and forward-over-reverse second derivatives.
//!
//! Models are built from templates: one expression over template-local
//! variable/parameter slots, replicated across many instances. Derivatives
//! are taken on the template once; each instance reuses the compiled tape
//! and the per-template second-derivative slot-pair pattern, so the
//! assembled Jacobian/Hessian sparsity is identical (index-shifted) across
//! instances of a template.

mod error;
mod expr;
mod model;
mod tape;

pub use error::ModelError;
pub use expr::{BinaryOp, Expr, UnaryOp};
pub use model::{Instance, Model, Template, TemplateKind};
