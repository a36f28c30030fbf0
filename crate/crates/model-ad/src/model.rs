//! Templates, instances, and the assembled model.
//!
//! A template is one expression plus the list of instances it is evaluated
//! at; an instance binds the expression's variable slots to global variable
//! indices and its parameter slots to fixed values. Objective templates sum
//! over instances, constraint templates emit one row per instance, in
//! template order then instance order.

use sparse_core::SparseMatrix;

use crate::error::ModelError;
use crate::expr::Expr;
use crate::tape::{Tape, TapeBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateKind {
    ObjectiveTerm,
    Constraint,
}

impl TemplateKind {
    fn label(self) -> &'static str {
        match self {
            TemplateKind::ObjectiveTerm => "objective",
            TemplateKind::Constraint => "constraint",
        }
    }
}

/// One binding of a template's slots.
#[derive(Debug, Clone)]
pub struct Instance {
    /// Global variable index per variable slot.
    pub vars: Vec<usize>,
    /// Value per parameter slot.
    pub params: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Template {
    tape: Tape,
    pub kind: TemplateKind,
    pub instances: Vec<Instance>,
}

#[derive(Debug, Clone)]
pub struct Model {
    n: usize,
    objective: Vec<Template>,
    constraints: Vec<Template>,
    initial: Vec<f64>,
}

impl Model {
    pub fn new(n: usize) -> Self {
        Model {
            n,
            objective: Vec::new(),
            constraints: Vec::new(),
            initial: vec![0.0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Constraint row count: total instances over constraint templates.
    pub fn m(&self) -> usize {
        self.constraints.iter().map(|t| t.instances.len()).sum()
    }

    pub fn set_initial_point(&mut self, x0: Vec<f64>) -> Result<(), ModelError> {
        if x0.len() != self.n {
            return Err(ModelError::DimensionMismatch {
                expected: self.n,
                got: x0.len(),
            });
        }
        self.initial = x0;
        Ok(())
    }

    pub fn initial_point(&self) -> &[f64] {
        &self.initial
    }

    pub fn add_objective(
        &mut self,
        expr: Expr,
        instances: Vec<Instance>,
    ) -> Result<(), ModelError> {
        self.add_template(expr, instances, TemplateKind::ObjectiveTerm)
    }

    pub fn add_constraint(
        &mut self,
        expr: Expr,
        instances: Vec<Instance>,
    ) -> Result<(), ModelError> {
        self.add_template(expr, instances, TemplateKind::Constraint)
    }

    fn add_template(
        &mut self,
        expr: Expr,
        instances: Vec<Instance>,
        kind: TemplateKind,
    ) -> Result<(), ModelError> {
        let tape = Tape::compile(&expr);
        let list = match kind {
            TemplateKind::ObjectiveTerm => &self.objective,
            TemplateKind::Constraint => &self.constraints,
        };
        let t = list.len();
        for (i, inst) in instances.iter().enumerate() {
            if inst.vars.len() != tape.n_var {
                return Err(ModelError::SlotArity {
                    template: t,
                    instance: i,
                    what: "variable",
                    expected: tape.n_var,
                    got: inst.vars.len(),
                });
            }
            if inst.params.len() != tape.n_param {
                return Err(ModelError::SlotArity {
                    template: t,
                    instance: i,
                    what: "parameter",
                    expected: tape.n_param,
                    got: inst.params.len(),
                });
            }
            if let Some(&bad) = inst.vars.iter().find(|&&v| v >= self.n) {
                return Err(ModelError::VariableOutOfRange {
                    template: t,
                    instance: i,
                    index: bad,
                    n: self.n,
                });
            }
        }
        let tpl = Template {
            tape,
            kind,
            instances,
        };
        match kind {
            TemplateKind::ObjectiveTerm => self.objective.push(tpl),
            TemplateKind::Constraint => self.constraints.push(tpl),
        }
        Ok(())
    }

    fn check_x(&self, x: &[f64]) -> Result<(), ModelError> {
        if x.len() != self.n {
            return Err(ModelError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn eval_objective(&self, x: &[f64]) -> Result<f64, ModelError> {
        self.check_x(x)?;
        let mut buf = TapeBuf::default();
        let mut slot_vals = Vec::new();
        let mut total = 0.0;
        for (t, tpl) in self.objective.iter().enumerate() {
            for (i, inst) in tpl.instances.iter().enumerate() {
                gather(x, &inst.vars, &mut slot_vals);
                total += tpl
                    .tape
                    .eval(&mut buf, &slot_vals, &inst.params)
                    .map_err(|message| domain(tpl.kind, t, i, message))?;
            }
        }
        Ok(total)
    }

    pub fn eval_constraints(&self, x: &[f64]) -> Result<Vec<f64>, ModelError> {
        self.check_x(x)?;
        let mut buf = TapeBuf::default();
        let mut slot_vals = Vec::new();
        let mut g = Vec::with_capacity(self.m());
        for (t, tpl) in self.constraints.iter().enumerate() {
            for (i, inst) in tpl.instances.iter().enumerate() {
                gather(x, &inst.vars, &mut slot_vals);
                g.push(
                    tpl.tape
                        .eval(&mut buf, &slot_vals, &inst.params)
                        .map_err(|message| domain(tpl.kind, t, i, message))?,
                );
            }
        }
        Ok(g)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>, ModelError> {
        self.check_x(x)?;
        let mut buf = TapeBuf::default();
        let mut slot_vals = Vec::new();
        let mut slot_grad = Vec::new();
        let mut grad = vec![0.0; self.n];
        for (t, tpl) in self.objective.iter().enumerate() {
            for (i, inst) in tpl.instances.iter().enumerate() {
                gather(x, &inst.vars, &mut slot_vals);
                slot_grad.clear();
                slot_grad.resize(tpl.tape.n_var, 0.0);
                tpl.tape
                    .grad(&mut buf, &slot_vals, &inst.params, &mut slot_grad)
                    .map_err(|message| domain(tpl.kind, t, i, message))?;
                for (slot, &gv) in inst.vars.iter().zip(&slot_grad) {
                    grad[*slot] += gv;
                }
            }
        }
        Ok(grad)
    }

    /// Constraint Jacobian, one reverse sweep per instance. Slots of one
    /// instance mapped to the same variable are summed.
    pub fn jacobian(&self, x: &[f64]) -> Result<SparseMatrix, ModelError> {
        self.check_x(x)?;
        let mut buf = TapeBuf::default();
        let mut slot_vals = Vec::new();
        let mut slot_grad = Vec::new();
        let mut triplets = Vec::new();
        let mut row = 0;
        for (t, tpl) in self.constraints.iter().enumerate() {
            for (i, inst) in tpl.instances.iter().enumerate() {
                gather(x, &inst.vars, &mut slot_vals);
                slot_grad.clear();
                slot_grad.resize(tpl.tape.n_var, 0.0);
                tpl.tape
                    .grad(&mut buf, &slot_vals, &inst.params, &mut slot_grad)
                    .map_err(|message| domain(tpl.kind, t, i, message))?;
                for (slot, &gv) in inst.vars.iter().zip(&slot_grad) {
                    triplets.push((row, *slot, gv));
                }
                row += 1;
            }
        }
        Ok(SparseMatrix::from_triplets(row, self.n, &triplets)?)
    }

    /// Hessian of the Lagrangian `sigma * f(x) - sum_i lambda_i g_i(x)`,
    /// lower triangle. The per-template slot-pair pattern is fixed, so the
    /// returned sparsity pattern does not depend on x, lambda, or sigma.
    pub fn hessian_lagrangian(
        &self,
        x: &[f64],
        lambda: &[f64],
        sigma: f64,
    ) -> Result<SparseMatrix, ModelError> {
        self.check_x(x)?;
        if lambda.len() != self.m() {
            return Err(ModelError::DimensionMismatch {
                expected: self.m(),
                got: lambda.len(),
            });
        }
        let mut buf = TapeBuf::default();
        let mut slot_vals = Vec::new();
        let mut hess = Vec::new(); // dense k x k per instance, row-major
        let mut triplets = Vec::new();
        let mut row = 0;
        for (t, tpl) in self.objective.iter().chain(self.constraints.iter()).enumerate() {
            let t = if tpl.kind == TemplateKind::Constraint {
                t - self.objective.len()
            } else {
                t
            };
            let k = tpl.tape.n_var;
            if tpl.tape.hess_pairs.is_empty() {
                row += match tpl.kind {
                    TemplateKind::Constraint => tpl.instances.len(),
                    TemplateKind::ObjectiveTerm => 0,
                };
                continue;
            }
            for (i, inst) in tpl.instances.iter().enumerate() {
                let weight = match tpl.kind {
                    TemplateKind::ObjectiveTerm => sigma,
                    TemplateKind::Constraint => {
                        let w = -lambda[row];
                        row += 1;
                        w
                    }
                };
                gather(x, &inst.vars, &mut slot_vals);
                hess.clear();
                hess.resize(k * k, 0.0);
                for seed in 0..k {
                    tpl.tape
                        .hess_col(
                            &mut buf,
                            &slot_vals,
                            &inst.params,
                            seed,
                            &mut hess[seed * k..(seed + 1) * k],
                        )
                        .map_err(|message| domain(tpl.kind, t, i, message))?;
                }
                for &(hi, lo) in &tpl.tape.hess_pairs {
                    let (gi, gj) = (inst.vars[hi], inst.vars[lo]);
                    let mut v = weight * hess[hi * k + lo];
                    // two distinct slots landing on one variable pick up
                    // both off-diagonal mirror entries
                    if hi != lo && gi == gj {
                        v *= 2.0;
                    }
                    triplets.push((gi.max(gj), gi.min(gj), v));
                }
            }
        }
        Ok(SparseMatrix::from_triplets(self.n, self.n, &triplets)?)
    }
}

fn gather(x: &[f64], vars: &[usize], out: &mut Vec<f64>) {
    out.clear();
    out.extend(vars.iter().map(|&v| x[v]));
}

fn domain(kind: TemplateKind, template: usize, instance: usize, message: String) -> ModelError {
    ModelError::Domain {
        kind: kind.label(),
        template,
        instance,
        message,
    }
}
