use sparse_core::SparseMatrix;

use crate::KktError;

/// Which algebraic form of the KKT system is assembled and factored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Full symmetrized system of dimension n + 2m.
    Full3x3,
    /// Slack block eliminated; dimension n + m.
    Augmented2x2,
    /// Everything condensed onto the primal variables; dimension n, SPD
    /// under inertia-corrected regularization.
    PrimalCondensed,
    /// Normal equations over the multipliers; dimension m. Requires a
    /// diagonal Hessian block.
    DualCondensed,
}

impl Formulation {
    pub fn dimension(&self, n: usize, m: usize) -> usize {
        match self {
            Formulation::Full3x3 => n + 2 * m,
            Formulation::Augmented2x2 => n + m,
            Formulation::PrimalCondensed => n,
            Formulation::DualCondensed => m,
        }
    }
}

impl std::str::FromStr for Formulation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "full3x3" => Ok(Formulation::Full3x3),
            "augmented" | "augmented2x2" => Ok(Formulation::Augmented2x2),
            "primal" | "primal-condensed" => Ok(Formulation::PrimalCondensed),
            "dual" | "dual-condensed" | "normal" => Ok(Formulation::DualCondensed),
            other => Err(format!("unknown formulation `{other}`")),
        }
    }
}

/// Primal-dual iterate with barrier and regularization parameters.
#[derive(Debug, Clone)]
pub struct IterateState {
    pub x: Vec<f64>,
    /// Slacks, strictly positive.
    pub s: Vec<f64>,
    /// Inequality multipliers, strictly positive.
    pub lambda: Vec<f64>,
    /// Barrier parameter, strictly positive.
    pub mu: f64,
    pub delta_p: f64,
    pub delta_d: f64,
}

impl IterateState {
    pub fn validate(&self) -> Result<(), KktError> {
        if self.s.len() != self.lambda.len() {
            return Err(KktError::DimensionMismatch {
                expected: self.s.len(),
                got: self.lambda.len(),
            });
        }
        if self.s.iter().any(|&v| v <= 0.0) || self.lambda.iter().any(|&v| v <= 0.0) {
            return Err(KktError::InvalidIterate(
                "s and lambda must be strictly positive".into(),
            ));
        }
        if self.mu <= 0.0 {
            return Err(KktError::InvalidIterate("mu must be positive".into()));
        }
        if self.delta_p < 0.0 || self.delta_d < 0.0 {
            return Err(KktError::InvalidIterate(
                "regularization must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// First and second derivative information at a point.
#[derive(Debug, Clone)]
pub struct DerivativeBundle {
    /// Objective gradient, length n.
    pub grad: Vec<f64>,
    /// Constraint values g(x), length m.
    pub constraints: Vec<f64>,
    /// Constraint Jacobian, m x n.
    pub jacobian: SparseMatrix,
    /// Lagrangian Hessian, n x n, lower triangle.
    pub hessian: SparseMatrix,
}

impl DerivativeBundle {
    pub fn n(&self) -> usize {
        self.jacobian.ncols()
    }

    pub fn m(&self) -> usize {
        self.jacobian.nrows()
    }

    pub fn validate(&self) -> Result<(), KktError> {
        let (n, m) = (self.n(), self.m());
        if self.grad.len() != n {
            return Err(KktError::DimensionMismatch {
                expected: n,
                got: self.grad.len(),
            });
        }
        if self.constraints.len() != m {
            return Err(KktError::DimensionMismatch {
                expected: m,
                got: self.constraints.len(),
            });
        }
        if self.hessian.nrows() != n || self.hessian.ncols() != n {
            return Err(KktError::DimensionMismatch {
                expected: n,
                got: self.hessian.nrows(),
            });
        }
        if !self.hessian.is_lower_triangular() {
            return Err(KktError::InvalidIterate(
                "Hessian must be stored as a lower triangle".into(),
            ));
        }
        Ok(())
    }

    /// Dual residual `grad - J^T lambda`.
    pub fn dual_residual(&self, lambda: &[f64]) -> Vec<f64> {
        let mut jt_lambda = vec![0.0; self.n()];
        self.jacobian.matvec_transpose(lambda, &mut jt_lambda);
        self.grad
            .iter()
            .zip(&jt_lambda)
            .map(|(g, j)| g - j)
            .collect()
    }
}

/// Newton direction in the full primal-dual space.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    pub d_x: Vec<f64>,
    pub d_s: Vec<f64>,
    pub d_lambda: Vec<f64>,
}

impl Direction {
    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            d_x: vec![0.0; n],
            d_s: vec![0.0; m],
            d_lambda: vec![0.0; m],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.d_x.iter().all(|v| v.is_finite())
            && self.d_s.iter().all(|v| v.is_finite())
            && self.d_lambda.iter().all(|v| v.is_finite())
    }
}
