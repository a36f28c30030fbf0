use sparse_core::{
    amd_order, ldlt_factorize, solve, symbolic_analyze, FactorizeOptions, Inertia,
    NumericFactorization, SparseMatrix, SymbolicFactorization,
};

use crate::{DerivativeBundle, Direction, Formulation, IterateState, KktError};

/// Assembled KKT system in one of the four formulations, together with the
/// cached data needed to recover eliminated blocks.
pub struct KktWorkspace {
    formulation: Formulation,
    n: usize,
    m: usize,
    matrix: SparseMatrix,
    symbolic: Option<SymbolicFactorization>,
    numeric: Option<NumericFactorization>,
    /// Sigma = delta_d + s/lambda, per constraint.
    sigma: Vec<f64>,
    sigma_inv: Vec<f64>,
    /// Hessian-block diagonal (H + delta_p I), kept only for DualCondensed.
    hess_diag: Option<Vec<f64>>,
    /// Expected pivot sign per row: +1 for primal-origin blocks, -1 for dual.
    pivot_signs: Vec<i8>,
    /// Constraints touching more than half the variables; condensation can
    /// densify around these.
    dense_rows: Vec<usize>,
    delta_p: f64,
    delta_d: f64,
}

/// Assembles the chosen formulation at the given iterate.
pub fn assemble(
    formulation: Formulation,
    bundle: &DerivativeBundle,
    state: &IterateState,
) -> Result<KktWorkspace, KktError> {
    bundle.validate()?;
    state.validate()?;
    let (n, m) = (bundle.n(), bundle.m());
    if n == 0 {
        return Err(KktError::EmptyProblem);
    }
    if state.s.len() != m {
        return Err(KktError::DimensionMismatch {
            expected: m,
            got: state.s.len(),
        });
    }

    let mut ws = KktWorkspace {
        formulation,
        n,
        m,
        matrix: SparseMatrix::empty(0, 0),
        symbolic: None,
        numeric: None,
        sigma: Vec::new(),
        sigma_inv: Vec::new(),
        hess_diag: None,
        pivot_signs: pivot_signs(formulation, n, m),
        dense_rows: Vec::new(),
        delta_p: 0.0,
        delta_d: 0.0,
    };
    ws.reassemble(bundle, state)?;
    Ok(ws)
}

fn pivot_signs(formulation: Formulation, n: usize, m: usize) -> Vec<i8> {
    let dim = formulation.dimension(n, m);
    let negative_from = match formulation {
        Formulation::Full3x3 => n + m,
        Formulation::Augmented2x2 => n,
        Formulation::PrimalCondensed | Formulation::DualCondensed => dim,
    };
    (0..dim)
        .map(|i| if i < negative_from { 1 } else { -1 })
        .collect()
}

impl KktWorkspace {
    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn inertia(&self) -> Option<Inertia> {
        self.numeric.as_ref().map(|f| f.inertia())
    }

    pub fn perturbation_count(&self) -> usize {
        self.numeric
            .as_ref()
            .map(|f| f.perturbation_count())
            .unwrap_or(0)
    }

    pub fn dense_rows(&self) -> &[usize] {
        &self.dense_rows
    }

    /// Refreshes matrix values for a new iterate. The symbolic analysis is
    /// kept whenever the sparsity pattern is unchanged, so the ordering cost
    /// is paid once per pattern.
    pub fn reassemble(
        &mut self,
        bundle: &DerivativeBundle,
        state: &IterateState,
    ) -> Result<(), KktError> {
        state.validate()?;
        let (n, m) = (self.n, self.m);
        self.sigma = (0..m)
            .map(|i| state.delta_d + state.s[i] / state.lambda[i])
            .collect();
        self.sigma_inv = self.sigma.iter().map(|v| 1.0 / v).collect();
        self.delta_p = state.delta_p;
        self.delta_d = state.delta_d;

        self.dense_rows.clear();
        if matches!(
            self.formulation,
            Formulation::PrimalCondensed | Formulation::DualCondensed
        ) {
            let mut row_nnz = vec![0usize; m];
            for &r in bundle.jacobian.row_idx() {
                row_nnz[r] += 1;
            }
            for (i, &cnt) in row_nnz.iter().enumerate() {
                if 2 * cnt > n {
                    self.dense_rows.push(i);
                }
            }
        }

        let matrix = match self.formulation {
            Formulation::Full3x3 => build_full(bundle, state),
            Formulation::Augmented2x2 => build_augmented(bundle, state, &self.sigma),
            Formulation::PrimalCondensed => build_primal(bundle, state, &self.sigma_inv),
            Formulation::DualCondensed => {
                let hdiag = hessian_block_diagonal(bundle, state.delta_p)?;
                let m = build_dual(bundle, &self.sigma, &hdiag)?;
                self.hess_diag = Some(hdiag);
                Ok(m)
            }
        }?;

        if self
            .symbolic
            .as_ref()
            .map(|_| !matrix.same_pattern(&self.matrix))
            .unwrap_or(true)
        {
            self.symbolic = None;
            self.numeric = None;
        }
        self.matrix = matrix;
        self.numeric = None;
        Ok(())
    }

    /// Factorizes the assembled matrix and reports its inertia.
    pub fn factorize(&mut self, opts: &FactorizeOptions) -> Result<Inertia, KktError> {
        if self.symbolic.is_none() {
            let perm = amd_order(&self.matrix)?;
            self.symbolic = Some(symbolic_analyze(&self.matrix, &perm)?);
        }
        let symbolic = self.symbolic.as_ref().unwrap();
        let mut opts = opts.clone();
        if opts.pivot_signs.is_none() {
            opts.pivot_signs = Some(self.pivot_signs.clone());
        }
        let numeric = ldlt_factorize(&self.matrix, symbolic, &opts)?;
        let inertia = numeric.inertia();
        self.numeric = Some(numeric);
        Ok(inertia)
    }

    /// Solves the factored formulation for the Newton direction and refines
    /// it against the full 3x3 residual (applied blockwise; the full matrix
    /// is never assembled unless it was the factored formulation).
    pub fn solve_direction(
        &self,
        bundle: &DerivativeBundle,
        state: &IterateState,
    ) -> Result<Direction, KktError> {
        let rhs = full_rhs(bundle, state);
        let mut dir = self.solve_full_rhs(bundle, state, &rhs)?;

        let rhs_inf = rhs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let target = 1e-8 * (1.0 + rhs_inf);
        for _ in 0..3 {
            let resid = full_residual(bundle, state, &dir, &rhs);
            let norm = resid.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if norm <= target {
                break;
            }
            let corr = self.solve_full_rhs(bundle, state, &resid)?;
            for (d, c) in dir.d_x.iter_mut().zip(&corr.d_x) {
                *d += c;
            }
            for (d, c) in dir.d_s.iter_mut().zip(&corr.d_s) {
                *d += c;
            }
            for (d, c) in dir.d_lambda.iter_mut().zip(&corr.d_lambda) {
                *d += c;
            }
        }
        Ok(dir)
    }

    /// Solves the factored formulation against an arbitrary full-system
    /// right-hand side `(b1, b2, b3)` for unknowns `(d_x, d_s, -d_lambda)`,
    /// recovering eliminated blocks algebraically.
    pub fn solve_full_rhs(
        &self,
        bundle: &DerivativeBundle,
        state: &IterateState,
        b_full: &[f64],
    ) -> Result<Direction, KktError> {
        let numeric = self.numeric.as_ref().ok_or(KktError::NotFactorized)?;
        let symbolic = self.symbolic.as_ref().ok_or(KktError::NotFactorized)?;
        if self.formulation == Formulation::PrimalCondensed {
            let inertia = numeric.inertia();
            if inertia.n_pos != self.n {
                return Err(KktError::NotPositiveDefinite {
                    n_pos: inertia.n_pos,
                    n: self.n,
                });
            }
        }
        let (n, m) = (self.n, self.m);
        if b_full.len() != n + 2 * m {
            return Err(KktError::DimensionMismatch {
                expected: n + 2 * m,
                got: b_full.len(),
            });
        }
        let b1 = &b_full[..n];
        let b2 = &b_full[n..n + m];
        let b3 = &b_full[n + m..];
        // eliminating the slack row folds b2 into the constraint row:
        // J d_x + Sigma d_lambda = b3 + (s/lambda) b2
        let b2_hat: Vec<f64> = (0..m)
            .map(|i| b3[i] + state.s[i] / state.lambda[i] * b2[i])
            .collect();
        let jac = &bundle.jacobian;

        let recover_ds = |d_lambda: &[f64]| -> Vec<f64> {
            (0..m)
                .map(|i| state.s[i] / state.lambda[i] * (b2[i] - d_lambda[i]))
                .collect()
        };

        match self.formulation {
            Formulation::Full3x3 => {
                let u = solve(numeric, symbolic, b_full)?;
                Ok(Direction {
                    d_x: u[..n].to_vec(),
                    d_s: u[n..n + m].to_vec(),
                    d_lambda: u[n + m..].iter().map(|v| -v).collect(),
                })
            }
            Formulation::Augmented2x2 => {
                let mut rhs = Vec::with_capacity(n + m);
                rhs.extend_from_slice(b1);
                rhs.extend_from_slice(&b2_hat);
                let u = solve(numeric, symbolic, &rhs)?;
                let d_lambda: Vec<f64> = u[n..].iter().map(|v| -v).collect();
                Ok(Direction {
                    d_x: u[..n].to_vec(),
                    d_s: recover_ds(&d_lambda),
                    d_lambda,
                })
            }
            Formulation::PrimalCondensed => {
                // rhs = b1 + J^T Sigma^{-1} b2_hat
                let scaled: Vec<f64> = b2_hat
                    .iter()
                    .zip(&self.sigma_inv)
                    .map(|(v, si)| v * si)
                    .collect();
                let mut rhs = vec![0.0; n];
                jac.matvec_transpose(&scaled, &mut rhs);
                for i in 0..n {
                    rhs[i] += b1[i];
                }
                let d_x = solve(numeric, symbolic, &rhs)?;
                let mut j_dx = vec![0.0; m];
                jac.matvec(&d_x, &mut j_dx);
                let d_lambda: Vec<f64> = (0..m)
                    .map(|i| self.sigma_inv[i] * (b2_hat[i] - j_dx[i]))
                    .collect();
                Ok(Direction {
                    d_s: recover_ds(&d_lambda),
                    d_x,
                    d_lambda,
                })
            }
            Formulation::DualCondensed => {
                let hdiag = self.hess_diag.as_ref().ok_or(KktError::NotFactorized)?;
                // rhs = b2_hat - J H^{-1} b1
                let scaled: Vec<f64> = b1.iter().zip(hdiag).map(|(v, h)| v / h).collect();
                let mut rhs = vec![0.0; m];
                jac.matvec(&scaled, &mut rhs);
                for i in 0..m {
                    rhs[i] = b2_hat[i] - rhs[i];
                }
                let d_lambda = solve(numeric, symbolic, &rhs)?;
                let mut jt_dl = vec![0.0; n];
                jac.matvec_transpose(&d_lambda, &mut jt_dl);
                let d_x: Vec<f64> = (0..n).map(|i| (b1[i] + jt_dl[i]) / hdiag[i]).collect();
                Ok(Direction {
                    d_s: recover_ds(&d_lambda),
                    d_x,
                    d_lambda,
                })
            }
        }
    }
}

/// Right-hand side of the full system for the current iterate: the negated
/// barrier-KKT residual blocks.
pub fn full_rhs(bundle: &DerivativeBundle, state: &IterateState) -> Vec<f64> {
    let (n, m) = (bundle.n(), bundle.m());
    let mut rhs = Vec::with_capacity(n + 2 * m);
    for v in bundle.dual_residual(&state.lambda) {
        rhs.push(-v);
    }
    for i in 0..m {
        rhs.push(-(state.lambda[i] - state.mu / state.s[i]));
    }
    for i in 0..m {
        rhs.push(-(bundle.constraints[i] - state.s[i]));
    }
    debug_assert_eq!(rhs.len(), n + 2 * m);
    rhs
}

/// Right-hand side vector for the chosen formulation, reduced from the full
/// system by the same block eliminations used in assembly.
pub fn residual_vector(
    formulation: Formulation,
    bundle: &DerivativeBundle,
    state: &IterateState,
) -> Vec<f64> {
    let (n, m) = (bundle.n(), bundle.m());
    let full = full_rhs(bundle, state);
    let b1 = &full[..n];
    let b2 = &full[n..n + m];
    let b3 = &full[n + m..];
    let b2_hat: Vec<f64> = (0..m)
        .map(|i| b3[i] + state.s[i] / state.lambda[i] * b2[i])
        .collect();
    match formulation {
        Formulation::Full3x3 => full,
        Formulation::Augmented2x2 => {
            let mut out = b1.to_vec();
            out.extend_from_slice(&b2_hat);
            out
        }
        Formulation::PrimalCondensed => {
            let sigma_inv: Vec<f64> = (0..m)
                .map(|i| 1.0 / (state.delta_d + state.s[i] / state.lambda[i]))
                .collect();
            let scaled: Vec<f64> = b2_hat
                .iter()
                .zip(&sigma_inv)
                .map(|(v, si)| v * si)
                .collect();
            let mut out = vec![0.0; n];
            bundle.jacobian.matvec_transpose(&scaled, &mut out);
            for i in 0..n {
                out[i] += b1[i];
            }
            out
        }
        Formulation::DualCondensed => {
            // defined for diagonal Hessian blocks only; mirrored from assembly
            let hdiag = hessian_block_diagonal(bundle, state.delta_p)
                .expect("dual condensed residual requires a diagonal Hessian");
            let scaled: Vec<f64> = b1.iter().zip(&hdiag).map(|(v, h)| v / h).collect();
            let mut out = vec![0.0; m];
            bundle.jacobian.matvec(&scaled, &mut out);
            for i in 0..m {
                out[i] = b2_hat[i] - out[i];
            }
            out
        }
    }
}

/// Applies the full 3x3 matrix blockwise to a direction and returns
/// `rhs - K d`.
pub fn full_residual(
    bundle: &DerivativeBundle,
    state: &IterateState,
    dir: &Direction,
    rhs: &[f64],
) -> Vec<f64> {
    let (n, m) = (bundle.n(), bundle.m());
    let mut out = vec![0.0; n + 2 * m];
    // row 1: (H + delta_p I) d_x - J^T d_lambda
    let mut h_dx = vec![0.0; n];
    bundle.hessian.symmetric_matvec(&dir.d_x, &mut h_dx);
    let mut jt_dl = vec![0.0; n];
    bundle.jacobian.matvec_transpose(&dir.d_lambda, &mut jt_dl);
    for i in 0..n {
        out[i] = rhs[i] - (h_dx[i] + state.delta_p * dir.d_x[i] - jt_dl[i]);
    }
    // row 2: (lambda/s) d_s + d_lambda
    for i in 0..m {
        out[n + i] = rhs[n + i]
            - (state.lambda[i] / state.s[i] * dir.d_s[i] + dir.d_lambda[i]);
    }
    // row 3: J d_x - d_s + delta_d d_lambda
    let mut j_dx = vec![0.0; m];
    bundle.jacobian.matvec(&dir.d_x, &mut j_dx);
    for i in 0..m {
        out[n + m + i] = rhs[n + m + i]
            - (j_dx[i] - dir.d_s[i] + state.delta_d * dir.d_lambda[i]);
    }
    out
}

fn hessian_block_diagonal(
    bundle: &DerivativeBundle,
    delta_p: f64,
) -> Result<Vec<f64>, KktError> {
    let n = bundle.n();
    let mut diag = vec![delta_p; n];
    for (i, j, v) in bundle.hessian.iter() {
        if i != j {
            return Err(KktError::NonDiagonalHessian { row: i, col: j });
        }
        diag[i] += v;
    }
    for (i, h) in diag.iter().enumerate() {
        if *h == 0.0 {
            return Err(KktError::SingularHessianBlock { index: i });
        }
    }
    Ok(diag)
}

/// Triplets of the (1,1) block H + delta_p I; the regularization diagonal is
/// always present so the pattern is iteration-invariant.
fn hessian_block_triplets(bundle: &DerivativeBundle, delta_p: f64) -> Vec<(usize, usize, f64)> {
    let n = bundle.n();
    let mut trips: Vec<(usize, usize, f64)> = bundle.hessian.iter().collect();
    for i in 0..n {
        trips.push((i, i, delta_p));
    }
    trips
}

fn build_full(
    bundle: &DerivativeBundle,
    state: &IterateState,
) -> Result<SparseMatrix, KktError> {
    let (n, m) = (bundle.n(), bundle.m());
    let dim = n + 2 * m;
    let mut trips = hessian_block_triplets(bundle, state.delta_p);
    for i in 0..m {
        trips.push((n + i, n + i, state.lambda[i] / state.s[i]));
    }
    for (i, j, v) in bundle.jacobian.iter() {
        trips.push((n + m + i, j, v));
    }
    for i in 0..m {
        trips.push((n + m + i, n + i, -1.0));
        trips.push((n + m + i, n + m + i, -state.delta_d));
    }
    Ok(SparseMatrix::from_triplets(dim, dim, &trips)?)
}

fn build_augmented(
    bundle: &DerivativeBundle,
    state: &IterateState,
    sigma: &[f64],
) -> Result<SparseMatrix, KktError> {
    let (n, m) = (bundle.n(), bundle.m());
    let dim = n + m;
    let mut trips = hessian_block_triplets(bundle, state.delta_p);
    for (i, j, v) in bundle.jacobian.iter() {
        trips.push((n + i, j, v));
    }
    for (i, sg) in sigma.iter().enumerate() {
        trips.push((n + i, n + i, -sg));
    }
    Ok(SparseMatrix::from_triplets(dim, dim, &trips)?)
}

fn build_primal(
    bundle: &DerivativeBundle,
    state: &IterateState,
    sigma_inv: &[f64],
) -> Result<SparseMatrix, KktError> {
    let n = bundle.n();
    let jac = &bundle.jacobian;
    let jac_t = jac.transpose();
    let mut trips = hessian_block_triplets(bundle, state.delta_p);
    // lower triangle of J^T Sigma^{-1} J, column by column
    for j in 0..n {
        for p in jac.col_ptr()[j]..jac.col_ptr()[j + 1] {
            let k = jac.row_idx()[p];
            let coef = sigma_inv[k] * jac.values()[p];
            for q in jac_t.col_ptr()[k]..jac_t.col_ptr()[k + 1] {
                let i = jac_t.row_idx()[q];
                if i >= j {
                    trips.push((i, j, coef * jac_t.values()[q]));
                }
            }
        }
    }
    Ok(SparseMatrix::from_triplets(n, n, &trips)?)
}

fn build_dual(
    bundle: &DerivativeBundle,
    sigma: &[f64],
    hdiag: &[f64],
) -> Result<SparseMatrix, KktError> {
    let m = bundle.m();
    let jac = &bundle.jacobian;
    let mut trips: Vec<(usize, usize, f64)> =
        sigma.iter().enumerate().map(|(i, s)| (i, i, *s)).collect();
    // lower triangle of J H^{-1} J^T, built from the columns of J
    for var in 0..jac.ncols() {
        let h_inv = 1.0 / hdiag[var];
        let range = jac.col_ptr()[var]..jac.col_ptr()[var + 1];
        for p in range.clone() {
            let r = jac.row_idx()[p];
            let vr = jac.values()[p];
            for q in range.clone() {
                let s = jac.row_idx()[q];
                if s <= r {
                    trips.push((r, s, vr * jac.values()[q] * h_inv));
                }
            }
        }
    }
    Ok(SparseMatrix::from_triplets(m, m, &trips)?)
}
