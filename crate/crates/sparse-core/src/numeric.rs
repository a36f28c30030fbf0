use crate::{SparseError, SparseMatrix, SymbolicFactorization};

/// Eigenvalue sign counts read off the diagonal of D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
}

#[derive(Debug, Clone)]
pub struct FactorizeOptions {
    /// Absolute pivot-zero tolerance. `None` selects 1e-12 * max|A_ii|.
    pub pivot_zero_tolerance: Option<f64>,
    /// Magnitude of the static fallback pivot.
    pub static_perturbation: f64,
    /// When false, a pivot at or below the tolerance is an error instead
    /// of being perturbed.
    pub allow_perturbation: bool,
    /// Expected pivot sign per *original* row index (+1 or -1). Used to
    /// pick the sign of the static fallback. `None` means all +1.
    pub pivot_signs: Option<Vec<i8>>,
}

impl Default for FactorizeOptions {
    fn default() -> Self {
        Self {
            pivot_zero_tolerance: None,
            static_perturbation: 1e-8,
            allow_perturbation: true,
            pivot_signs: None,
        }
    }
}

/// Numeric LDL^T factors attached to a [`SymbolicFactorization`] pattern.
#[derive(Debug, Clone)]
pub struct NumericFactorization {
    /// Values of L matching the symbolic pattern (unit diagonal implied).
    pub(crate) l_values: Vec<f64>,
    pub(crate) d: Vec<f64>,
    inertia: Inertia,
    perturbation_count: usize,
    perturbation_magnitude: f64,
}

impl NumericFactorization {
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn l_values(&self) -> &[f64] {
        &self.l_values
    }

    pub fn inertia(&self) -> Inertia {
        self.inertia
    }

    pub fn perturbation_count(&self) -> usize {
        self.perturbation_count
    }

    pub fn perturbation_magnitude(&self) -> f64 {
        self.perturbation_magnitude
    }
}

/// Up-looking simplicial LDL^T of `P^T A P` on a fixed symbolic pattern.
///
/// The pivot order is entirely determined by the symbolic permutation; a
/// pivot whose magnitude falls at or below the zero tolerance is replaced
/// by the static fallback value (or reported as [`SparseError::ZeroPivot`]
/// when perturbation is disabled).
pub fn ldlt_factorize(
    a: &SparseMatrix,
    symbolic: &SymbolicFactorization,
    opts: &FactorizeOptions,
) -> Result<NumericFactorization, SparseError> {
    let n = symbolic.n();
    if a.nrows() != n || a.ncols() != n {
        return Err(SparseError::DimensionMismatch {
            expected: n,
            got: a.nrows(),
        });
    }
    if a.nnz() != symbolic.value_map.len() {
        return Err(SparseError::Structure(
            "matrix pattern does not match the symbolic analysis".into(),
        ));
    }
    let tol = opts
        .pivot_zero_tolerance
        .unwrap_or_else(|| 1e-12 * a.diagonal_max_abs());

    // Scatter A's values into the permuted upper pattern.
    let mut upper_vals = vec![0.0f64; a.nnz()];
    for (p, v) in a.values().iter().enumerate() {
        upper_vals[symbolic.value_map[p]] = *v;
    }

    let forward = symbolic.perm.forward();
    let parent = &symbolic.parent;
    let l_col_ptr = &symbolic.l_col_ptr;
    let l_row_idx = &symbolic.l_row_idx;

    let mut l_values = vec![0.0f64; symbolic.l_nnz()];
    let mut l_fill = vec![0usize; n];
    let mut d = vec![0.0f64; n];
    let mut y = vec![0.0f64; n];
    let mut mark = vec![usize::MAX; n];
    let mut pattern: Vec<usize> = Vec::with_capacity(n);
    let mut perturbation_count = 0usize;

    for k in 0..n {
        // Row k pattern of L: etree reach of column k's upper entries.
        pattern.clear();
        mark[k] = k;
        let mut dk = 0.0;
        for p in symbolic.upper_col_ptr[k]..symbolic.upper_col_ptr[k + 1] {
            let i = symbolic.upper_row_idx[p];
            let v = upper_vals[p];
            if i == k {
                dk = v;
                continue;
            }
            y[i] = v;
            let mut j = i;
            while mark[j] != k {
                mark[j] = k;
                pattern.push(j);
                j = parent[j];
            }
        }
        pattern.sort_unstable();

        for &j in &pattern {
            let yj = y[j];
            y[j] = 0.0;
            let start = l_col_ptr[j];
            for p in start..start + l_fill[j] {
                y[l_row_idx[p]] -= l_values[p] * yj;
            }
            let lkj = yj / d[j];
            dk -= lkj * yj;
            let slot = start + l_fill[j];
            debug_assert_eq!(l_row_idx[slot], k);
            l_values[slot] = lkj;
            l_fill[j] += 1;
        }

        if dk.abs() <= tol {
            if !opts.allow_perturbation {
                return Err(SparseError::ZeroPivot {
                    column: forward[k],
                    magnitude: dk.abs(),
                });
            }
            let sign = opts
                .pivot_signs
                .as_ref()
                .map(|s| if s[forward[k]] < 0 { -1.0 } else { 1.0 })
                .unwrap_or(1.0);
            dk = sign * opts.static_perturbation;
            perturbation_count += 1;
        }
        d[k] = dk;
    }

    let mut inertia = Inertia {
        n_pos: 0,
        n_neg: 0,
        n_zero: 0,
    };
    for &dk in &d {
        if dk.abs() <= tol {
            inertia.n_zero += 1;
        } else if dk > 0.0 {
            inertia.n_pos += 1;
        } else {
            inertia.n_neg += 1;
        }
    }

    Ok(NumericFactorization {
        l_values,
        d,
        inertia,
        perturbation_count,
        perturbation_magnitude: if perturbation_count > 0 {
            opts.static_perturbation
        } else {
            0.0
        },
    })
}

/// Solves `A x = rhs` from the factors: permute, forward solve, diagonal
/// scale, backward solve, unpermute.
pub fn solve(
    fact: &NumericFactorization,
    symbolic: &SymbolicFactorization,
    rhs: &[f64],
) -> Result<Vec<f64>, SparseError> {
    let n = symbolic.n();
    if rhs.len() != n {
        return Err(SparseError::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    if fact.inertia.n_zero > 0 {
        return Err(SparseError::SingularDiagonal {
            n_zero: fact.inertia.n_zero,
        });
    }
    let forward = symbolic.perm.forward();
    let (l_col_ptr, l_row_idx) = (&symbolic.l_col_ptr, &symbolic.l_row_idx);

    let mut y: Vec<f64> = (0..n).map(|k| rhs[forward[k]]).collect();
    for j in 0..n {
        let yj = y[j];
        for p in l_col_ptr[j]..l_col_ptr[j + 1] {
            y[l_row_idx[p]] -= fact.l_values[p] * yj;
        }
    }
    for k in 0..n {
        y[k] /= fact.d[k];
    }
    for j in (0..n).rev() {
        let mut acc = y[j];
        for p in l_col_ptr[j]..l_col_ptr[j + 1] {
            acc -= fact.l_values[p] * y[l_row_idx[p]];
        }
        y[j] = acc;
    }
    let mut x = vec![0.0f64; n];
    for k in 0..n {
        x[forward[k]] = y[k];
    }
    Ok(x)
}

#[derive(Debug, Clone)]
pub struct RefinementOptions {
    pub max_sweeps: usize,
    pub target_residual: f64,
}

impl Default for RefinementOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 3,
            target_residual: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RefinementResult {
    pub x: Vec<f64>,
    pub residual_inf: f64,
    pub sweeps: usize,
}

fn residual_inf(a: &SparseMatrix, x: &[f64], rhs: &[f64], r: &mut [f64]) -> f64 {
    a.symmetric_matvec(x, r);
    let mut norm = 0.0f64;
    for i in 0..rhs.len() {
        r[i] = rhs[i] - r[i];
        norm = norm.max(r[i].abs());
    }
    norm
}

/// Sweeps of iterative refinement on `A x = rhs` reusing existing factors.
///
/// The final residual is reported, never asserted to have met the target;
/// the caller decides what to do with it.
pub fn iterative_refinement(
    a: &SparseMatrix,
    fact: &NumericFactorization,
    symbolic: &SymbolicFactorization,
    rhs: &[f64],
    x0: &[f64],
    opts: &RefinementOptions,
) -> Result<RefinementResult, SparseError> {
    let n = symbolic.n();
    if rhs.len() != n || x0.len() != n {
        return Err(SparseError::DimensionMismatch {
            expected: n,
            got: rhs.len().max(x0.len()),
        });
    }
    let mut x = x0.to_vec();
    let mut r = vec![0.0f64; n];
    let mut norm = residual_inf(a, &x, rhs, &mut r);
    let mut sweeps = 0usize;
    while sweeps < opts.max_sweeps && norm > opts.target_residual {
        let dx = solve(fact, symbolic, &r)?;
        for i in 0..n {
            x[i] += dx[i];
        }
        sweeps += 1;
        norm = residual_inf(a, &x, rhs, &mut r);
    }
    Ok(RefinementResult {
        x,
        residual_inf: norm,
        sweeps,
    })
}
