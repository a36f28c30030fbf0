use kkt::IterateState;
use sparse_core::SparseMatrix;

use crate::LpError;

/// `min c^T x  subject to  A x >= b`. Variable bounds, if any, are expected
/// to be folded into rows of `A` by the caller.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub c: Vec<f64>,
    pub a: SparseMatrix,
    pub b: Vec<f64>,
}

impl LinearProgram {
    pub fn new(c: Vec<f64>, a: SparseMatrix, b: Vec<f64>) -> Result<Self, LpError> {
        if a.ncols() != c.len() {
            return Err(LpError::DimensionMismatch {
                expected: a.ncols(),
                got: c.len(),
            });
        }
        if a.nrows() != b.len() {
            return Err(LpError::DimensionMismatch {
                expected: a.nrows(),
                got: b.len(),
            });
        }
        Ok(LinearProgram { c, a, b })
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    /// Rows with no structural entries. Such rows are permitted (the
    /// constraint reads `0 >= b_i`) but usually indicate a modeling slip.
    pub fn empty_rows(&self) -> Vec<usize> {
        let mut nnz = vec![0usize; self.m()];
        for &r in self.a.row_idx() {
            nnz[r] += 1;
        }
        nnz.iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// Constraint values `A x - b`.
    pub fn constraints(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.m()];
        self.a.matvec(x, &mut g);
        for (gi, bi) in g.iter_mut().zip(&self.b) {
            *gi -= bi;
        }
        g
    }
}

/// Starting iterate: x = 0, s_i = max(1, |b_i|), lambda = e, mu = s^T l / m.
/// Slacks and multipliers start at least 1, well inside the cone.
pub fn initial_point(lp: &LinearProgram) -> Result<IterateState, LpError> {
    let m = lp.m();
    if m == 0 {
        return Err(LpError::EmptyProblem);
    }
    let s: Vec<f64> = lp.b.iter().map(|bi| bi.abs().max(1.0)).collect();
    let lambda = vec![1.0; m];
    let mu = s.iter().sum::<f64>() / m as f64;
    Ok(IterateState {
        x: vec![0.0; lp.n()],
        s,
        lambda,
        mu,
        delta_p: 0.0,
        delta_d: 0.0,
    })
}
