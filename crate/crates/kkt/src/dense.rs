//! Dense reference solve of the full KKT system, used as an independent
//! check on the sparse path. Intended for small systems (n + 2m <= 200).

use crate::workspace::full_rhs;
use crate::{DerivativeBundle, Direction, IterateState, KktError};

/// Solves a dense linear system with LU and partial pivoting.
pub fn dense_lu_solve(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>, KktError> {
    let n = a.len();
    let mut lu: Vec<Vec<f64>> = a.to_vec();
    let mut x = b.to_vec();
    for k in 0..n {
        let (pivot_row, pivot) = (k..n)
            .map(|i| (i, lu[i][k].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot == 0.0 {
            return Err(KktError::SingularDenseSystem);
        }
        lu.swap(k, pivot_row);
        x.swap(k, pivot_row);
        for i in k + 1..n {
            let f = lu[i][k] / lu[k][k];
            lu[i][k] = f;
            for j in k + 1..n {
                lu[i][j] -= f * lu[k][j];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let v = x[j];
            x[i] -= lu[i][j] * v;
        }
        x[i] /= lu[i][i];
    }
    Ok(x)
}

/// Assembles the full 3x3 KKT system densely and solves it directly.
pub fn dense_oracle_direction(
    bundle: &DerivativeBundle,
    state: &IterateState,
) -> Result<Direction, KktError> {
    bundle.validate()?;
    state.validate()?;
    let (n, m) = (bundle.n(), bundle.m());
    let dim = n + 2 * m;
    assert!(dim <= 200, "dense oracle is limited to n + 2m <= 200");

    let mut k = vec![vec![0.0f64; dim]; dim];
    let h = bundle.hessian.symmetric_to_dense();
    for i in 0..n {
        for j in 0..n {
            k[i][j] = h[i][j];
        }
        k[i][i] += state.delta_p;
    }
    for i in 0..m {
        k[n + i][n + i] = state.lambda[i] / state.s[i];
        k[n + i][n + m + i] = -1.0;
        k[n + m + i][n + i] = -1.0;
        k[n + m + i][n + m + i] = -state.delta_d;
    }
    for (i, j, v) in bundle.jacobian.iter() {
        k[n + m + i][j] = v;
        k[j][n + m + i] = v;
    }

    let rhs = full_rhs(bundle, state);
    let u = dense_lu_solve(&k, &rhs)?;
    Ok(Direction {
        d_x: u[..n].to_vec(),
        d_s: u[n..n + m].to_vec(),
        d_lambda: u[n + m..].iter().map(|v| -v).collect(),
    })
}
