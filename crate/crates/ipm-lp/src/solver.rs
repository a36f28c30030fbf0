//! Mehrotra predictor-corrector path following under fixed primal-dual
//! regularization: no inertia correction loop, one delta-doubling retry on
//! factorization failure, and the KKT formulation is a runtime choice.

use std::time::Instant;

use kkt::{assemble, full_residual, DerivativeBundle, Direction, Formulation, IterateState,
          KktWorkspace};
use serde::Serialize;
use sparse_core::{FactorizeOptions, SparseMatrix};

use crate::problem::{initial_point, LinearProgram};
use crate::LpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    IterationLimit,
    TimeLimit,
    NumericalFailure,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpSolveReport {
    pub status: LpStatus,
    pub iterations: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub complementarity_gap: f64,
    pub wall_time_seconds: f64,
    #[serde(skip)]
    pub x: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_wall_time: f64,
    pub formulation: Formulation,
    pub delta_p: f64,
    pub delta_d: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            tol: 1e-8,
            max_iter: 500,
            max_wall_time: 900.0,
            // normal equations over the multipliers, the usual LP default
            formulation: Formulation::DualCondensed,
            // the dual block carries -delta_d I explicitly, so both
            // regularization magnitudes are positive here
            delta_p: 1e-8,
            delta_d: 1e-8,
        }
    }
}

/// Largest alpha <= 1 with v + alpha dv >= (1 - tau) v, componentwise.
fn step_to_boundary(v: &[f64], dv: &[f64], tau: f64) -> f64 {
    let mut alpha: f64 = 1.0;
    for (vi, di) in v.iter().zip(dv) {
        if *di < 0.0 {
            alpha = alpha.min(-tau * vi / di);
        }
    }
    alpha
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// One factorized solve plus refinement sweeps against the full-system
/// residual. The condensed reductions go through 1/delta_p, so a couple of
/// sweeps recover the digits that scaling costs.
fn solve_refined(
    ws: &KktWorkspace,
    bundle: &DerivativeBundle,
    state: &IterateState,
    rhs: &[f64],
) -> Result<Direction, LpError> {
    let mut dir = ws.solve_full_rhs(bundle, state, rhs)?;
    let target = 1e-10 * (1.0 + inf_norm(rhs));
    for _ in 0..4 {
        let resid = full_residual(bundle, state, &dir, rhs);
        if inf_norm(&resid) <= target {
            break;
        }
        let corr = ws.solve_full_rhs(bundle, state, &resid)?;
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

pub fn solve_lp(lp: &LinearProgram, opts: &LpOptions) -> Result<LpSolveReport, LpError> {
    let start = Instant::now();
    let (n, m) = (lp.n(), lp.m());
    let mut state = initial_point(lp)?;
    state.delta_p = opts.delta_p;
    state.delta_d = opts.delta_d;

    let mut bundle = DerivativeBundle {
        grad: lp.c.clone(),
        constraints: lp.constraints(&state.x),
        jacobian: lp.a.clone(),
        hessian: SparseMatrix::empty(n, n),
    };
    let mut ws = assemble(opts.formulation, &bundle, &state)?;
    // Quasi-definiteness bounds every pivot away from zero by the fixed
    // regularization, so the zero test is absolute; the relative default
    // would misclassify delta-sized pivots once Sigma entries blow up near
    // convergence.
    let fopts = FactorizeOptions {
        pivot_zero_tolerance: Some(0.1 * opts.delta_p.min(opts.delta_d)),
        ..Default::default()
    };

    let report = |status: LpStatus, iterations: usize, state: &IterateState| {
        let pinf = {
            let g = lp.constraints(&state.x);
            inf_norm(
                &g.iter()
                    .zip(&state.s)
                    .map(|(gi, si)| gi - si)
                    .collect::<Vec<_>>(),
            )
        };
        let mut jt_lambda = vec![0.0; lp.n()];
        lp.a.matvec_transpose(&state.lambda, &mut jt_lambda);
        let dinf = inf_norm(
            &lp.c
                .iter()
                .zip(&jt_lambda)
                .map(|(c, j)| c - j)
                .collect::<Vec<_>>(),
        );
        let gap = state.s.iter().zip(&state.lambda).map(|(s, l)| s * l).sum::<f64>() / m as f64;
        LpSolveReport {
            status,
            iterations,
            primal_objective: lp.objective(&state.x),
            dual_objective: lp.b.iter().zip(&state.lambda).map(|(b, l)| b * l).sum(),
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
            complementarity_gap: gap,
            wall_time_seconds: start.elapsed().as_secs_f64(),
            x: state.x.clone(),
        }
    };

    for iter in 0..opts.max_iter {
        bundle.constraints = lp.constraints(&state.x);
        let gap = state.s.iter().zip(&state.lambda).map(|(s, l)| s * l).sum::<f64>() / m as f64;
        let pinf = inf_norm(
            &bundle
                .constraints
                .iter()
                .zip(&state.s)
                .map(|(g, s)| g - s)
                .collect::<Vec<_>>(),
        );
        let dinf = inf_norm(&bundle.dual_residual(&state.lambda));
        if pinf.max(dinf).max(gap) <= opts.tol {
            return Ok(report(LpStatus::Optimal, iter, &state));
        }
        if start.elapsed().as_secs_f64() > opts.max_wall_time {
            return Ok(report(LpStatus::TimeLimit, iter, &state));
        }

        state.mu = gap.max(f64::MIN_POSITIVE);
        ws.reassemble(&bundle, &state)?;
        if ws.factorize(&fopts).is_err() {
            // fixed-regularization policy: a single retry at doubled deltas
            state.delta_p *= 2.0;
            state.delta_d *= 2.0;
            ws.reassemble(&bundle, &state)?;
            if ws.factorize(&fopts).is_err() {
                return Ok(report(LpStatus::NumericalFailure, iter, &state));
            }
        }

        // predictor: pure Newton step toward mu = 0
        let mut rhs = vec![0.0; n + 2 * m];
        let dual_res = bundle.dual_residual(&state.lambda);
        for i in 0..n {
            rhs[i] = -dual_res[i];
        }
        for i in 0..m {
            rhs[n + i] = -state.lambda[i];
            rhs[n + m + i] = -(bundle.constraints[i] - state.s[i]);
        }
        let affine = match solve_refined(&ws, &bundle, &state, &rhs) {
            Ok(d) => d,
            Err(_) => return Ok(report(LpStatus::NumericalFailure, iter, &state)),
        };

        // Mehrotra centering: how far the affine step gets decides sigma
        let alpha_p_aff = step_to_boundary(&state.s, &affine.d_s, 1.0);
        let alpha_d_aff = step_to_boundary(&state.lambda, &affine.d_lambda, 1.0);
        let gap_aff = (0..m)
            .map(|i| {
                (state.s[i] + alpha_p_aff * affine.d_s[i])
                    * (state.lambda[i] + alpha_d_aff * affine.d_lambda[i])
            })
            .sum::<f64>()
            / m as f64;
        let sigma = (gap_aff / gap).powi(3).clamp(1e-8, 1.0 - 1e-8);
        let mu_target = sigma * gap;

        // corrector: recenter and cancel the second-order term
        for i in 0..m {
            rhs[n + i] = -(state.lambda[i] - mu_target / state.s[i])
                - affine.d_s[i] * affine.d_lambda[i] / state.s[i];
        }
        let dir = match solve_refined(&ws, &bundle, &state, &rhs) {
            Ok(d) => d,
            Err(_) => return Ok(report(LpStatus::NumericalFailure, iter, &state)),
        };
        if !dir.is_finite() {
            return Ok(report(LpStatus::NumericalFailure, iter, &state));
        }

        let alpha_p = step_to_boundary(&state.s, &dir.d_s, 0.995).min(1.0);
        let alpha_d = step_to_boundary(&state.lambda, &dir.d_lambda, 0.995).min(1.0);
        for i in 0..n {
            state.x[i] += alpha_p * dir.d_x[i];
        }
        for i in 0..m {
            state.s[i] += alpha_p * dir.d_s[i];
            state.lambda[i] += alpha_d * dir.d_lambda[i];
        }
    }
    bundle.constraints = lp.constraints(&state.x);
    let gap = state.s.iter().zip(&state.lambda).map(|(s, l)| s * l).sum::<f64>() / m as f64;
    let pinf = inf_norm(
        &bundle
            .constraints
            .iter()
            .zip(&state.s)
            .map(|(g, s)| g - s)
            .collect::<Vec<_>>(),
    );
    let dinf = inf_norm(&bundle.dual_residual(&state.lambda));
    let status = if pinf.max(dinf).max(gap) <= opts.tol {
        LpStatus::Optimal
    } else {
        LpStatus::IterationLimit
    };
    Ok(report(status, opts.max_iter, &state))
}
