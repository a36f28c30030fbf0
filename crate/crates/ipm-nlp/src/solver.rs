//! Log-barrier interior-point loop: inertia-corrected Newton directions on
//! a selectable KKT formulation, fraction-to-boundary steps, and an Armijo
//! line search on a barrier merit with an l1 feasibility penalty.

use std::time::Instant;

use kkt::{assemble, DerivativeBundle, Formulation, IterateState};
use model_ad::Model;
use serde::Serialize;

use crate::schedule::{barrier_update, fraction_to_boundary, inertia_correct,
                      RegularizationSchedule};
use crate::NlpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NlpStatus {
    Optimal,
    IterationLimit,
    TimeLimit,
    NumericalFailure,
    RestorationNeeded,
}

#[derive(Debug, Clone, Serialize)]
pub struct NlpSolveReport {
    pub status: NlpStatus,
    pub iterations: usize,
    pub objective: f64,
    pub stationarity: f64,
    pub complementarity: f64,
    pub feasibility: f64,
    pub final_mu: f64,
    pub inertia_correction_events: usize,
    pub wall_time_seconds: f64,
    #[serde(skip)]
    pub x: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct NlpOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_wall_time: f64,
    pub mu_initial: f64,
    pub formulation: Formulation,
    pub schedule: RegularizationSchedule,
    /// Barrier subproblems are considered solved at residual <= this
    /// multiple of mu.
    pub kappa_epsilon: f64,
    /// Emit one fixed-width log line per iteration on stderr.
    pub verbose: bool,
}

impl Default for NlpOptions {
    fn default() -> Self {
        NlpOptions {
            tol: 1e-8,
            max_iter: 500,
            max_wall_time: 900.0,
            mu_initial: 0.1,
            formulation: Formulation::PrimalCondensed,
            schedule: RegularizationSchedule::default(),
            kappa_epsilon: 10.0,
            verbose: false,
        }
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn solve_nlp(model: &Model, opts: &NlpOptions) -> Result<NlpSolveReport, NlpError> {
    let start = Instant::now();
    let m = model.m();
    let mut x = model.initial_point().to_vec();
    let mut mu = opts.mu_initial;

    let mut g = model.eval_constraints(&x)?;
    let mut f = model.eval_objective(&x)?;
    // slacks open at the constraint values, floored away from the boundary;
    // multipliers mu-centered so the first complementarity residual is zero
    let s: Vec<f64> = g.iter().map(|gi| gi.max(1e-2)).collect();
    let lambda: Vec<f64> = s.iter().map(|si| mu / si).collect();
    let mut state = IterateState {
        x: x.clone(),
        s,
        lambda,
        mu,
        delta_p: 0.0,
        delta_d: 0.0,
    };

    let mut sched = opts.schedule.clone();
    let mut nu = 1.0; // l1 feasibility penalty in the merit
    let mut events = 0usize;
    let mut ws = None;

    let mut status = NlpStatus::IterationLimit;
    let mut iterations = opts.max_iter;
    let mut residuals = (f64::INFINITY, f64::INFINITY, f64::INFINITY);

    for iter in 0..opts.max_iter {
        let grad = model.gradient(&x)?;
        let jacobian = model.jacobian(&x)?;
        let hessian = model.hessian_lagrangian(&x, &state.lambda, 1.0)?;
        let bundle = DerivativeBundle {
            grad,
            constraints: g.clone(),
            jacobian,
            hessian,
        };

        let stationarity = inf_norm(&bundle.dual_residual(&state.lambda));
        let feasibility = inf_norm(
            &g.iter()
                .zip(&state.s)
                .map(|(gi, si)| gi - si)
                .collect::<Vec<_>>(),
        );
        let comp_zero = state
            .s
            .iter()
            .zip(&state.lambda)
            .map(|(si, li)| (si * li).abs())
            .fold(0.0, f64::max);
        let comp_mu = state
            .s
            .iter()
            .zip(&state.lambda)
            .map(|(si, li)| (si * li - mu).abs())
            .fold(0.0, f64::max);
        // multiplier-scaled residuals so tol means the same thing when the
        // duals are large
        let sd = (l1_norm(&state.lambda) / m.max(1) as f64).max(100.0) / 100.0;
        residuals = (stationarity / sd, comp_zero / sd, feasibility / sd);
        if opts.verbose {
            eprintln!(
                "{iter:4}  mu={mu:9.2e}  stat={:9.2e}  comp={:9.2e}  feas={:9.2e}  dp={:9.2e}",
                residuals.0, residuals.1, residuals.2, state.delta_p
            );
        }
        if residuals.0.max(residuals.1).max(residuals.2) <= opts.tol {
            status = NlpStatus::Optimal;
            iterations = iter;
            break;
        }
        if start.elapsed().as_secs_f64() > opts.max_wall_time {
            status = NlpStatus::TimeLimit;
            iterations = iter;
            break;
        }

        // barrier subproblem converged: tighten mu and re-center
        if stationarity.max(comp_mu).max(feasibility) <= opts.kappa_epsilon * mu
            && mu > opts.tol / 10.0
        {
            mu = barrier_update(mu, opts.tol);
        }
        state.mu = mu;

        if ws.is_none() {
            ws = Some(assemble(opts.formulation, &bundle, &state)?);
        }
        let ws = ws.as_mut().unwrap();
        let (delta_p, _) = inertia_correct(ws, &mut sched, &bundle, &mut state)?;
        if delta_p > 0.0 {
            events += 1;
        }
        let dir = match ws.solve_direction(&bundle, &state) {
            Ok(d) if d.is_finite() => d,
            _ => {
                status = NlpStatus::NumericalFailure;
                iterations = iter;
                break;
            }
        };

        // barrier merit phi = f - mu sum log s + nu ||g - s||_1
        let gphi: f64 = bundle.grad.iter().zip(&dir.d_x).map(|(a, b)| a * b).sum::<f64>()
            - mu * state
                .s
                .iter()
                .zip(&dir.d_s)
                .map(|(si, di)| di / si)
                .sum::<f64>();
        let theta = l1_norm(
            &g.iter()
                .zip(&state.s)
                .map(|(gi, si)| gi - si)
                .collect::<Vec<_>>(),
        );
        if theta > 1e-14 {
            // keep the direction a descent direction for the merit
            let required = gphi / (0.5 * theta);
            if required > nu {
                nu = required + 1.0;
            }
        }
        let descent = gphi - nu * theta;

        let tau = (1.0 - mu).max(0.99);
        let alpha_max = fraction_to_boundary(&state.s, &dir.d_s, tau);
        let merit0 = f - mu * state.s.iter().map(|v| v.ln()).sum::<f64>() + nu * theta;

        let mut alpha = alpha_max;
        let accepted = loop {
            if alpha < 1e-12 {
                break None;
            }
            let x_t: Vec<f64> = x.iter().zip(&dir.d_x).map(|(a, d)| a + alpha * d).collect();
            let s_t: Vec<f64> = state
                .s
                .iter()
                .zip(&dir.d_s)
                .map(|(a, d)| a + alpha * d)
                .collect();
            let (f_t, g_t) = match (model.eval_objective(&x_t), model.eval_constraints(&x_t)) {
                (Ok(f_t), Ok(g_t)) => (f_t, g_t),
                _ => {
                    // trial point left an operator's domain; shorten
                    alpha *= 0.5;
                    continue;
                }
            };
            let theta_t = g_t
                .iter()
                .zip(&s_t)
                .map(|(gi, si)| (gi - si).abs())
                .sum::<f64>();
            let merit_t = f_t - mu * s_t.iter().map(|v| v.ln()).sum::<f64>() + nu * theta_t;
            if merit_t <= merit0 + 1e-4 * alpha * descent {
                break Some((x_t, s_t, f_t, g_t));
            }
            alpha *= 0.5;
        };
        let Some((x_t, s_t, f_t, g_t)) = accepted else {
            status = NlpStatus::RestorationNeeded;
            iterations = iter;
            break;
        };

        let alpha_dual = fraction_to_boundary(&state.lambda, &dir.d_lambda, tau);
        for (li, di) in state.lambda.iter_mut().zip(&dir.d_lambda) {
            *li += alpha_dual * di;
        }
        x = x_t;
        state.s = s_t;
        state.x = x.clone();
        f = f_t;
        g = g_t;
    }

    Ok(NlpSolveReport {
        status,
        iterations,
        objective: f,
        stationarity: residuals.0,
        complementarity: residuals.1,
        feasibility: residuals.2,
        final_mu: mu,
        inertia_correction_events: events,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        x,
    })
}
