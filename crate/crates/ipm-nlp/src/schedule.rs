//! Regularization driven by inertia: delta_p climbs until the factorization
//! certifies the target eigenvalue sign counts, then relaxes from the last
//! successful value on the next correction.

use kkt::{DerivativeBundle, Formulation, IterateState, KktWorkspace};
use sparse_core::FactorizeOptions;

use crate::NlpError;

#[derive(Debug, Clone)]
pub struct RegularizationSchedule {
    /// Last delta_p that produced the target inertia; 0 before any
    /// correction has been needed.
    pub delta_last: f64,
    pub delta_initial: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    /// Multiplier applied while climbing, before/after the first success.
    pub increase_first: f64,
    pub increase_subsequent: f64,
    pub decrease: f64,
    /// delta_d = dual_scale * mu^dual_exponent, applied only while a
    /// correction is active (delta_p > 0).
    pub dual_scale: f64,
    pub dual_exponent: f64,
}

impl Default for RegularizationSchedule {
    fn default() -> Self {
        RegularizationSchedule {
            delta_last: 0.0,
            delta_initial: 1e-4,
            delta_min: 1e-20,
            delta_max: 1e40,
            increase_first: 100.0,
            increase_subsequent: 8.0,
            decrease: 1.0 / 3.0,
            dual_scale: 1e-8,
            dual_exponent: 0.25,
        }
    }
}

impl RegularizationSchedule {
    pub fn dual_delta(&self, mu: f64) -> f64 {
        self.dual_scale * mu.powf(self.dual_exponent)
    }
}

/// Target inertia reached: all-positive D for the condensed SPD forms, the
/// saddle signature for the indefinite forms.
fn inertia_acceptable(ws: &KktWorkspace, n: usize, m: usize) -> bool {
    let Some(inertia) = ws.inertia() else {
        return false;
    };
    if inertia.n_zero != 0 {
        return false;
    }
    match ws.formulation() {
        Formulation::PrimalCondensed => inertia.n_pos == n,
        Formulation::DualCondensed => inertia.n_pos == m,
        Formulation::Augmented2x2 => inertia.n_pos == n && inertia.n_neg == m,
        Formulation::Full3x3 => inertia.n_pos == n + m && inertia.n_neg == m,
    }
}

/// Finds the smallest scheduled `(delta_p, delta_d)` whose factorization has
/// the target inertia, leaving the workspace factored at those values.
/// Perturbation stays disabled throughout, so an accepted factorization is
/// exact: zero perturbed pivots.
pub fn inertia_correct(
    ws: &mut KktWorkspace,
    sched: &mut RegularizationSchedule,
    bundle: &DerivativeBundle,
    state: &mut IterateState,
) -> Result<(f64, f64), NlpError> {
    let n = bundle.n();
    let m = bundle.m();
    let fopts = FactorizeOptions {
        allow_perturbation: false,
        ..Default::default()
    };
    let dual_delta = sched.dual_delta(state.mu);
    let try_delta = |delta_p: f64,
                     ws: &mut KktWorkspace,
                     state: &mut IterateState|
     -> Result<bool, NlpError> {
        state.delta_p = delta_p;
        state.delta_d = if delta_p > 0.0 { dual_delta } else { 0.0 };
        ws.reassemble(bundle, state)?;
        Ok(ws.factorize(&fopts).is_ok() && inertia_acceptable(ws, n, m))
    };

    if try_delta(0.0, ws, state)? {
        return Ok((0.0, 0.0));
    }
    let mut delta = if sched.delta_last == 0.0 {
        sched.delta_initial
    } else {
        (sched.delta_last * sched.decrease).max(sched.delta_min)
    };
    let factor = if sched.delta_last == 0.0 {
        sched.increase_first
    } else {
        sched.increase_subsequent
    };
    loop {
        if try_delta(delta, ws, state)? {
            sched.delta_last = delta;
            return Ok((delta, state.delta_d));
        }
        delta *= factor;
        if delta > sched.delta_max {
            return Err(NlpError::RegularizationExhausted { delta });
        }
    }
}

/// mu+ = max(tol / 10, min(0.2 mu, mu^1.5)).
pub fn barrier_update(mu: f64, tol: f64) -> f64 {
    (0.2 * mu).min(mu.powf(1.5)).max(tol / 10.0)
}

/// Largest alpha <= 1 with v + alpha dv >= (1 - tau) v, componentwise.
pub fn fraction_to_boundary(v: &[f64], dv: &[f64], tau: f64) -> f64 {
    let mut alpha: f64 = 1.0;
    for (vi, di) in v.iter().zip(dv) {
        if *di < 0.0 {
            alpha = alpha.min(-tau * vi / di);
        }
    }
    alpha
}
