//! Forward, sensitivity and adjoint solves.
//!
//! All three share the same step operators; the adjoint is the exact
//! transpose of the discrete forward propagation, so the inner-product
//! identities hold to solver tolerance. `solve_adjoint` uses the positive
//! convention: injected sources accumulate through transposed steps, and
//! the Jacobian-transpose action is `2 m .* p(0)` (elementwise) for the
//! squared initial condition.

use crate::error::{Result, SboedError};
use crate::grid::{Grid, ScalarField};
use crate::linalg::mat::all_finite;
use crate::scalar::{c, Scalar};

use super::{InitialCondition, PdeConfig, StateTrajectory, StepOperators, VelocityField};

/// Initial state induced by the parameter field.
pub fn initial_state<S: Scalar>(grid: &Grid, cfg: &PdeConfig, m: &[S]) -> Vec<S> {
    let mut u0: Vec<S> = match cfg.initial_condition {
        InitialCondition::Squared => m.iter().map(|&v| v * v).collect(),
        InitialCondition::Linear => m.to_vec(),
    };
    if grid.has_obstacles() {
        for idx in 0..grid.n_nodes() {
            if grid.is_masked(idx) {
                u0[idx] = S::zero();
            }
        }
    }
    u0
}

/// Initial condition of the sensitivity equation in direction `mhat`.
pub fn sensitivity_initial<S: Scalar>(
    grid: &Grid,
    cfg: &PdeConfig,
    m: &[S],
    mhat: &[S],
) -> Vec<S> {
    let two = c::<S>(2.0);
    let mut u0: Vec<S> = match cfg.initial_condition {
        InitialCondition::Squared => m
            .iter()
            .zip(mhat.iter())
            .map(|(&mi, &hi)| two * mi * hi)
            .collect(),
        InitialCondition::Linear => mhat.to_vec(),
    };
    if grid.has_obstacles() {
        for idx in 0..grid.n_nodes() {
            if grid.is_masked(idx) {
                u0[idx] = S::zero();
            }
        }
    }
    u0
}

/// Evolve a given initial field through the linear PDE dynamics.
pub fn solve_linear_evolution<S: Scalar>(
    ops: &StepOperators<S>,
    cfg: &PdeConfig,
    u0: Vec<S>,
) -> Result<StateTrajectory<S>> {
    if u0.len() != ops.n_nodes() {
        return Err(SboedError::contract("initial state has wrong length"));
    }
    if !all_finite(&u0) {
        return Err(SboedError::numeric("non-finite initial state"));
    }
    let dt = cfg.dt();
    let mut times = Vec::with_capacity(cfg.n_steps + 1);
    let mut states = Vec::with_capacity(cfg.n_steps + 1);
    times.push(0.0);
    states.push(u0);
    for k in 1..=cfg.n_steps {
        let rhs = ops.apply_step_b(states.last().unwrap(), false);
        let next = ops.step_solve(&rhs, false).map_err(|e| {
            SboedError::numeric(format!("forward step {k} failed: {e}"))
        })?;
        times.push(k as f64 * dt);
        states.push(next);
    }
    Ok(StateTrajectory { times, states })
}

/// Solve the forward problem from the parameter field `m`.
pub fn solve_forward<S: Scalar>(
    grid: &Grid,
    ops: &StepOperators<S>,
    cfg: &PdeConfig,
    m: &[S],
) -> Result<StateTrajectory<S>> {
    solve_linear_evolution(ops, cfg, initial_state(grid, cfg, m))
}

/// Solve the sensitivity problem: the trajectory of `(nabla_m u)(t) mhat`.
pub fn solve_sensitivity<S: Scalar>(
    grid: &Grid,
    ops: &StepOperators<S>,
    cfg: &PdeConfig,
    m: &[S],
    mhat: &[S],
) -> Result<StateTrajectory<S>> {
    solve_linear_evolution(ops, cfg, sensitivity_initial(grid, cfg, m, mhat))
}

/// Integrate the adjoint equation backward from the latest source to t = 0,
/// injecting each source at its step, and return p(0).
///
/// `sources` pairs simulation step indices (1-based, on the time grid) with
/// nodal source fields. The result is the exact transpose of the forward
/// propagation: p(0) = sum_k (P^k)^T s_k.
pub fn solve_adjoint<S: Scalar>(
    ops: &StepOperators<S>,
    cfg: &PdeConfig,
    sources: &[(usize, ScalarField<S>)],
) -> Result<ScalarField<S>> {
    let n = ops.n_nodes();
    for (k, s) in sources {
        if *k == 0 || *k > cfg.n_steps {
            return Err(SboedError::contract(format!(
                "adjoint source step {k} off the simulation grid (1..={})",
                cfg.n_steps
            )));
        }
        if s.len() != n {
            return Err(SboedError::contract("adjoint source has wrong length"));
        }
        if !all_finite(s) {
            return Err(SboedError::numeric("non-finite adjoint source"));
        }
    }
    let mut p = vec![S::zero(); n];
    if sources.is_empty() {
        return Ok(p);
    }
    let k_max = sources.iter().map(|(k, _)| *k).max().unwrap();
    for k in (1..=k_max).rev() {
        for (ks, s) in sources {
            if *ks == k {
                for (pi, &si) in p.iter_mut().zip(s.iter()) {
                    *pi += si;
                }
            }
        }
        let z = ops.step_solve(&p, true).map_err(|e| {
            SboedError::numeric(format!("adjoint step {k} failed: {e}"))
        })?;
        p = ops.apply_step_b(&z, true);
    }
    Ok(p)
}

/// Apply the transpose of the time-t_k state Jacobian to a nodal field `v`:
/// one adjoint solve followed by the initial-condition chain rule.
pub fn jacobian_transpose_apply<S: Scalar>(
    grid: &Grid,
    ops: &StepOperators<S>,
    cfg: &PdeConfig,
    m: &[S],
    v: &[S],
    step_k: usize,
) -> Result<ScalarField<S>> {
    let p0 = solve_adjoint(ops, cfg, &[(step_k, v.to_vec())])?;
    Ok(apply_initial_chain(grid, cfg, m, &p0))
}

/// Multiply by the transpose of d u(0) / d m: `2 m .*` for the squared
/// initial condition, identity for the linear variant.
pub fn apply_initial_chain<S: Scalar>(
    grid: &Grid,
    cfg: &PdeConfig,
    m: &[S],
    p0: &[S],
) -> Vec<S> {
    let two = c::<S>(2.0);
    let mut out: Vec<S> = match cfg.initial_condition {
        InitialCondition::Squared => m
            .iter()
            .zip(p0.iter())
            .map(|(&mi, &pi)| two * mi * pi)
            .collect(),
        InitialCondition::Linear => p0.to_vec(),
    };
    if grid.has_obstacles() {
        for idx in 0..grid.n_nodes() {
            if grid.is_masked(idx) {
                out[idx] = S::zero();
            }
        }
    }
    out
}
