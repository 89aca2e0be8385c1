//! Conjugate gradients on symmetric positive definite operators.

use crate::error::{Result, SboedError};
use crate::scalar::{c, Scalar};

use super::mat::{all_finite, axpy, dot, norm2};
use super::LinearMap;

/// Outcome of a CG solve.
#[derive(Debug, Clone)]
pub struct CgSolution<S> {
    pub x: Vec<S>,
    pub converged: bool,
    pub iterations: usize,
    /// Relative residual ||Ax - b|| / ||b|| at exit.
    pub rel_residual: S,
    /// ||r|| after each iteration, starting from ||b||.
    pub residual_history: Vec<S>,
    /// Energy functional 0.5 x^T A x - b^T x after each iteration relative
    /// to the zero start; strictly decreasing for exact CG on SPD systems.
    pub energy_history: Vec<S>,
}

/// Solve A x = b for SPD `a` to relative residual `rel_tol`.
///
/// Returns the best iterate with `converged = false` when `max_iter` is
/// exhausted. Non-finite values anywhere are a numeric failure; a dimension
/// mismatch is a contract error.
pub fn cg_solve<S: Scalar>(
    a: &dyn LinearMap<S>,
    b: &[S],
    rel_tol: S,
    max_iter: usize,
) -> Result<CgSolution<S>> {
    cg_solve_preconditioned(a, b, None, rel_tol, max_iter)
}

/// CG with an optional diagonal (Jacobi) preconditioner.
pub fn cg_solve_preconditioned<S: Scalar>(
    a: &dyn LinearMap<S>,
    b: &[S],
    precond_diag: Option<&[S]>,
    rel_tol: S,
    max_iter: usize,
) -> Result<CgSolution<S>> {
    let n = b.len();
    if a.dim_in() != n || a.dim_out() != n {
        return Err(SboedError::contract(format!(
            "cg_solve: operator is {}x{} but rhs has length {}",
            a.dim_out(),
            a.dim_in(),
            n
        )));
    }
    if rel_tol <= S::zero() {
        return Err(SboedError::contract("cg_solve: rel_tol must be positive"));
    }
    if !all_finite(b) {
        return Err(SboedError::numeric("cg_solve: non-finite right-hand side"));
    }

    let b_norm = norm2(b);
    if b_norm == S::zero() {
        return Ok(CgSolution {
            x: vec![S::zero(); n],
            converged: true,
            iterations: 0,
            rel_residual: S::zero(),
            residual_history: vec![S::zero()],
            energy_history: vec![S::zero()],
        });
    }

    let apply_m_inv = |r: &[S]| -> Vec<S> {
        match precond_diag {
            Some(d) => r.iter().zip(d.iter()).map(|(&ri, &di)| ri / di).collect(),
            None => r.to_vec(),
        }
    };

    let mut x = vec![S::zero(); n];
    let mut r = b.to_vec();
    let mut z = apply_m_inv(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let tol_abs = rel_tol * b_norm;

    let mut best_x = x.clone();
    let mut best_res = b_norm;
    let mut iterations = 0;
    let mut residual_history = vec![b_norm];
    let mut energy = S::zero();
    let mut energy_history = vec![S::zero()];

    for iter in 0..max_iter {
        let ap = a.apply(&p)?;
        if !all_finite(&ap) {
            return Err(SboedError::numeric(
                "cg_solve: operator produced non-finite values",
            ));
        }
        let pap = dot(&p, &ap);
        if pap <= S::zero() {
            // Not SPD (or severe roundoff): keep the best iterate and stop.
            return Ok(CgSolution {
                x: best_x,
                converged: false,
                iterations: iter,
                rel_residual: best_res / b_norm,
                residual_history,
                energy_history,
            });
        }
        let alpha = rz / pap;
        energy -= rz * rz / (pap + pap);
        energy_history.push(energy);
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        iterations = iter + 1;

        let res = norm2(&r);
        if !res.is_finite() {
            return Err(SboedError::numeric("cg_solve: residual went non-finite"));
        }
        residual_history.push(res);
        if res < best_res {
            best_res = res;
            best_x.copy_from_slice(&x);
        }
        if res <= tol_abs {
            return Ok(CgSolution {
                x,
                converged: true,
                iterations,
                rel_residual: res / b_norm,
                residual_history,
                energy_history,
            });
        }
        z = apply_m_inv(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        for (pi, &zi) in p.iter_mut().zip(z.iter()) {
            *pi = zi + beta * *pi;
        }
        rz = rz_new;
    }

    Ok(CgSolution {
        x: best_x,
        converged: false,
        iterations,
        rel_residual: best_res / b_norm,
        residual_history,
        energy_history,
    })
}

/// Smallest Ritz value over `probes` random CG/Lanczos-style probes of the
/// Rayleigh quotient x^T A x / x^T x. Cheap SPD sanity check.
pub fn min_rayleigh_probe<S: Scalar>(
    a: &dyn LinearMap<S>,
    probes: usize,
    seed: u64,
) -> Result<S> {
    let n = a.dim_in();
    let mut rng = crate::rng::substream(seed, "rayleigh-probe");
    let mut min_q = S::infinity();
    for _ in 0..probes {
        let x: Vec<S> = crate::rng::standard_normal_vec(&mut rng, n);
        let ax = a.apply(&x)?;
        let q = dot(&x, &ax) / dot(&x, &x);
        if q < min_q {
            min_q = q;
        }
    }
    Ok(min_q)
}

/// Convenience wrapper asserting convergence, used where a failed solve is a
/// numeric failure for the caller.
pub fn cg_solve_strict<S: Scalar>(
    a: &dyn LinearMap<S>,
    b: &[S],
    rel_tol: S,
    max_iter: usize,
    what: &str,
) -> Result<Vec<S>> {
    let sol = cg_solve(a, b, rel_tol, max_iter)?;
    if !sol.converged && sol.rel_residual > c::<S>(1e-8) {
        return Err(SboedError::numeric(format!(
            "cg_solve for {what} stalled at relative residual {} after {} iterations",
            sol.rel_residual, sol.iterations
        )));
    }
    Ok(sol.x)
}
