//! Spatial operators and the theta-scheme step solver.
//!
//! One face list drives everything: diffusion and advection applications,
//! their exact transposes (the discrete adjoint), and the per-step linear
//! systems. The step matrix `A = M + theta dt K` is nonsymmetric whenever
//! advection is present, so steps are solved by conjugate gradients on the
//! normal equations `A^T A x = A^T b`.

use crate::error::{Result, SboedError};
use crate::grid::Grid;
use crate::linalg::{cg_solve_preconditioned, OpFn};
use crate::scalar::{c, Scalar};

use super::{PdeConfig, VelocityField};

/// One interior face between two control volumes.
#[derive(Debug, Clone, Copy)]
struct Face<S> {
    a: u32,
    b: u32,
    /// Diffusive coupling kappa * face_len / dist.
    diff: S,
    /// Advective volume flux from a toward b.
    flux: S,
}

pub struct StepOperators<S> {
    n: usize,
    faces: Vec<Face<S>>,
    /// Lumped mass (quadrature weights); zero on masked nodes.
    pub mass: Vec<S>,
    masked: Vec<bool>,
    theta: S,
    dt: S,
    upwind: bool,
    rel_tol: S,
    max_iter: usize,
    /// Jacobi diagonal of A^T A for preconditioning the normal equations.
    normal_diag: Vec<S>,
}

impl<S: Scalar> StepOperators<S> {
    pub fn new(grid: &Grid, vel: &VelocityField<S>, cfg: &PdeConfig) -> Result<Self> {
        cfg.validate()?;
        let n = grid.n_nodes();
        let (nx, ny) = (grid.nx, grid.ny);
        let (hx, hy) = (grid.hx(), grid.hy());
        let mut faces = Vec::with_capacity(2 * n);
        for j in 0..ny {
            let len_x = hy * if j == 0 || j == ny - 1 { 0.5 } else { 1.0 };
            for i in 0..nx - 1 {
                let a = grid.idx(i, j);
                let b = grid.idx(i + 1, j);
                if grid.is_masked(a) || grid.is_masked(b) {
                    continue;
                }
                faces.push(Face {
                    a: a as u32,
                    b: b as u32,
                    diff: c::<S>(cfg.kappa * len_x / hx),
                    flux: vel.flux_x[j * (nx - 1) + i],
                });
            }
        }
        for j in 0..ny - 1 {
            for i in 0..nx {
                let a = grid.idx(i, j);
                let b = grid.idx(i, j + 1);
                if grid.is_masked(a) || grid.is_masked(b) {
                    continue;
                }
                let len_y = hx * if i == 0 || i == nx - 1 { 0.5 } else { 1.0 };
                faces.push(Face {
                    a: a as u32,
                    b: b as u32,
                    diff: c::<S>(cfg.kappa * len_y / hy),
                    flux: vel.flux_y[j * nx + i],
                });
            }
        }
        let masked: Vec<bool> = (0..n).map(|idx| grid.is_masked(idx)).collect();
        let mut ops = StepOperators {
            n,
            faces,
            mass: grid.weights(),
            masked,
            theta: c::<S>(cfg.theta),
            dt: c::<S>(cfg.dt()),
            upwind: cfg.upwind,
            rel_tol: c::<S>(cfg.solver_rel_tol),
            max_iter: cfg.solver_max_iter,
            normal_diag: Vec::new(),
        };
        ops.normal_diag = ops.compute_normal_diag();
        Ok(ops)
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    /// K x with K = K_diff + K_adv (or its exact transpose): the net outflow
    /// of each control volume, so that M du/dt + K u = 0.
    pub fn apply_k(&self, x: &[S], transpose: bool) -> Vec<S> {
        let mut y = vec![S::zero(); self.n];
        let half = c::<S>(0.5);
        for f in &self.faces {
            let (ia, ib) = (f.a as usize, f.b as usize);
            // Diffusion is symmetric.
            let d = f.diff * (x[ia] - x[ib]);
            y[ia] += d;
            y[ib] -= d;
            if f.flux != S::zero() {
                if !transpose {
                    let uf = if self.upwind {
                        if f.flux > S::zero() {
                            x[ia]
                        } else {
                            x[ib]
                        }
                    } else {
                        half * (x[ia] + x[ib])
                    };
                    let adv = f.flux * uf;
                    y[ia] += adv;
                    y[ib] -= adv;
                } else {
                    let g = f.flux * (x[ia] - x[ib]);
                    if self.upwind {
                        if f.flux > S::zero() {
                            y[ia] += g;
                        } else {
                            y[ib] += g;
                        }
                    } else {
                        y[ia] += half * g;
                        y[ib] += half * g;
                    }
                }
            }
        }
        for (i, &m) in self.masked.iter().enumerate() {
            if m {
                y[i] = S::zero();
            }
        }
        y
    }

    /// A x = M x + theta dt K x; identity on masked nodes.
    pub fn apply_step_a(&self, x: &[S], transpose: bool) -> Vec<S> {
        let scale = self.theta * self.dt;
        let mut y = self.apply_k(x, transpose);
        for i in 0..self.n {
            y[i] = if self.masked[i] {
                x[i]
            } else {
                self.mass[i] * x[i] + scale * y[i]
            };
        }
        y
    }

    /// B x = M x - (1 - theta) dt K x; identity on masked nodes.
    pub fn apply_step_b(&self, x: &[S], transpose: bool) -> Vec<S> {
        let scale = (S::one() - self.theta) * self.dt;
        let mut y = self.apply_k(x, transpose);
        for i in 0..self.n {
            y[i] = if self.masked[i] {
                x[i]
            } else {
                self.mass[i] * x[i] - scale * y[i]
            };
        }
        y
    }

    /// Exact diagonal of A^T A, assembled from the face stencil.
    fn compute_normal_diag(&self) -> Vec<S> {
        // Column j of A has entries: diag mass + theta dt K column. Assemble
        // columns of A sparsely, then sum squares.
        let scale = self.theta * self.dt;
        let half = c::<S>(0.5);
        // diag(A) and off-diagonal contributions per column accumulated as
        // sum of squares directly.
        let mut diag_a = vec![S::zero(); self.n];
        let mut sumsq_off = vec![S::zero(); self.n];
        for i in 0..self.n {
            diag_a[i] = if self.masked[i] { S::one() } else { self.mass[i] };
        }
        for f in &self.faces {
            let (ia, ib) = (f.a as usize, f.b as usize);
            // K[a][a] += diff, K[b][b] += diff, K[a][b] -= diff, K[b][a] -= diff
            let mut kaa = f.diff;
            let mut kbb = f.diff;
            let mut kab = -f.diff;
            let mut kba = -f.diff;
            if f.flux != S::zero() {
                if self.upwind {
                    if f.flux > S::zero() {
                        kaa += f.flux;
                        kba -= f.flux;
                    } else {
                        kab += f.flux;
                        kbb -= f.flux;
                    }
                } else {
                    kaa += half * f.flux;
                    kab += half * f.flux;
                    kba -= half * f.flux;
                    kbb -= half * f.flux;
                }
            }
            diag_a[ia] += scale * kaa;
            diag_a[ib] += scale * kbb;
            sumsq_off[ib] += (scale * kab) * (scale * kab);
            sumsq_off[ia] += (scale * kba) * (scale * kba);
        }
        (0..self.n)
            .map(|i| {
                let d = diag_a[i] * diag_a[i] + sumsq_off[i];
                if d > S::zero() {
                    d
                } else {
                    S::one()
                }
            })
            .collect()
    }

    /// Solve A x = rhs (or A^T x = rhs) via CG on the normal equations.
    pub fn step_solve(&self, rhs: &[S], transpose: bool) -> Result<Vec<S>> {
        if rhs.len() != self.n {
            return Err(SboedError::contract("step_solve: rhs length mismatch"));
        }
        let atb = self.apply_step_a(rhs, !transpose);
        let normal = OpFn::square(self.n, |x: &[S]| {
            let ax = self.apply_step_a(x, transpose);
            Ok(self.apply_step_a(&ax, !transpose))
        });
        let sol = cg_solve_preconditioned(
            &normal,
            &atb,
            Some(&self.normal_diag),
            self.rel_tol,
            self.max_iter,
        )?;
        if !sol.converged && sol.rel_residual > c::<S>(1e-8) {
            return Err(SboedError::numeric(format!(
                "theta-scheme step solve stalled at relative residual {}",
                sol.rel_residual
            )));
        }
        Ok(sol.x)
    }

    /// Total quadrature-weighted mass of a field.
    pub fn total_mass(&self, u: &[S]) -> S {
        self.mass.iter().zip(u.iter()).map(|(&w, &x)| w * x).sum()
    }
}
