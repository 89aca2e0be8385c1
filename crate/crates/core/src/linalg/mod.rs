//! Matrix-free linear algebra: conjugate gradients, a randomized double-pass
//! generalized eigensolver, truncated SVD and dense symmetric
//! eigendecomposition for the reduced problems.

pub mod cg;
pub mod dense;
pub mod mat;
pub mod randomized;

pub use cg::{cg_solve, cg_solve_preconditioned, cg_solve_strict, min_rayleigh_probe, CgSolution};
pub use dense::{dense_sym_eig, truncated_svd};
pub use mat::DenseMat;
pub use randomized::randomized_gevp;

use crate::error::Result;
use crate::scalar::Scalar;

/// Matrix-free action y = A x on real vectors.
///
/// Implementations must be deterministic for fixed inputs and reentrant.
pub trait LinearMap<S: Scalar> {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn apply(&self, x: &[S]) -> Result<Vec<S>>;
}

/// Adapter turning a closure into a [`LinearMap`].
pub struct OpFn<S, F>
where
    F: Fn(&[S]) -> Result<Vec<S>>,
{
    pub dim_in: usize,
    pub dim_out: usize,
    pub f: F,
    _marker: std::marker::PhantomData<S>,
}

impl<S, F> OpFn<S, F>
where
    F: Fn(&[S]) -> Result<Vec<S>>,
{
    pub fn new(dim_in: usize, dim_out: usize, f: F) -> Self {
        OpFn {
            dim_in,
            dim_out,
            f,
            _marker: std::marker::PhantomData,
        }
    }

    pub fn square(dim: usize, f: F) -> Self {
        Self::new(dim, dim, f)
    }
}

impl<S: Scalar, F> LinearMap<S> for OpFn<S, F>
where
    F: Fn(&[S]) -> Result<Vec<S>>,
{
    fn dim_in(&self) -> usize {
        self.dim_in
    }
    fn dim_out(&self) -> usize {
        self.dim_out
    }
    fn apply(&self, x: &[S]) -> Result<Vec<S>> {
        (self.f)(x)
    }
}

impl<S: Scalar> LinearMap<S> for DenseMat<S> {
    fn dim_in(&self) -> usize {
        self.cols
    }
    fn dim_out(&self) -> usize {
        self.rows
    }
    fn apply(&self, x: &[S]) -> Result<Vec<S>> {
        Ok(self.matvec(x))
    }
}

/// Actions of an SPD covariance C needed by the generalized eigensolver:
/// the covariance itself, a factor F with C = F F^T, its transpose, and the
/// precision C^{-1}.
pub trait CovarianceOps<S: Scalar> {
    fn dim(&self) -> usize;
    fn apply_cov(&self, x: &[S]) -> Result<Vec<S>>;
    fn apply_factor(&self, x: &[S]) -> Result<Vec<S>>;
    fn apply_factor_t(&self, x: &[S]) -> Result<Vec<S>>;
    fn apply_precision(&self, x: &[S]) -> Result<Vec<S>>;
}

/// Generalized eigenpairs H w = lambda B w, values sorted descending.
///
/// When a metric B is present the vectors satisfy w_i^T B w_j = delta_ij;
/// otherwise they are Euclidean-orthonormal.
#[derive(Debug, Clone)]
pub struct EigPairs<S> {
    pub values: Vec<S>,
    /// One column per eigenvalue.
    pub vectors: DenseMat<S>,
    /// Whether vectors are orthonormal in a B-metric rather than Euclidean.
    pub metric_orthonormal: bool,
    /// Set when the sample matrix lost rank and fewer pairs are returned
    /// than requested.
    pub rank_deficient: bool,
}

/// Truncated SVD triplet X ~ left * diag(singular) * right^T.
#[derive(Debug, Clone)]
pub struct SvdTriplet<S> {
    pub left: DenseMat<S>,
    pub singular: Vec<S>,
    pub right: DenseMat<S>,
}

/// Flip signs so the first entry of each column with magnitude above a tiny
/// floor is positive. Makes eigen/singular vectors reproducible across runs
/// and ties the ordering of equal values to a stable convention.
pub(crate) fn apply_sign_convention<S: Scalar>(columns: &mut DenseMat<S>) -> Vec<bool> {
    let mut flipped = vec![false; columns.cols];
    for j in 0..columns.cols {
        let mut sign = S::zero();
        for i in 0..columns.rows {
            let v = columns.at(i, j);
            if v.abs() > S::of(1e-300) {
                sign = if v > S::zero() { S::one() } else { -S::one() };
                break;
            }
        }
        if sign < S::zero() {
            flipped[j] = true;
            for i in 0..columns.rows {
                *columns.at_mut(i, j) = -columns.at(i, j);
            }
        }
    }
    flipped
}
