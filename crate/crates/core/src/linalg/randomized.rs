//! Randomized double-pass generalized eigensolver.
//!
//! Solves H w = lambda C^{-1} w for symmetric positive semidefinite H and SPD
//! covariance C, returning the top `rank` pairs with W^T C^{-1} W = I.
//!
//! The generalized problem is whitened through a covariance factor C = F F^T:
//! eigenpairs (lambda, z) of the symmetric operator F^T H F map to
//! w = F z. Gaussian test vectors sample the range (first pass), a small
//! projected matrix is formed (second pass) and decomposed densely, so H is
//! applied exactly 2 (rank + oversample) times.

use crate::error::{Result, SboedError};
use crate::rng::{standard_normal_vec, substream_indexed};
use crate::scalar::{c, Scalar};

use super::mat::{all_finite, axpy, dot, norm2, DenseMat};
use super::{dense_sym_eig, CovarianceOps, EigPairs, LinearMap};

/// Default oversampling used by callers that do not override it.
pub const DEFAULT_OVERSAMPLE: usize = 5;

pub fn randomized_gevp<S: Scalar>(
    h: &dyn LinearMap<S>,
    prior_cov: &dyn CovarianceOps<S>,
    rank: usize,
    oversample: usize,
    rng_seed: u64,
) -> Result<EigPairs<S>> {
    let n = prior_cov.dim();
    if h.dim_in() != n || h.dim_out() != n {
        return Err(SboedError::contract(
            "randomized_gevp: operator and covariance dimensions disagree",
        ));
    }
    if rank == 0 {
        return Err(SboedError::contract("randomized_gevp: rank must be >= 1"));
    }
    if rank + oversample > n {
        return Err(SboedError::contract(format!(
            "randomized_gevp: rank + oversample = {} exceeds dimension {n}",
            rank + oversample
        )));
    }
    let l = rank + oversample;

    let whitened = |x: &[S]| -> Result<Vec<S>> {
        let fx = prior_cov.apply_factor(x)?;
        let hfx = h.apply(&fx)?;
        if !all_finite(&hfx) {
            return Err(SboedError::numeric(
                "randomized_gevp: H application produced non-finite values",
            ));
        }
        prior_cov.apply_factor_t(&hfx)
    };

    // First pass: sample the range of the whitened operator.
    let mut rng = substream_indexed(rng_seed, "randomized-gevp", 0);
    let mut y: Vec<Vec<S>> = Vec::with_capacity(l);
    for _ in 0..l {
        let omega: Vec<S> = standard_normal_vec(&mut rng, n);
        y.push(whitened(&omega)?);
    }

    // Orthonormalize; replace collapsed directions with fresh random vectors
    // (their Ritz values land at ~0, which is the right answer for a
    // rank-deficient sample matrix).
    let scale = y.iter().map(|col| norm2(col)).fold(S::zero(), S::max);
    let drop_tol = if scale > S::zero() {
        c::<S>(1e-12) * scale
    } else {
        S::zero()
    };
    let mut q: Vec<Vec<S>> = Vec::with_capacity(l);
    let mut rank_deficient = false;
    for mut col in y {
        for _pass in 0..2 {
            for qi in &q {
                let proj = dot(qi, &col);
                axpy(-proj, qi, &mut col);
            }
        }
        let mut nrm = norm2(&col);
        if nrm <= drop_tol {
            rank_deficient = true;
            // Deterministic replacement drawn from the same stream.
            loop {
                col = standard_normal_vec(&mut rng, n);
                for _pass in 0..2 {
                    for qi in &q {
                        let proj = dot(qi, &col);
                        axpy(-proj, qi, &mut col);
                    }
                }
                nrm = norm2(&col);
                if nrm > c::<S>(1e-8) * c::<S>((n as f64).sqrt()) {
                    break;
                }
            }
        }
        let inv = S::one() / nrm;
        for v in &mut col {
            *v *= inv;
        }
        q.push(col);
    }

    // Second pass: project the whitened operator onto span(Q).
    let mut t = DenseMat::zeros(l, l);
    for (j, qj) in q.iter().enumerate() {
        let hq = whitened(qj)?;
        for (i, qi) in q.iter().enumerate() {
            *t.at_mut(i, j) = dot(qi, &hq);
        }
    }
    for i in 0..l {
        for j in (i + 1)..l {
            let v = (t.at(i, j) + t.at(j, i)) * c::<S>(0.5);
            *t.at_mut(i, j) = v;
            *t.at_mut(j, i) = v;
        }
    }

    let small = dense_sym_eig(&t)?;
    let keep = rank.min(l);
    let mut values = Vec::with_capacity(keep);
    let mut vectors = DenseMat::zeros(n, keep);
    for col in 0..keep {
        values.push(small.values[col]);
        // z = Q * u_col in the whitened coordinates, then w = F z.
        let mut z = vec![S::zero(); n];
        for (jq, qj) in q.iter().enumerate() {
            let coeff = small.vectors.at(jq, col);
            axpy(coeff, qj, &mut z);
        }
        let w = prior_cov.apply_factor(&z)?;
        for i in 0..n {
            *vectors.at_mut(i, col) = w[i];
        }
    }
    super::apply_sign_convention(&mut vectors);

    Ok(EigPairs {
        values,
        vectors,
        metric_orthonormal: true,
        rank_deficient,
    })
}
