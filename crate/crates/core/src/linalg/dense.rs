//! Dense symmetric eigendecomposition and truncated SVD.
//!
//! Backed by nalgebra's QR-based factorizations, computed in f64 regardless
//! of the scalar instantiation, then converted back. These serve the reduced
//! (small, dense) problems; the full-space paths are matrix-free.

use nalgebra::DMatrix;

use crate::error::{Result, SboedError};
use crate::scalar::{c, Scalar};

use super::mat::DenseMat;
use super::{apply_sign_convention, EigPairs, SvdTriplet};

fn to_f64_matrix<S: Scalar>(m: &DenseMat<S>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows, m.cols, |i, j| m.at(i, j).as_f64())
}

/// Full spectrum of a dense symmetric matrix, descending, with the
/// reconstruction guarantee ||S - V L V^T||_F <= 1e-8 ||S||_F.
pub fn dense_sym_eig<S: Scalar>(s: &DenseMat<S>) -> Result<EigPairs<S>> {
    if s.rows != s.cols {
        return Err(SboedError::contract("dense_sym_eig: matrix not square"));
    }
    let n = s.rows;
    let scale = s
        .data
        .iter()
        .fold(S::zero(), |acc, &v| acc.max(v.abs()))
        .as_f64()
        .max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let asym = (s.at(i, j) - s.at(j, i)).abs().as_f64();
            if asym > 1e-10 * scale {
                return Err(SboedError::contract(format!(
                    "dense_sym_eig: asymmetry {asym:.3e} at ({i},{j}) beyond tolerance"
                )));
            }
        }
    }
    // Symmetrize before factorizing so roundoff asymmetry cannot leak through.
    let mut a = to_f64_matrix(s);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut values = Vec::with_capacity(n);
    let mut vectors = DenseMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        values.push(c::<S>(eig.eigenvalues[k]));
        for i in 0..n {
            *vectors.at_mut(i, col) = c::<S>(eig.eigenvectors[(i, k)]);
        }
    }
    apply_sign_convention(&mut vectors);
    Ok(EigPairs {
        values,
        vectors,
        metric_orthonormal: false,
        rank_deficient: false,
    })
}

/// Truncated SVD X ~ Psi Sigma Phi^T with `rank` retained triplets.
pub fn truncated_svd<S: Scalar>(x: &DenseMat<S>, rank: usize) -> Result<SvdTriplet<S>> {
    let min_dim = x.rows.min(x.cols);
    if rank == 0 || rank > min_dim {
        return Err(SboedError::contract(format!(
            "truncated_svd: rank {rank} out of range for a {}x{} matrix",
            x.rows, x.cols
        )));
    }
    let a = to_f64_matrix(x);
    let svd = a.svd(true, true);
    let u = svd.u.as_ref().expect("svd requested u");
    let vt = svd.v_t.as_ref().expect("svd requested v_t");
    // nalgebra does not guarantee ordering; sort descending explicitly.
    let mut order: Vec<usize> = (0..min_dim).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut left = DenseMat::zeros(x.rows, rank);
    let mut right = DenseMat::zeros(x.cols, rank);
    let mut singular = Vec::with_capacity(rank);
    for (col, &k) in order.iter().take(rank).enumerate() {
        singular.push(c::<S>(svd.singular_values[k]));
        for i in 0..x.rows {
            *left.at_mut(i, col) = c::<S>(u[(i, k)]);
        }
        for j in 0..x.cols {
            *right.at_mut(j, col) = c::<S>(vt[(k, j)]);
        }
    }
    // Keep X ~ U S V^T intact: flip the matching right column whenever a
    // left column is flipped by the sign convention.
    let flipped = apply_sign_convention(&mut left);
    for (j, &f) in flipped.iter().enumerate() {
        if f {
            for i in 0..x.cols {
                *right.at_mut(i, j) = -right.at(i, j);
            }
        }
    }
    Ok(SvdTriplet {
        left,
        singular,
        right,
    })
}

/// Dense Cholesky-backed SPD solve, for small systems (oracles, ridge
/// solves, L-BFGS seeds). Errors if the matrix is not positive definite.
pub fn solve_spd<S: Scalar>(a: &DenseMat<S>, b: &[S]) -> Result<Vec<S>> {
    if a.rows != a.cols || a.rows != b.len() {
        return Err(SboedError::contract("solve_spd: dimension mismatch"));
    }
    let m = to_f64_matrix(a);
    let chol = m
        .cholesky()
        .ok_or_else(|| SboedError::numeric("solve_spd: matrix not positive definite"))?;
    let rhs = nalgebra::DVector::from_iterator(b.len(), b.iter().map(|v| v.as_f64()));
    let x = chol.solve(&rhs);
    Ok(x.iter().map(|&v| c::<S>(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_eig() {
        let s = DenseMat::from_rows(vec![
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let eig = dense_sym_eig(&s).unwrap();
        assert_eq!(eig.values, vec![3.0, 1.0, 0.0]);
    }

    #[test]
    fn zero_matrix_eig() {
        let s: DenseMat<f64> = DenseMat::zeros(4, 4);
        let eig = dense_sym_eig(&s).unwrap();
        assert!(eig.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn asymmetric_input_rejected() {
        let mut s: DenseMat<f64> = DenseMat::zeros(3, 3);
        *s.at_mut(0, 1) = 1.0;
        assert!(dense_sym_eig(&s).is_err());
    }

    #[test]
    fn rank_one_svd() {
        let u = vec![1.0, 2.0, -1.0];
        let v = vec![0.5, 1.0, 0.0, -2.0];
        let mut x = DenseMat::zeros(3, 4);
        for i in 0..3 {
            for j in 0..4 {
                *x.at_mut(i, j) = u[i] * v[j];
            }
        }
        let svd = truncated_svd(&x, 1).unwrap();
        let unorm: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
        let vnorm: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!((svd.singular[0] - unorm * vnorm).abs() < 1e-12);
        // residual is zero for an exactly rank-1 matrix
        let mut resid: f64 = 0.0;
        for i in 0..3 {
            for j in 0..4 {
                let approx = svd.left.at(i, 0) * svd.singular[0] * svd.right.at(j, 0);
                resid += (x.at(i, j) - approx).powi(2);
            }
        }
        assert!(resid.sqrt() < 1e-12);
    }

    #[test]
    fn identity_svd() {
        let mut x: DenseMat<f64> = DenseMat::zeros(5, 5);
        for i in 0..5 {
            *x.at_mut(i, i) = 1.0;
        }
        let svd = truncated_svd(&x, 5).unwrap();
        for s in svd.singular {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_rank_out_of_range() {
        let x: DenseMat<f64> = DenseMat::zeros(3, 4);
        assert!(truncated_svd(&x, 4).is_err());
    }
}
