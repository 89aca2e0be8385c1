//! Shared test oracles: hand-rolled dense factorizations kept deliberately
//! independent of the library's nalgebra-backed kernels, plus helpers for
//! building random SPD problems.

#![allow(dead_code)]

use rand::Rng;
use sboed_core::linalg::{CovarianceOps, DenseMat};
use sboed_core::Result;

pub type Mat = Vec<Vec<f64>>;

pub fn mat_zeros(n: usize, m: usize) -> Mat {
    vec![vec![0.0; m]; n]
}

pub fn mat_vec(a: &Mat, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x.iter()).map(|(&r, &v)| r * v).sum())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = mat_zeros(n, m);
    for i in 0..n {
        for p in 0..k {
            let aip = a[i][p];
            if aip == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aip * b[p][j];
            }
        }
    }
    out
}

pub fn mat_t(a: &Mat) -> Mat {
    let (n, m) = (a.len(), a[0].len());
    let mut out = mat_zeros(m, n);
    for i in 0..n {
        for j in 0..m {
            out[j][i] = a[i][j];
        }
    }
    out
}

/// Cyclic Jacobi rotations; returns eigenvalues descending with matching
/// eigenvector columns. Robust for the small dense matrices used as oracles.
pub fn jacobi_eigen(a_in: &Mat) -> (Vec<f64>, Mat) {
    let n = a_in.len();
    let mut a = a_in.clone();
    let mut v = mat_zeros(n, n);
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frob(&a)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cth = 1.0 / (t * t + 1.0).sqrt();
                let sth = t * cth;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cth * akp - sth * akq;
                    a[k][q] = sth * akp + cth * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cth * apk - sth * aqk;
                    a[q][k] = sth * apk + cth * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = cth * vkp - sth * vkq;
                    v[k][q] = sth * vkp + cth * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| a[k][k]).collect();
    let mut vectors = mat_zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i][col] = v[i][k];
        }
    }
    (values, vectors)
}

fn frob(a: &Mat) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .map(|&x| x * x)
        .sum::<f64>()
        .sqrt()
}

/// Lower-triangular Cholesky factor, L L^T = A.
pub fn cholesky(a: &Mat) -> Mat {
    let n = a.len();
    let mut l = mat_zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                assert!(s > 0.0, "oracle cholesky: matrix not SPD");
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    l
}

pub fn forward_sub(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

pub fn back_sub_lt(l: &Mat, b: &[f64]) -> Vec<f64> {
    // solves L^T x = b for lower-triangular L
    let n = l.len();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

/// LU solve with partial pivoting (Doolittle), the direct-solve oracle.
pub fn lu_solve(a_in: &Mat, b: &[f64]) -> Vec<f64> {
    let n = a_in.len();
    let mut a = a_in.clone();
    let mut x = b.to_vec();
    let mut piv: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut pmax = k;
        for i in (k + 1)..n {
            if a[i][k].abs() > a[pmax][k].abs() {
                pmax = i;
            }
        }
        a.swap(k, pmax);
        piv.swap(k, pmax);
        x.swap(k, pmax);
        assert!(a[k][k].abs() > 1e-300, "oracle lu: singular matrix");
        for i in (k + 1)..n {
            let f = a[i][k] / a[k][k];
            a[i][k] = f;
            for j in (k + 1)..n {
                a[i][j] -= f * a[k][j];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    x
}

/// Dense generalized eigenvalues of H w = lambda C^{-1} w via Cholesky
/// whitening of C and the Jacobi oracle: eig(L^T H L) with C = L L^T.
pub fn dense_gevp_values(h: &Mat, c_mat: &Mat) -> Vec<f64> {
    let n = h.len();
    let l = cholesky(c_mat);
    // Ht = L^T H L
    let mut hl = mat_zeros(n, n);
    for j in 0..n {
        let lcol: Vec<f64> = (0..n).map(|i| l[i][j]).collect();
        let hlcol = mat_vec(h, &lcol);
        for i in 0..n {
            hl[i][j] = hlcol[i];
        }
    }
    let mut ht = mat_zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += l[k][i] * hl[k][j];
            }
            ht[i][j] = s;
        }
    }
    // enforce exact symmetry before the Jacobi sweep
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (ht[i][j] + ht[j][i]);
            ht[i][j] = v;
            ht[j][i] = v;
        }
    }
    let (values, _) = jacobi_eigen(&ht);
    values
}

/// log det(I + Lt^T H Lt) / 2 evaluated densely: the D-optimality reference.
pub fn dense_dopt(h: &Mat, c_mat: &Mat) -> f64 {
    dense_gevp_values(h, c_mat)
        .into_iter()
        .map(|l| (1.0 + l.max(0.0)).ln())
        .sum::<f64>()
        / 2.0
}

/// Random SPD matrix A = B^T B + eps I.
pub fn random_spd(n: usize, eps: f64, rng: &mut impl Rng) -> Mat {
    let mut b = mat_zeros(n, n);
    for row in b.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.sample::<f64, _>(rand_distr::StandardNormal);
        }
    }
    let mut a = mat_mul(&mat_t(&b), &b);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += eps;
    }
    a
}

/// Random symmetric PSD matrix with a prescribed spectrum: Q diag(vals) Q^T
/// for a random orthogonal Q (QR of a Gaussian matrix by Gram-Schmidt).
pub fn psd_with_spectrum(vals: &[f64], rng: &mut impl Rng) -> Mat {
    let n = vals.len();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    while q.len() < n {
        let mut col: Vec<f64> = (0..n)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        for prev in &q {
            let proj: f64 = prev.iter().zip(col.iter()).map(|(&a, &b)| a * b).sum();
            for (ci, &pi) in col.iter_mut().zip(prev.iter()) {
                *ci -= proj * pi;
            }
        }
        let nrm: f64 = col.iter().map(|&x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            for ci in col.iter_mut() {
                *ci /= nrm;
            }
            q.push(col);
        }
    }
    let mut a = mat_zeros(n, n);
    for (k, qk) in q.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                a[i][j] += vals[k] * qk[i] * qk[j];
            }
        }
    }
    a
}

/// Dense covariance with Cholesky-factor actions, the test-side counterpart
/// of the prior's matrix-free covariance operations.
pub struct DenseCov {
    pub c: Mat,
    pub l: Mat,
}

impl DenseCov {
    pub fn new(c: Mat) -> Self {
        let l = cholesky(&c);
        DenseCov { c, l }
    }
}

impl CovarianceOps<f64> for DenseCov {
    fn dim(&self) -> usize {
        self.c.len()
    }
    fn apply_cov(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(mat_vec(&self.c, x))
    }
    fn apply_factor(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(mat_vec(&self.l, x))
    }
    fn apply_factor_t(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(mat_vec(&mat_t(&self.l), x))
    }
    fn apply_precision(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(back_sub_lt(&self.l, &forward_sub(&self.l, x)))
    }
}

pub fn to_dense_mat(a: &Mat) -> DenseMat<f64> {
    DenseMat::from_rows(a.clone())
}

pub fn max_rel_err(got: &[f64], want: &[f64]) -> f64 {
    got.iter()
        .zip(want.iter())
        .map(|(&g, &w)| (g - w).abs() / (1e-300 + w.abs()))
        .fold(0.0, f64::max)
}
