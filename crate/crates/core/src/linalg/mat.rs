//! Minimal dense matrix and vector helpers.
//!
//! Row-major storage, just enough surface for the kernels in this crate:
//! snapshot matrices, reduced bases, small reduced Hessians and the network
//! weights. Anything heavier (factorizations) goes through `linalg::dense`.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> DenseMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from column vectors.
    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = DenseMat::zeros(r, c);
        for (jc, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (ir, &v) in col.iter().enumerate() {
                m.data[ir * c + jc] = v;
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn transpose(&self) -> DenseMat<S> {
        let mut t = DenseMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j);
            }
        }
        t
    }

    /// y = A x
    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![S::zero(); self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = S::zero();
            for (a, b) in row.iter().zip(x.iter()) {
                acc += *a * *b;
            }
            y[i] = acc;
        }
        y
    }

    /// y = A^T x
    pub fn matvec_t(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.rows);
        let mut y = vec![S::zero(); self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            let row = self.row(i);
            for (j, &a) in row.iter().enumerate() {
                y[j] += a * xi;
            }
        }
        y
    }

    /// C = A B
    pub fn matmul(&self, other: &DenseMat<S>) -> DenseMat<S> {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik == S::zero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow.iter()) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    /// C = A^T B
    pub fn tr_matmul(&self, other: &DenseMat<S>) -> DenseMat<S> {
        assert_eq!(self.rows, other.rows);
        let mut out = DenseMat::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let arow = self.row(k);
            let brow = other.row(k);
            for (i, &a) in arow.iter().enumerate() {
                if a == S::zero() {
                    continue;
                }
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow.iter()) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn scale_in_place(&mut self, s: S) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn frobenius_norm(&self) -> S {
        self.data.iter().map(|&v| v * v).sum::<S>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

// Free-standing vector helpers used throughout the solvers.

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(&x, &y)| x * y).sum()
}

pub fn norm2<S: Scalar>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

/// y += alpha * x
pub fn axpy<S: Scalar>(alpha: S, x: &[S], y: &mut [S]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x.iter()) {
        *yi += alpha * xi;
    }
}

pub fn scale<S: Scalar>(alpha: S, x: &mut [S]) {
    for v in x.iter_mut() {
        *v *= alpha;
    }
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b.iter()).map(|(&x, &y)| x + y).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b.iter()).map(|(&x, &y)| x - y).collect()
}

pub fn hadamard<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b.iter()).map(|(&x, &y)| x * y).collect()
}

pub fn scaled<S: Scalar>(alpha: S, a: &[S]) -> Vec<S> {
    a.iter().map(|&x| alpha * x).collect()
}

pub fn all_finite<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_against_hand_result() {
        let a = DenseMat::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = DenseMat::from_rows(vec![vec![5.0, 6.0], vec![7.0, 8.0]]);
        let cm = a.matmul(&b);
        assert_eq!(cm.data, vec![19.0, 22.0, 43.0, 50.0]);
        let tm = a.tr_matmul(&b);
        assert_eq!(tm.data, vec![26.0, 30.0, 38.0, 44.0]);
    }

    #[test]
    fn matvec_and_transpose_agree() {
        let a = DenseMat::from_rows(vec![vec![1.0, 0.5, 2.0], vec![-1.0, 3.0, 0.0]]);
        let x = vec![1.0, 2.0, 3.0];
        let y = a.matvec(&x);
        assert_eq!(y, vec![8.0, 5.0]);
        let z = a.matvec_t(&y);
        assert_eq!(z, a.transpose().matvec(&y));
    }
}
