//! Dense helpers on plain slices; the objectives here are small.

use crate::error::{precondition, Result};
use crate::Scalar;

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm_sq<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

pub fn dist_sq<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

/// `y <- y + a x`
pub fn axpy<T: Scalar>(a: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return precondition(format!(
                "matrix data of length {} does not match {rows}x{cols}",
                data.len()
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `out <- A x`
    pub fn apply(&self, x: &[T], out: &mut [T]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x);
        }
    }

    /// `out <- A^T y`
    pub fn apply_transpose(&self, y: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        for (i, &yi) in y.iter().enumerate() {
            axpy(yi, self.row(i), out);
        }
    }

    /// Gram matrix `A^T A`, row-major `cols x cols`.
    pub fn gram(&self) -> Vec<T> {
        let n = self.cols;
        let mut g = vec![T::zero(); n * n];
        for i in 0..self.rows {
            let r = self.row(i);
            for p in 0..n {
                for q in 0..n {
                    g[p * n + q] += r[p] * r[q];
                }
            }
        }
        g
    }

    /// Largest squared singular value, by power iteration on `A^T A`
    /// started from a fixed vector.
    pub fn sigma_max_sq(&self) -> T {
        let n = self.cols;
        let mut v: Vec<T> = (0..n).map(|i| T::one() + T::from_count(i) * T::lit(0.1)).collect();
        let mut av = vec![T::zero(); self.rows];
        let mut w = vec![T::zero(); n];
        let mut estimate = T::zero();
        for _ in 0..2000 {
            let nv = norm_sq(&v).sqrt();
            v.iter_mut().for_each(|x| *x /= nv);
            self.apply(&v, &mut av);
            self.apply_transpose(&av, &mut w);
            let next = dot(&v, &w);
            std::mem::swap(&mut v, &mut w);
            if (next - estimate).abs() <= T::epsilon() * next {
                estimate = next;
                break;
            }
            estimate = next;
        }
        // power iteration approaches from below; pad by a few ulps
        estimate * (T::one() + T::lit(64.0) * T::epsilon())
    }
}

/// Solves `G x = r` for symmetric positive definite `G` (row-major `n x n`).
pub fn cholesky_solve<T: Scalar>(g: &[T], r: &[T]) -> Result<Vec<T>> {
    let n = r.len();
    let mut l = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= T::lit(16.0) * T::epsilon() * g[i * n + i] {
                    return precondition("matrix is not positive definite");
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut s = r[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_of_diagonal() {
        let a = Matrix::from_rows(3, 2, vec![3.0f64, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((a.sigma_max_sq() - 9.0).abs() < 1e-10);
    }

    #[test]
    fn cholesky_roundtrip() {
        let g = vec![4.0f64, 1.0, 1.0, 3.0];
        let x = cholesky_solve(&g, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
        assert!(cholesky_solve(&[1.0f64, 2.0, 2.0, 1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn transpose_apply() {
        let a = Matrix::from_rows(2, 3, vec![1.0f64, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let mut out = vec![0.0; 3];
        a.apply_transpose(&[1.0, 1.0], &mut out);
        assert_eq!(out, vec![5.0, 7.0, 9.0]);
        assert!(Matrix::<f64>::from_rows(2, 2, vec![1.0]).is_err());
    }
}
