use super::linalg::{cholesky_solve, Matrix};
use super::{check_dim, Objective};
use crate::error::Result;
use crate::Scalar;

/// `f(x) = 1/2 ||A x - b||^2` with `A` of full column rank.
#[derive(Clone, Debug)]
pub struct LeastSquares<T> {
    a: Matrix<T>,
    b: Vec<T>,
    l: T,
    x_star: Vec<T>,
    f_star: T,
}

impl<T: Scalar> LeastSquares<T> {
    /// Solves the normal equations for the minimizer; fails when `A^T A`
    /// is not positive definite.
    pub fn new(a: Matrix<T>, b: Vec<T>) -> Result<Self> {
        check_dim("least squares right-hand side", a.rows(), b.len())?;
        let mut atb = vec![T::zero(); a.cols()];
        a.apply_transpose(&b, &mut atb);
        let x_star = cholesky_solve(&a.gram(), &atb)?;
        let l = a.sigma_max_sq();
        let mut obj = Self { a, b, l, x_star, f_star: T::zero() };
        obj.f_star = obj.value(&obj.x_star);
        Ok(obj)
    }

    fn residual(&self, x: &[T]) -> Vec<T> {
        let mut r = vec![T::zero(); self.a.rows()];
        self.a.apply(x, &mut r);
        for (ri, &bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        r
    }
}

impl<T: Scalar> Objective<T> for LeastSquares<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[T]) -> T {
        T::lit(0.5) * super::linalg::norm_sq(&self.residual(x))
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let r = self.residual(x);
        self.a.apply_transpose(&r, out);
    }

    fn value_and_gradient(&self, x: &[T], out: &mut [T]) -> T {
        let r = self.residual(x);
        self.a.apply_transpose(&r, out);
        T::lit(0.5) * super::linalg::norm_sq(&r)
    }

    fn smoothness(&self) -> T {
        self.l
    }

    fn minimizer(&self) -> Option<&[T]> {
        Some(&self.x_star)
    }

    fn optimum(&self) -> Option<T> {
        Some(self.f_star)
    }
}
