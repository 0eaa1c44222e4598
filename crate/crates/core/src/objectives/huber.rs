use super::linalg::Matrix;
use super::oracle::{solve_by_gd, OracleOptions, OracleSolution};
use super::{check_dim, Objective};
use crate::error::{domain, Result};
use crate::Scalar;

/// Huber regression `f(x) = sum_i h_delta(a_i^T x - b_i)` where `h_delta`
/// is quadratic on `[-delta, delta]` and linear outside.
#[derive(Clone, Debug)]
pub struct Huber<T> {
    a: Matrix<T>,
    b: Vec<T>,
    delta: T,
    l: T,
    x_star: Option<Vec<T>>,
    f_star: Option<T>,
}

impl<T: Scalar> Huber<T> {
    pub fn new(a: Matrix<T>, b: Vec<T>, delta: T) -> Result<Self> {
        check_dim("huber targets", a.rows(), b.len())?;
        if !(delta > T::zero() && delta.is_finite()) {
            return domain(format!("huber threshold must be positive and finite, got {delta}"));
        }
        let l = a.sigma_max_sq().max(T::min_positive_value());
        Ok(Self { a, b, delta, l, x_star: None, f_star: None })
    }

    pub fn with_oracle(mut self, x0: Vec<T>, options: OracleOptions) -> Result<(Self, OracleSolution<T>)> {
        check_dim("oracle start", self.dim(), x0.len())?;
        let sol = solve_by_gd(&self, x0, options);
        self.x_star = Some(sol.x.clone());
        self.f_star = Some(sol.f);
        Ok((self, sol))
    }

    fn residual(&self, x: &[T]) -> Vec<T> {
        let mut r = vec![T::zero(); self.a.rows()];
        self.a.apply(x, &mut r);
        for (ri, &bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        r
    }

    fn loss(&self, r: T) -> T {
        let half = T::lit(0.5);
        if r.abs() <= self.delta {
            half * r * r
        } else {
            self.delta * (r.abs() - half * self.delta)
        }
    }
}

impl<T: Scalar> Objective<T> for Huber<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[T]) -> T {
        self.residual(x).into_iter().map(|r| self.loss(r)).sum()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        self.value_and_gradient(x, out);
    }

    fn value_and_gradient(&self, x: &[T], out: &mut [T]) -> T {
        let r = self.residual(x);
        let psi: Vec<T> = r.iter().map(|&ri| ri.max(-self.delta).min(self.delta)).collect();
        self.a.apply_transpose(&psi, out);
        r.into_iter().map(|ri| self.loss(ri)).sum()
    }

    fn smoothness(&self) -> T {
        self.l
    }

    fn minimizer(&self) -> Option<&[T]> {
        self.x_star.as_deref()
    }

    fn optimum(&self) -> Option<T> {
        self.f_star
    }
}
