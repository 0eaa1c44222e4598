use super::linalg::Matrix;
use super::oracle::{solve_by_gd, OracleOptions, OracleSolution};
use super::{check_dim, Objective};
use crate::error::{domain, Result};
use crate::Scalar;

/// `f(x) = t log sum_i exp((a_i^T x + b_i) / t)`.
///
/// Evaluation subtracts the largest exponent first, so neither the value nor
/// the gradient overflows. The smoothness constant recorded is
/// `sigma_max(A)^2 / t`.
#[derive(Clone, Debug)]
pub struct LogSumExp<T> {
    a: Matrix<T>,
    b: Vec<T>,
    t: T,
    l: T,
    x_star: Option<Vec<T>>,
    f_star: Option<T>,
}

impl<T: Scalar> LogSumExp<T> {
    pub fn new(a: Matrix<T>, b: Vec<T>, t: T) -> Result<Self> {
        check_dim("log-sum-exp offsets", a.rows(), b.len())?;
        if !(t > T::zero() && t.is_finite()) {
            return domain(format!("smoothing must be positive and finite, got {t}"));
        }
        // A = 0 would give L = 0; any positive constant is valid then
        let l = (a.sigma_max_sq() / t).max(T::min_positive_value());
        Ok(Self { a, b, t, l, x_star: None, f_star: None })
    }

    /// Fills the minimizer and optimum with a long constant-step GD solve
    /// started at `x0`.
    pub fn with_oracle(mut self, x0: Vec<T>, options: OracleOptions) -> Result<(Self, OracleSolution<T>)> {
        check_dim("oracle start", self.dim(), x0.len())?;
        let sol = solve_by_gd(&self, x0, options);
        self.x_star = Some(sol.x.clone());
        self.f_star = Some(sol.f);
        Ok((self, sol))
    }

    /// Scaled exponents, their max, and the normalizer `sum exp(z - max)`.
    fn exponents(&self, x: &[T]) -> (Vec<T>, T, T) {
        let mut z = vec![T::zero(); self.a.rows()];
        self.a.apply(x, &mut z);
        for (zi, &bi) in z.iter_mut().zip(&self.b) {
            *zi = (*zi + bi) / self.t;
        }
        let m = z.iter().copied().fold(T::neg_infinity(), T::max);
        let s = z.iter().map(|&zi| (zi - m).exp()).sum();
        (z, m, s)
    }
}

impl<T: Scalar> Objective<T> for LogSumExp<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[T]) -> T {
        let (_, m, s) = self.exponents(x);
        self.t * (m + s.ln())
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        self.value_and_gradient(x, out);
    }

    fn value_and_gradient(&self, x: &[T], out: &mut [T]) -> T {
        let (z, m, s) = self.exponents(x);
        let p: Vec<T> = z.iter().map(|&zi| (zi - m).exp() / s).collect();
        self.a.apply_transpose(&p, out);
        self.t * (m + s.ln())
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::testing::worst_fd_error;
    use crate::rng::{gaussian_vec, seeded};

    #[test]
    fn constant_row_is_zero() {
        let f = LogSumExp::new(Matrix::from_rows(1, 2, vec![0.0f64, 0.0]).unwrap(), vec![0.0], 1.0).unwrap();
        let mut g = [1.0, 1.0];
        assert_eq!(f.value_and_gradient(&[3.0, -4.0], &mut g), 0.0);
        assert_eq!(g, [0.0, 0.0]);
    }

    #[test]
    fn symmetric_rows_minimized_at_origin() {
        let f = LogSumExp::new(Matrix::from_rows(2, 1, vec![1.0f64, -1.0]).unwrap(), vec![0.0, 0.0], 1.0).unwrap();
        let (f, sol) = f.with_oracle(vec![0.7], OracleOptions::default()).unwrap();
        assert!(sol.converged);
        assert!(f.minimizer().unwrap()[0].abs() < 1e-11);
        assert!((f.optimum().unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!((f.value(&[0.0]) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn overflow_safe() {
        let f = LogSumExp::new(Matrix::from_rows(2, 1, vec![1.0f64, -1.0]).unwrap(), vec![0.0, 0.0], 0.01).unwrap();
        let mut g = [0.0];
        let v = f.value_and_gradient(&[1e3], &mut g);
        assert!((v - 1e3).abs() < 1e-9);
        assert!((g[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = seeded(5);
        let f = LogSumExp::new(Matrix::from_rows(10, 4, gaussian_vec(&mut rng, 40)).unwrap(), gaussian_vec(&mut rng, 10), 0.7)
            .unwrap();
        let probes: Vec<Vec<f64>> = (0..100).map(|_| gaussian_vec(&mut rng, 4)).collect();
        assert!(worst_fd_error(&f, &probes) < 1e-6);
    }

    #[test]
    fn mismatched_dimensions() {
        assert!(LogSumExp::new(Matrix::from_rows(2, 1, vec![1.0f64, 2.0]).unwrap(), vec![0.0], 1.0).is_err());
        assert!(LogSumExp::new(Matrix::from_rows(1, 1, vec![1.0f64]).unwrap(), vec![0.0], 0.0).is_err());
    }
}
