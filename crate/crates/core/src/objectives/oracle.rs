use super::linalg::norm_sq;
use super::Objective;
use crate::Scalar;

/// Settings of the optimum oracle: constant-step `1/L` GD.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    pub max_iter: usize,
    /// Stop once `||grad f|| <= grad_tol * max(1, L)`.
    pub grad_tol: f64,
    /// Early stopping is used only by this oracle; the GD engine always
    /// runs the full horizon.
    pub early_stop: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { max_iter: 1_000_000, grad_tol: 1e-12, early_stop: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution<T> {
    pub x: Vec<T>,
    pub f: T,
    pub grad_norm: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Runs GD with stepsize `1/L` from `x0` and returns the last iterate.
pub fn solve_by_gd<T: Scalar, O: Objective<T> + ?Sized>(obj: &O, x0: Vec<T>, options: OracleOptions) -> OracleSolution<T> {
    let l = obj.smoothness();
    let step = l.recip();
    // binary32 cannot reach a 1e-12 gradient; stop at its resolution instead
    let floor = T::lit(options.grad_tol).max(T::lit(10.0) * T::epsilon());
    let target = floor * l.max(T::one());
    let mut x = x0;
    let mut g = vec![T::zero(); x.len()];
    let mut f = obj.value_and_gradient(&x, &mut g);
    let mut gn = norm_sq(&g).sqrt();
    let mut iterations = 0;
    while iterations < options.max_iter {
        if options.early_stop && gn <= target {
            break;
        }
        for (xi, &gi) in x.iter_mut().zip(&g) {
            *xi -= step * gi;
        }
        f = obj.value_and_gradient(&x, &mut g);
        gn = norm_sq(&g).sqrt();
        iterations += 1;
    }
    OracleSolution { converged: gn <= target, x, f, grad_norm: gn, iterations }
}
