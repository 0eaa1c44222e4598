//! Smooth convex test objectives.
//!
//! Objectives keep their true smoothness constant `L`; the GD engine and the
//! checks divide stepsizes and values by `L` so that every inequality is
//! stated for a 1-smooth function.

mod huber;
pub mod linalg;
mod log_sum_exp;
mod least_squares;
mod oracle;
mod quadratic;
mod spec;
mod validate;

pub use huber::Huber;
pub use least_squares::LeastSquares;
pub use log_sum_exp::LogSumExp;
pub use oracle::{solve_by_gd, OracleOptions, OracleSolution};
pub use quadratic::{scalar_quadratic, QuadraticDiag};
pub use spec::ObjectiveSpec;
pub use validate::validate_smooth_convex;

use std::fmt::Debug;

use crate::error::{domain, Result};
use crate::Scalar;

/// A differentiable convex function with an `L`-Lipschitz gradient.
pub trait Objective<T: Scalar>: Debug + Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[T]) -> T;

    /// Writes the gradient at `x` into `out`.
    fn gradient(&self, x: &[T], out: &mut [T]);

    fn value_and_gradient(&self, x: &[T], out: &mut [T]) -> T {
        self.gradient(x, out);
        self.value(x)
    }

    /// Smoothness constant `L > 0`.
    fn smoothness(&self) -> T;

    /// Strong convexity constant `mu` (zero when unknown or absent).
    fn strong_convexity(&self) -> T {
        T::zero()
    }

    fn minimizer(&self) -> Option<&[T]> {
        None
    }

    fn optimum(&self) -> Option<T> {
        None
    }

    /// `f(x) - f*` when the optimum is known. Families with `f* = 0`
    /// return the value itself, which keeps tiny gaps accurate.
    fn gap(&self, x: &[T]) -> Option<T> {
        self.optimum().map(|f| self.value(x) - f)
    }
}

macro_rules! forward_objective {
    ($($ty:ty),*) => {$(
        impl<T: Scalar, O: Objective<T> + ?Sized> Objective<T> for $ty {
            fn dim(&self) -> usize { (**self).dim() }
            fn value(&self, x: &[T]) -> T { (**self).value(x) }
            fn gradient(&self, x: &[T], out: &mut [T]) { (**self).gradient(x, out) }
            fn value_and_gradient(&self, x: &[T], out: &mut [T]) -> T {
                (**self).value_and_gradient(x, out)
            }
            fn smoothness(&self) -> T { (**self).smoothness() }
            fn strong_convexity(&self) -> T { (**self).strong_convexity() }
            fn minimizer(&self) -> Option<&[T]> { (**self).minimizer() }
            fn optimum(&self) -> Option<T> { (**self).optimum() }
            fn gap(&self, x: &[T]) -> Option<T> { (**self).gap(x) }
        }
    )*};
}

forward_objective!(Box<O>, &O, std::sync::Arc<O>);

/// Reports a different smoothness constant than the wrapped objective.
/// Used to feed deliberately wrong constants to the validators.
#[derive(Debug)]
pub struct WithSmoothness<O, T> {
    inner: O,
    l: T,
}

impl<O, T: Scalar> WithSmoothness<O, T> {
    pub fn new(inner: O, l: T) -> Result<Self> {
        if !(l > T::zero() && l.is_finite()) {
            return domain(format!("smoothness must be positive and finite, got {l}"));
        }
        Ok(Self { inner, l })
    }
}

impl<T: Scalar, O: Objective<T>> Objective<T> for WithSmoothness<O, T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[T]) -> T {
        self.inner.value(x)
    }
    fn gradient(&self, x: &[T], out: &mut [T]) {
        self.inner.gradient(x, out)
    }
    fn value_and_gradient(&self, x: &[T], out: &mut [T]) -> T {
        self.inner.value_and_gradient(x, out)
    }
    fn smoothness(&self) -> T {
        self.l
    }
    fn strong_convexity(&self) -> T {
        self.inner.strong_convexity().min(self.l)
    }
    fn minimizer(&self) -> Option<&[T]> {
        self.inner.minimizer()
    }
    fn optimum(&self) -> Option<T> {
        self.inner.optimum()
    }
    fn gap(&self, x: &[T]) -> Option<T> {
        self.inner.gap(x)
    }
}

pub(crate) fn check_dim(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return domain(format!("{what}: expected dimension {expected}, got {got}"));
    }
    Ok(())
}
