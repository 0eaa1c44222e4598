use super::{check_dim, Objective};
use crate::error::{domain, Result};
use crate::Scalar;

/// `f(x) = 1/2 sum_i lambda_i (x_i - x*_i)^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticDiag<T> {
    spectrum: Vec<T>,
    x_star: Vec<T>,
    l: T,
    mu: T,
}

impl<T: Scalar> QuadraticDiag<T> {
    /// Smoothness defaults to the largest eigenvalue.
    pub fn new(spectrum: Vec<T>, x_star: Vec<T>) -> Result<Self> {
        let l = spectrum.iter().copied().fold(T::zero(), T::max);
        Self::with_smoothness(spectrum, x_star, l)
    }

    /// Every eigenvalue must lie in `(0, l]`.
    pub fn with_smoothness(spectrum: Vec<T>, x_star: Vec<T>, l: T) -> Result<Self> {
        if spectrum.is_empty() {
            return domain("empty spectrum");
        }
        check_dim("quadratic minimizer", spectrum.len(), x_star.len())?;
        if !(l > T::zero() && l.is_finite()) {
            return domain(format!("smoothness must be positive and finite, got {l}"));
        }
        if let Some(bad) = spectrum.iter().find(|&&v| !(v > T::zero() && v <= l)) {
            return domain(format!("eigenvalue {bad} outside (0, {l}]"));
        }
        if x_star.iter().any(|v| !v.is_finite()) {
            return domain("non-finite minimizer");
        }
        let mu = spectrum.iter().copied().fold(T::infinity(), T::min);
        Ok(Self { spectrum, x_star, l, mu })
    }

    pub fn spectrum(&self) -> &[T] {
        &self.spectrum
    }
}

/// One-dimensional `lambda/2 (x - x*)^2` with an explicit smoothness constant.
pub fn scalar_quadratic<T: Scalar>(lambda: T, x_star: T, l: T) -> Result<QuadraticDiag<T>> {
    QuadraticDiag::with_smoothness(vec![lambda], vec![x_star], l)
}

impl<T: Scalar> Objective<T> for QuadraticDiag<T> {
    fn dim(&self) -> usize {
        self.spectrum.len()
    }

    fn value(&self, x: &[T]) -> T {
        let half = T::lit(0.5);
        self.spectrum
            .iter()
            .zip(x.iter().zip(&self.x_star))
            .fold(T::zero(), |acc, (&l, (&xi, &si))| {
                let d = xi - si;
                acc + half * l * d * d
            })
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        for ((o, &l), (&xi, &si)) in out.iter_mut().zip(&self.spectrum).zip(x.iter().zip(&self.x_star)) {
            *o = l * (xi - si);
        }
    }

    fn smoothness(&self) -> T {
        self.l
    }

    fn strong_convexity(&self) -> T {
        self.mu
    }

    fn minimizer(&self) -> Option<&[T]> {
        Some(&self.x_star)
    }

    fn optimum(&self) -> Option<T> {
        Some(T::zero())
    }

    fn gap(&self, x: &[T]) -> Option<T> {
        Some(self.value(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::testing::worst_fd_error;
    use crate::rng::{gaussian_vec, seeded};

    #[test]
    fn examples() {
        let q = QuadraticDiag::new(vec![1.0], vec![0.0]).unwrap();
        let mut g = [0.0];
        assert_eq!(q.value_and_gradient(&[2.0], &mut g), 2.0);
        assert_eq!(g, [2.0]);
        assert_eq!(q.value_and_gradient(&[0.0], &mut g), 0.0);
        assert_eq!(g, [0.0]);

        let q = QuadraticDiag::new(vec![0.25, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(q.value(&[2.0, 1.0]), 1.0);
        assert_eq!(q.smoothness(), 1.0);
        assert_eq!(q.strong_convexity(), 0.25);
        assert_eq!(q.optimum(), Some(0.0));
    }

    #[test]
    fn domain_errors() {
        assert!(QuadraticDiag::<f64>::new(vec![], vec![]).is_err());
        assert!(QuadraticDiag::new(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(QuadraticDiag::with_smoothness(vec![2.0], vec![0.0], 1.0).is_err());
        assert!(QuadraticDiag::new(vec![1.0], vec![0.0, 1.0]).is_err());
        assert!(scalar_quadratic(0.5, 0.0, 1.0).is_ok());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = seeded(11);
        let spectrum: Vec<f64> = gaussian_vec::<f64>(&mut rng, 6).iter().map(|v| 0.01 + v.abs()).collect();
        let q = QuadraticDiag::new(spectrum, gaussian_vec(&mut rng, 6)).unwrap();
        let probes: Vec<Vec<f64>> = (0..100).map(|_| gaussian_vec(&mut rng, 6)).collect();
        assert!(worst_fd_error(&q, &probes) < 1e-6);
    }

    #[test]
    fn strong_convexity_lower_bound() {
        let mut rng = seeded(12);
        let spectrum = vec![0.01, 0.3, 1.0, 0.7];
        let xs = gaussian_vec::<f64>(&mut rng, 4);
        let q = QuadraticDiag::new(spectrum, xs.clone()).unwrap();
        for _ in 0..200 {
            let x = gaussian_vec::<f64>(&mut rng, 4);
            let d2: f64 = x.iter().zip(&xs).map(|(a, b)| (a - b) * (a - b)).sum();
            let lhs = q.value(&x);
            assert!(lhs - 0.5 * q.strong_convexity() * d2 >= -1e-9 * lhs.max(1.0));
        }
    }
}
