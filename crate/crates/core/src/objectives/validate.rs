use rand::Rng;

use super::linalg::{dist_sq, dot, norm_sq};
use super::Objective;
use crate::error::{domain, Result};
use crate::report::VerificationReport;
use crate::rng::{ball_point, seeded};
use crate::Scalar;

/// Samples `n_pairs` point pairs and checks, on the `L`-rescaled function,
/// the cocoercivity inequality
/// `f_i - f_j - <g_i, x_i - x_j> + 1/2 ||g_i - g_j||^2 <= 0`
/// and the one-step descent bound
/// `f(x - a g) - f(x) <= (a^2 + 2a)/2 ||g||^2` for a random `a` in `(0, 4]`.
///
/// Slacks are relative to the magnitude of the terms involved. Violations
/// are reported, never returned as errors.
pub fn validate_smooth_convex<T: Scalar, O: Objective<T> + ?Sized>(
    obj: &O,
    n_pairs: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if n_pairs == 0 {
        return domain("n_pairs must be positive");
    }
    let n = obj.dim();
    let inv_l = obj.smoothness().recip();
    let center: Vec<T> = obj.minimizer().map(<[T]>::to_vec).unwrap_or_else(|| vec![T::zero(); n]);
    let mut rng = seeded(seed);
    let mut gi = vec![T::zero(); n];
    let mut gj = vec![T::zero(); n];
    let mut slacks = Vec::with_capacity(2 * n_pairs);
    let mut worst_cocoercive = f64::INFINITY;
    let mut worst_descent = f64::INFINITY;
    for _ in 0..n_pairs {
        let radius = 10f64.powf(rng.random_range(-1.0..1.0));
        let xi = ball_point(&mut rng, &center, radius);
        let xj = ball_point(&mut rng, &center, radius);
        let fi = obj.value_and_gradient(&xi, &mut gi) * inv_l;
        let fj = obj.value_and_gradient(&xj, &mut gj) * inv_l;
        gi.iter_mut().chain(gj.iter_mut()).for_each(|g| *g *= inv_l);

        let diff: Vec<T> = xi.iter().zip(&xj).map(|(&a, &b)| a - b).collect();
        let inner = dot(&gi, &diff);
        let half_g = T::lit(0.5) * dist_sq(&gi, &gj);
        let excess = (fi - fj - inner + half_g).as_f64();
        let scale = (fi.abs() + fj.abs() + inner.abs() + half_g).as_f64().max(f64::MIN_POSITIVE);
        let s = -excess / scale;
        worst_cocoercive = worst_cocoercive.min(s);
        slacks.push(s);

        let a = T::lit(rng.random_range(0.0..4.0)).max(T::lit(1e-3));
        let x_next: Vec<T> = xi.iter().zip(&gi).map(|(&x, &g)| x - a * g).collect();
        let f_next = obj.value(&x_next) * inv_l;
        let bound = (a * a + a + a) * T::lit(0.5) * norm_sq(&gi);
        let scale = (fi.abs() + f_next.abs() + bound).as_f64().max(f64::MIN_POSITIVE);
        let s = (bound - (f_next - fi)).as_f64() / scale;
        worst_descent = worst_descent.min(s);
        slacks.push(s);
    }
    let tol = 1e-9f64.max(64.0 * T::epsilon().as_f64());
    Ok(VerificationReport::from_slacks("smooth_convex", format!("dim={n},pairs={n_pairs},seed={seed}"), slacks, tol)
        .with_aux("max_violation", (-worst_cocoercive.min(worst_descent)).max(0.0))
        .with_aux("min_cocoercivity_slack", worst_cocoercive)
        .with_aux("min_descent_slack", worst_descent)
        .with_aux("smoothness", obj.smoothness().as_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{ObjectiveSpec, WithSmoothness};

    #[test]
    fn quadratic_passes() {
        let f = ObjectiveSpec::preset("quadratic", 5, 3).unwrap().build::<f64>().unwrap();
        let r = validate_smooth_convex(&*f, 1000, 1).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.aux("max_violation").unwrap() <= 1e-9);
    }

    #[test]
    fn other_families_pass() {
        for family in ["log_sum_exp", "least_squares", "huber"] {
            let f = ObjectiveSpec::preset(family, 4, 3).unwrap().build::<f64>().unwrap();
            let r = validate_smooth_convex(&*f, 1000, 2).unwrap();
            assert!(r.pass, "{family}: {r:?}");
        }
    }

    #[test]
    fn halved_smoothness_detected() {
        let f = ObjectiveSpec::preset("quadratic", 5, 3).unwrap().build::<f64>().unwrap();
        let half = f.smoothness() / 2.0;
        let wrong = WithSmoothness::new(f, half).unwrap();
        let r = validate_smooth_convex(&wrong, 200, 1).unwrap();
        assert!(!r.pass);
        assert!(r.aux("max_violation").unwrap() > 1e-3);
    }

    #[test]
    fn zero_pairs_rejected() {
        let f = ObjectiveSpec::preset("scalar", 1, 0).unwrap().build::<f64>().unwrap();
        assert!(validate_smooth_convex(&*f, 0, 0).is_err());
    }
}
