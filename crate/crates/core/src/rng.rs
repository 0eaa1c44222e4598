//! Seeded randomness. Every randomized construction goes through
//! [`seeded`] so outputs are reproducible from the recorded seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec<T: Scalar>(rng: &mut SeededRng, n: usize) -> Vec<T> {
    (0..n)
        .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
        .collect()
}

/// Uniform point in the Euclidean ball of the given radius around `center`.
pub fn ball_point<T: Scalar>(rng: &mut SeededRng, center: &[T], radius: f64) -> Vec<T> {
    let n = center.len();
    let dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
    center
        .iter()
        .zip(&dir)
        .map(|(&c, &d)| c + T::lit(r * d / norm))
        .collect()
}

/// Log-uniform sample in `[lo, hi]`.
pub fn log_uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a: Vec<f64> = gaussian_vec(&mut seeded(7), 5);
        let b: Vec<f64> = gaussian_vec(&mut seeded(7), 5);
        assert_eq!(a, b);
        let p: Vec<f64> = ball_point(&mut seeded(1), &[1.0, 1.0, 1.0], 0.5);
        let d: f64 = p.iter().map(|v| (v - 1.0) * (v - 1.0)).sum::<f64>().sqrt();
        assert!(d <= 0.5);
    }
}
