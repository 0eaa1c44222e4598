use serde::{Deserialize, Serialize};

use super::linalg::Matrix;
use super::{
    scalar_quadratic, Huber, LeastSquares, LogSumExp, Objective, OracleOptions, QuadraticDiag,
};
use crate::error::{domain, precondition, Result};
use crate::rng::{gaussian_vec, log_uniform, seeded};
use crate::Scalar;

/// Serializable description of an objective. Randomized families draw all
/// their data from a generator seeded with `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    /// Either an explicit `spectrum`, or `dim` eigenvalues spanning
    /// `[mu, 1]` (both endpoints present, the rest log-uniform).
    QuadraticDiag {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spectrum: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<f64>,
        /// Defaults to the origin.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x_star: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        smoothness: Option<f64>,
        #[serde(default)]
        seed: u64,
    },
    ScalarQuadratic {
        lambda: f64,
        #[serde(default)]
        x_star: f64,
        #[serde(default = "one")]
        smoothness: f64,
    },
    LeastSquares {
        rows: usize,
        cols: usize,
        #[serde(default)]
        seed: u64,
    },
    /// Rows come in pairs `b_i, -b_i` so the function is coercive and a
    /// minimizer exists; offsets are independent Gaussians.
    LogSumExp {
        pairs: usize,
        cols: usize,
        #[serde(default = "one")]
        smoothing: f64,
        #[serde(default)]
        seed: u64,
    },
    Huber {
        rows: usize,
        cols: usize,
        #[serde(default = "one")]
        delta: f64,
        #[serde(default)]
        seed: u64,
    },
}

fn one() -> f64 {
    1.0
}

impl ObjectiveSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ObjectiveSpec::QuadraticDiag { .. } => "quadratic_diag",
            ObjectiveSpec::ScalarQuadratic { .. } => "scalar_quadratic",
            ObjectiveSpec::LeastSquares { .. } => "least_squares",
            ObjectiveSpec::LogSumExp { .. } => "log_sum_exp",
            ObjectiveSpec::Huber { .. } => "huber",
        }
    }

    /// Compact one-line description, used as the instance name in reports.
    pub fn describe(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| self.family().to_string())
    }

    /// Default instance of a family by name, as exposed on the command line.
    pub fn preset(family: &str, dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return domain("dimension must be positive");
        }
        Ok(match family {
            "quadratic" | "quadratic_diag" => ObjectiveSpec::QuadraticDiag {
                spectrum: None,
                dim: Some(dim),
                mu: Some(1e-3),
                x_star: None,
                smoothness: None,
                seed,
            },
            "scalar" | "scalar_quadratic" => ObjectiveSpec::ScalarQuadratic { lambda: 1.0, x_star: 0.0, smoothness: 1.0 },
            "least_squares" => ObjectiveSpec::LeastSquares { rows: 2 * dim, cols: dim, seed },
            "log_sum_exp" => ObjectiveSpec::LogSumExp { pairs: 2 * dim, cols: dim, smoothing: 1.0, seed },
            "huber" => ObjectiveSpec::Huber { rows: 4 * dim, cols: dim, delta: 1.0, seed },
            other => return domain(format!("unknown objective family {other:?}")),
        })
    }

    pub fn build<T: Scalar>(&self) -> Result<Box<dyn Objective<T>>> {
        let lit = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
        Ok(match self {
            ObjectiveSpec::QuadraticDiag { spectrum, dim, mu, x_star, smoothness, seed } => {
                let spectrum = match (spectrum, dim, mu) {
                    (Some(s), _, _) => s.clone(),
                    (None, Some(d), Some(m)) => random_spectrum(*d, *m, *seed)?,
                    _ => return precondition("quadratic_diag needs a spectrum or both dim and mu"),
                };
                let n = spectrum.len();
                let x_star = x_star.clone().unwrap_or_else(|| vec![0.0; n]);
                let q = match smoothness {
                    Some(l) => QuadraticDiag::with_smoothness(lit(&spectrum), lit(&x_star), T::lit(*l))?,
                    None => QuadraticDiag::new(lit(&spectrum), lit(&x_star))?,
                };
                Box::new(q)
            }
            ObjectiveSpec::ScalarQuadratic { lambda, x_star, smoothness } => {
                Box::new(scalar_quadratic(T::lit(*lambda), T::lit(*x_star), T::lit(*smoothness))?)
            }
            ObjectiveSpec::LeastSquares { rows, cols, seed } => {
                let mut rng = seeded(*seed);
                let a = Matrix::from_rows(*rows, *cols, gaussian_vec(&mut rng, rows * cols))?;
                Box::new(LeastSquares::new(a, gaussian_vec(&mut rng, *rows))?)
            }
            ObjectiveSpec::LogSumExp { pairs, cols, smoothing, seed } => {
                let mut rng = seeded(*seed);
                let half: Vec<T> = gaussian_vec(&mut rng, pairs * cols);
                let mut data = half.clone();
                data.extend(half.iter().map(|&v| -v));
                let a = Matrix::from_rows(2 * pairs, *cols, data)?;
                let b = gaussian_vec(&mut rng, 2 * pairs);
                let f = LogSumExp::new(a, b, T::lit(*smoothing))?;
                let (f, _) = f.with_oracle(vec![T::zero(); *cols], OracleOptions::default())?;
                Box::new(f)
            }
            ObjectiveSpec::Huber { rows, cols, delta, seed } => {
                let mut rng = seeded(*seed);
                let a = Matrix::from_rows(*rows, *cols, gaussian_vec(&mut rng, rows * cols))?;
                let b = gaussian_vec(&mut rng, *rows);
                let f = Huber::new(a, b, T::lit(*delta))?;
                let (f, _) = f.with_oracle(vec![T::zero(); *cols], OracleOptions::default())?;
                Box::new(f)
            }
        })
    }
}

fn random_spectrum(dim: usize, mu: f64, seed: u64) -> Result<Vec<f64>> {
    if dim == 0 || !(mu > 0.0 && mu <= 1.0) {
        return domain(format!("need dim >= 1 and mu in (0, 1], got dim={dim}, mu={mu}"));
    }
    let mut rng = seeded(seed);
    Ok((0..dim)
        .map(|i| match i {
            0 => 1.0,
            1 => mu,
            _ => log_uniform(&mut rng, mu, 1.0),
        })
        .collect())
}
