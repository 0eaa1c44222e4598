//! Gradient descent driven by a stepsize schedule.
//!
//! The engine runs `x_{t+1} = x_t - (alpha_t / L) grad f(x_t)`, so schedules
//! are always given in units of `1/L`. Recorded values, gaps and gradients
//! are those of the rescaled function `f / L`; for this function every
//! stepsize inequality holds verbatim with smoothness 1.

mod csv;
mod source;

pub use csv::write_trajectory_csv;
pub use source::{ScheduleSource, ScheduleSpec};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Error, Result};
use crate::objectives::linalg::{dist_sq, dot, norm_sq};
use crate::objectives::{Objective, ObjectiveSpec};
use crate::rng::{ball_point, seeded};
use crate::Scalar;

/// Iterates are kept for every step when `dim * T` is at most this.
pub const FULL_RETENTION_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Retention {
    /// Full when within [`FULL_RETENTION_BUDGET`], sparse otherwise.
    #[default]
    Auto,
    Full,
    /// `x_1`, `x_T` and the iterates at which join steps are applied.
    Sparse,
}

/// One point of a trajectory, in the units of `f / L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord<T> {
    /// 1-based index of the iterate `x_t`.
    pub t: usize,
    /// Stepsize applied at `x_t`; `None` at the final iterate.
    pub alpha: Option<T>,
    pub is_join: bool,
    /// `f(x_t) / L`.
    pub f: T,
    /// `(f(x_t) - f*) / L` when the optimum is known.
    pub gap: Option<T>,
    /// `||grad f(x_t)||^2 / L^2`.
    pub grad_sq: T,
    /// `||x_t - x*||^2` when the minimizer is known.
    pub dist_sq: Option<T>,
    /// `<grad f(x_t), x_t - x*> / L` when the minimizer is known.
    pub grad_dot_error: Option<T>,
    /// `<grad f(x_t), anchor> / L` when an anchor vector was supplied.
    pub grad_dot_anchor: Option<T>,
}

impl<T: Scalar> StepRecord<T> {
    pub fn grad_norm(&self) -> T {
        self.grad_sq.sqrt()
    }
}

/// The record of one GD run of horizon `T` (so `T - 1` steps).
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub smoothness: T,
    pub dim: usize,
    pub records: Vec<StepRecord<T>>,
    iterates: BTreeMap<usize, Vec<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn horizon(&self) -> usize {
        self.records.len()
    }

    /// Record of `x_t`, 1-based.
    pub fn at(&self, t: usize) -> &StepRecord<T> {
        &self.records[t - 1]
    }

    pub fn last(&self) -> &StepRecord<T> {
        self.records.last().expect("trajectory has at least one point")
    }

    /// Retained iterate `x_t`, if any.
    pub fn iterate(&self, t: usize) -> Option<&[T]> {
        self.iterates.get(&t).map(Vec::as_slice)
    }

    pub fn retained(&self) -> impl Iterator<Item = usize> + '_ {
        self.iterates.keys().copied()
    }

    /// Applied stepsizes `alpha_1..alpha_{T-1}`.
    pub fn stepsizes(&self) -> Vec<T> {
        self.records.iter().filter_map(|r| r.alpha).collect()
    }
}

/// Options of [`run_source`] beyond the schedule and the start point.
#[derive(Clone, Debug, Default)]
pub struct EngineOptions<T> {
    pub retention: Retention,
    /// Extra vector `v`; each record then carries `<grad f(x_t), v> / L`.
    pub anchor: Option<Vec<T>>,
}

/// Runs `horizon - 1` GD steps from `x1`. Never stops early; aborts with
/// [`Error::NonFinite`] at the first non-finite value or gradient.
pub fn run_source<T: Scalar, O: Objective<T> + ?Sized>(
    obj: &O,
    x1: Vec<T>,
    source: &ScheduleSource<T>,
    horizon: usize,
    options: &EngineOptions<T>,
) -> Result<Trajectory<T>> {
    let dim = obj.dim();
    if horizon == 0 {
        return domain("horizon T must be at least 1");
    }
    if x1.len() != dim {
        return domain(format!("start point has dimension {}, objective {dim}", x1.len()));
    }
    if let Some(n) = source.available() {
        if n + 1 < horizon {
            return precondition(format!("schedule supplies {n} stepsizes but T = {horizon} needs {}", horizon - 1));
        }
    }
    if let Some(a) = &options.anchor {
        if a.len() != dim {
            return domain("anchor dimension mismatch");
        }
    }
    let full = match options.retention {
        Retention::Full => true,
        Retention::Sparse => false,
        Retention::Auto => dim.saturating_mul(horizon) <= FULL_RETENTION_BUDGET,
    };
    let l = obj.smoothness();
    let inv_l = l.recip();
    let x_star = obj.minimizer();

    let mut x = x1;
    let mut g = vec![T::zero(); dim];
    let mut records = Vec::with_capacity(horizon);
    let mut iterates = BTreeMap::new();
    let mut steps = source.steps();
    let mut prev_alpha = 0.0;
    for t in 1..=horizon {
        let f = obj.value_and_gradient(&x, &mut g);
        if !f.is_finite() {
            return Err(Error::NonFinite { step: t, quantity: "value", alpha: prev_alpha });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: t, quantity: "gradient", alpha: prev_alpha });
        }
        let next = if t < horizon { steps.next() } else { None };
        let gap = obj.gap(&x).map(|v| v * inv_l);
        let record = StepRecord {
            t,
            alpha: next.map(|(a, _)| a),
            is_join: next.is_some_and(|(_, j)| j),
            f: f * inv_l,
            gap,
            grad_sq: norm_sq(&g) * inv_l * inv_l,
            dist_sq: x_star.map(|s| dist_sq(&x, s)),
            grad_dot_error: x_star.map(|s| {
                let err: Vec<T> = x.iter().zip(s).map(|(&a, &b)| a - b).collect();
                dot(&g, &err) * inv_l
            }),
            grad_dot_anchor: options.anchor.as_ref().map(|a| dot(&g, a) * inv_l),
        };
        if full || t == 1 || t == horizon || record.is_join {
            iterates.insert(t, x.clone());
        }
        records.push(record);
        if let Some((alpha, _)) = next {
            let step = alpha / l;
            for (xi, &gi) in x.iter_mut().zip(&g) {
                *xi -= step * gi;
            }
            prev_alpha = alpha.as_f64();
        } else if t < horizon {
            return precondition(format!("schedule ran out after {} stepsizes", t - 1));
        }
    }
    Ok(Trajectory { smoothness: l, dim, records, iterates })
}

/// How to pick `x_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StartSpec {
    Point { x: Vec<f64> },
    /// Uniform in the ball of `radius` around the minimizer (or the origin
    /// when the minimizer is unknown).
    Ball { radius: f64, seed: u64 },
}

impl StartSpec {
    pub fn point<T: Scalar, O: Objective<T> + ?Sized>(&self, obj: &O) -> Result<Vec<T>> {
        match self {
            StartSpec::Point { x } => Ok(x.iter().map(|&v| T::lit(v)).collect()),
            StartSpec::Ball { radius, seed } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return domain(format!("start radius must be positive, got {radius}"));
                }
                let center = obj.minimizer().map(<[T]>::to_vec).unwrap_or_else(|| vec![T::zero(); obj.dim()]);
                Ok(ball_point(&mut seeded(*seed), &center, *radius))
            }
        }
    }
}

/// A complete, serializable description of one GD run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub objective: ObjectiveSpec,
    pub x1: StartSpec,
    pub schedule: ScheduleSpec,
    /// Stopping time `T`.
    pub horizon: usize,
    #[serde(default)]
    pub retention: Retention,
}

/// Builds the objective, the start point and the schedule from `config`
/// and runs GD. Deterministic given the config.
pub fn run<T: Scalar>(config: &RunConfig) -> Result<Trajectory<T>> {
    let obj = config.objective.build::<T>()?;
    let x1 = config.x1.point(&*obj)?;
    let source = config.schedule.source::<T>()?;
    let options = EngineOptions { retention: config.retention, anchor: None };
    run_source(&*obj, x1, &source, config.horizon, &options)
}

/// `(t, f_t - f*)` in the units of `f`, with rounding-level negatives
/// clamped to zero.
pub fn suboptimality_series<T: Scalar>(traj: &Trajectory<T>, f_star: T) -> Result<Vec<(usize, T)>> {
    if !f_star.is_finite() {
        return domain("f_star must be finite");
    }
    let l = traj.smoothness;
    let values: Vec<T> = traj.records.iter().map(|r| r.f * l).collect();
    let min_f = values.iter().copied().fold(T::infinity(), T::min);
    let scale = f_star.abs().max(min_f.abs()).max(T::min_positive_value());
    let tol = T::lit(1e-12).max(T::lit(4.0) * T::epsilon()) * scale;
    if f_star - min_f > tol {
        return Err(Error::Inconsistent { f_star: f_star.as_f64(), min_f: min_f.as_f64() });
    }
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(i, f)| (i + 1, (f - f_star).max(T::zero())))
        .collect())
}

/// Signed slacks `((a^2 + 2a)/2) ||g_t||^2 - (f_{t+1} - f_t)` of the one-step
/// descent bound, each relative to `|f_t| + |f_{t+1}| + bound`.
pub fn descent_bound_slacks<T: Scalar>(traj: &Trajectory<T>) -> Vec<f64> {
    traj.records
        .windows(2)
        .filter_map(|w| {
            let a = w[0].alpha?;
            let bound = (a * a + a + a) * T::lit(0.5) * w[0].grad_sq;
            let slack = bound - (w[1].f - w[0].f);
            let scale = (w[0].f.abs() + w[1].f.abs() + bound).max(T::min_positive_value());
            Some((slack / scale).as_f64())
        })
        .collect()
}
