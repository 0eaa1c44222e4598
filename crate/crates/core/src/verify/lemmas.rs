//! Trajectory inequalities of primitive schedules.
//!
//! All quantities are those of `f / L` (see [`crate::gd`]).

use super::{tol_for, DESCENT_TOL, SLACK_TOL};
use crate::error::{precondition, Result};
use crate::gd::{descent_bound_slacks, run_source, EngineOptions, Retention, ScheduleSource, Trajectory};
use crate::objectives::linalg::{dist_sq, norm_sq};
use crate::objectives::Objective;
use crate::report::VerificationReport;
use crate::schedule::{AnytimeParams, FiniteSchedule, ScheduleKind};
use crate::Scalar;

fn scale_or_one(s: f64) -> f64 {
    if s > 0.0 && s.is_finite() {
        s
    } else {
        1.0
    }
}

fn aggregates<T: Scalar>(alphas: &[T]) -> (f64, f64) {
    let a = alphas.iter().fold(0.0, |acc, v| acc + v.as_f64());
    (a, a * (a + 1.0) / 2.0)
}

/// The primitive-schedule chain at the final index `k` of `traj`:
/// `A_k (f_k - f*) + C_k ||g_k||^2 + 1/2 ||x_k - x*||^2 <= M <= 1/2 ||x_1 - x*||^2`
/// with `M = 1/2 ||x_1 - x*||^2 + sum_i alpha_i (f_i - f* - <g_i, x_i - x*> + 1/2 ||g_i||^2)`.
/// Slacks `M - lhs` and `1/2 ||x_1 - x*||^2 - lhs`, over `||x_1 - x*||^2`.
pub fn check_primitive<T: Scalar>(traj: &Trajectory<T>) -> Result<VerificationReport> {
    let first = traj.at(1);
    let last = traj.last();
    let need = "primitive check needs the minimizer and optimum of the objective";
    let (Some(d1), Some(dk), Some(gap_k)) = (first.dist_sq, last.dist_sq, last.gap) else {
        return precondition(need);
    };
    let (a, c) = aggregates(&traj.stepsizes());
    let lhs = a * gap_k.as_f64() + c * last.grad_sq.as_f64() + 0.5 * dk.as_f64();
    let half_d1 = 0.5 * d1.as_f64();
    let mut middle = half_d1;
    for r in &traj.records[..traj.horizon() - 1] {
        let (Some(gap), Some(gde), Some(alpha)) = (r.gap, r.grad_dot_error, r.alpha) else {
            return precondition(need);
        };
        middle += alpha.as_f64() * (gap.as_f64() - gde.as_f64() + 0.5 * r.grad_sq.as_f64());
    }
    let scale = scale_or_one(d1.as_f64());
    let tol = tol_for::<T>(SLACK_TOL);
    Ok(VerificationReport::from_slacks(
        "primitive",
        format!("k={}", traj.horizon()),
        vec![(middle - lhs) / scale, (half_d1 - lhs) / scale],
        tol,
    )
    .with_aux("scale", scale)
    .with_aux("lhs", lhs)
    .with_aux("middle", middle)
    .with_aux("rhs", half_d1))
}

/// Runs `prefix` from `x1` and applies [`check_primitive`].
pub fn check_primitive_run<T: Scalar, O: Objective<T> + ?Sized>(
    obj: &O,
    x1: Vec<T>,
    prefix: &FiniteSchedule<T>,
) -> Result<VerificationReport> {
    let options = EngineOptions { retention: Retention::Sparse, anchor: None };
    let traj = run_source(obj, x1, &ScheduleSource::Finite(prefix.clone()), prefix.len() + 1, &options)?;
    let mut r = check_primitive(&traj)?;
    r.instance = format!("{} len={}", prefix.kind().name(), prefix.len());
    Ok(r)
}

/// A base point `x_0`, one pre-step `x_1 = x_0 - alpha_0 g_0` and a GD run
/// of `prefix` from `x_1`.
#[derive(Clone, Debug)]
pub struct LemmaRun<T> {
    pub x0: Vec<T>,
    /// `f(x_0) / L`.
    pub f0: T,
    /// `grad f(x_0) / L`.
    pub g0: Vec<T>,
    pub alpha0: T,
    pub traj: Trajectory<T>,
}

impl<T: Scalar> LemmaRun<T> {
    pub fn new<O: Objective<T> + ?Sized>(obj: &O, x0: &[T], alpha0: T, prefix: &FiniteSchedule<T>) -> Result<Self> {
        let l = obj.smoothness();
        let mut g = vec![T::zero(); obj.dim()];
        let f0 = obj.value_and_gradient(x0, &mut g);
        let step = alpha0 / l;
        let x1: Vec<T> = x0.iter().zip(&g).map(|(&x, &gi)| x - step * gi).collect();
        let g0: Vec<T> = g.iter().map(|&v| v / l).collect();
        let options = EngineOptions { retention: Retention::Sparse, anchor: Some(g0.clone()) };
        let traj = run_source(obj, x1, &ScheduleSource::Finite(prefix.clone()), prefix.len() + 1, &options)?;
        Ok(Self { x0: x0.to_vec(), f0: f0 / l, g0, alpha0, traj })
    }

    fn g0_sq(&self) -> f64 {
        norm_sq(&self.g0).as_f64()
    }

    fn k(&self) -> usize {
        self.traj.horizon()
    }
}

/// `A_k (f_k - f_0) + 1/2 ||x_k - x_0||^2 + C_k ||g_k||^2
///   <= 1/2 ||x_1 - x_0||^2 + sum_i alpha_i <g_i, g_0> - (A_k/2) ||g_0||^2`,
/// relative to `||x_1 - x_0||^2 + ||g_0||^2`.
pub fn check_lemma_key<T: Scalar>(run: &LemmaRun<T>) -> Result<VerificationReport> {
    let traj = &run.traj;
    let k = run.k();
    let (Some(x1), Some(xk)) = (traj.iterate(1), traj.iterate(k)) else {
        return precondition("lemma check needs x_1 and x_k retained");
    };
    let (a, c) = aggregates(&traj.stepsizes());
    let last = traj.last();
    let lhs = a * (last.f - run.f0).as_f64() + 0.5 * dist_sq(xk, &run.x0).as_f64() + c * last.grad_sq.as_f64();
    let d01 = dist_sq(x1, &run.x0).as_f64();
    let mut inner = 0.0;
    for r in &traj.records[..k - 1] {
        let (Some(alpha), Some(ga)) = (r.alpha, r.grad_dot_anchor) else {
            return precondition("lemma check needs the anchor products");
        };
        inner += alpha.as_f64() * ga.as_f64();
    }
    let rhs = 0.5 * d01 + inner - 0.5 * a * run.g0_sq();
    let scale = scale_or_one(d01 + run.g0_sq());
    Ok(
        VerificationReport::from_slacks("lemma_key", format!("k={k}"), vec![(rhs - lhs) / scale], tol_for::<T>(SLACK_TOL))
            .with_aux("scale", scale)
            .with_aux("lhs", lhs)
            .with_aux("rhs", rhs),
    )
}

/// `C_k ||g_k||^2 <= (a0^2/2 + (A_k+1)^2/2 - a0 - A_k/2) ||g_0||^2` and
/// `f_k - f_0 <= (a0^2/2 - A_k/2 - a0 + 1/2) ||g_0||^2 / A_k`, relative to
/// `||g_0||^2`.
pub fn check_lemma_key3<T: Scalar>(run: &LemmaRun<T>) -> Result<VerificationReport> {
    let (a, c) = aggregates(&run.traj.stepsizes());
    if a <= 0.0 {
        return precondition("gradient-norm bounds need a nonempty prefix");
    }
    let a0 = run.alpha0.as_f64();
    let g0 = run.g0_sq();
    let last = run.traj.last();
    let we1 = (0.5 * a0 * a0 + 0.5 * (a + 1.0) * (a + 1.0) - a0 - 0.5 * a) * g0 - c * last.grad_sq.as_f64();
    let we2 = (0.5 * a0 * a0 - 0.5 * a - a0 + 0.5) * g0 / a - (last.f - run.f0).as_f64();
    let scale = scale_or_one(g0);
    Ok(VerificationReport::from_slacks(
        "lemma_key3",
        format!("k={},alpha0={a0}", run.k()),
        vec![we1 / scale, we2 / scale],
        tol_for::<T>(SLACK_TOL),
    )
    .with_aux("scale", scale)
    .with_aux("gradient_slack", we1)
    .with_aux("value_slack", we2))
}

/// For `alpha in [1, A_l + 2)`:
/// `f_0 - f_l >= (A_l + 3a - 2a^2)/(2(A_l + 2 - a)) ||g_0||^2
///            + (2A_l^2 + 3A_l + a)/(2(A_l + 2 - a)) ||g_l||^2`.
/// `alpha` within `1e-6` of `A_l + 2` is capped there; outside the interval
/// it is a precondition error.
pub fn check_lemma_key2<T: Scalar, O: Objective<T> + ?Sized>(
    obj: &O,
    x0: &[T],
    alpha: T,
    prefix: &FiniteSchedule<T>,
) -> Result<VerificationReport> {
    let a = prefix.aggregate().as_f64();
    let mut al = alpha.as_f64();
    if !(al >= 1.0 && al < a + 2.0) {
        return precondition(format!("alpha = {al} outside [1, A + 2) = [1, {})", a + 2.0));
    }
    let cap = a + 2.0 - 1e-6;
    let capped = al > cap;
    if capped {
        al = cap;
    }
    let run = LemmaRun::new(obj, x0, T::lit(al), prefix)?;
    let al = run.alpha0.as_f64();
    let den = 2.0 * (a + 2.0 - al);
    let c1 = (a + 3.0 * al - 2.0 * al * al) / den;
    let c2 = (2.0 * a * a + 3.0 * a + al) / den;
    let g0 = run.g0_sq();
    let last = run.traj.last();
    let slack = (run.f0 - last.f).as_f64() - c1 * g0 - c2 * last.grad_sq.as_f64();
    let scale = scale_or_one(g0);
    Ok(VerificationReport::from_slacks(
        "lemma_key2",
        format!("k={},alpha={al}", run.k()),
        vec![slack / scale],
        tol_for::<T>(SLACK_TOL),
    )
    .with_aux("scale", scale)
    .with_aux("alpha_capped", f64::from(u8::from(capped))))
}

/// For the silver schedule of order `i >= 1` after a pre-step
/// `alpha >= (sqrt2 - 1) A + sqrt2`:
/// `f_l - f_0 <= 432 alpha^2 ||g_0||^2` for `1 <= l <= 2^i - 1`.
/// Also records the worst ratio `(f_l - f_0) / (alpha^2 ||g_0||^2)`.
pub fn check_refine1<T: Scalar, O: Objective<T> + ?Sized>(
    obj: &O,
    x0: &[T],
    prefix: &FiniteSchedule<T>,
    alpha: T,
) -> Result<VerificationReport> {
    let ScheduleKind::Silver { order } = *prefix.kind() else {
        return precondition("refinement bound applies to silver schedules");
    };
    if order < 1 {
        return precondition("refinement bound needs order >= 1");
    }
    let a = prefix.aggregate().as_f64();
    let threshold = (2f64.sqrt() - 1.0) * a + 2f64.sqrt();
    if alpha.as_f64() < threshold {
        return precondition(format!("alpha = {alpha} below (sqrt2 - 1) A + sqrt2 = {threshold}"));
    }
    let run = LemmaRun::new(obj, x0, alpha, prefix)?;
    let al = alpha.as_f64();
    let g0 = run.g0_sq();
    let bound = 432.0 * al * al * g0;
    let scale = scale_or_one(g0);
    let mut slacks = Vec::with_capacity(run.k());
    let mut worst_ratio = f64::NEG_INFINITY;
    for r in &run.traj.records[..run.k() - 1] {
        let rise = (r.f - run.f0).as_f64();
        slacks.push((bound - rise) / scale);
        if g0 > 0.0 {
            worst_ratio = worst_ratio.max(rise / (al * al * g0));
        }
    }
    Ok(VerificationReport::from_slacks(
        "refine1",
        format!("order={order},alpha={al}"),
        slacks,
        tol_for::<T>(SLACK_TOL),
    )
    .with_aux("scale", scale)
    .with_aux("worst_ratio", worst_ratio))
}

/// At every checkpoint `t_i + 1 <= horizon` of the anytime schedule:
/// `f - f* <= D^2 / A`, `||g||^2 <= D^2 / (2C)` and `||g||^2 <= D^2 / A^2`
/// with `D = ||x_1 - x*||` and `A, C` at `t_i + 1`.
pub fn check_checkpoint_rates<T: Scalar, O: Objective<T> + ?Sized>(
    params: AnytimeParams<T>,
    obj: &O,
    x1: Vec<T>,
    horizon: usize,
) -> Result<VerificationReport> {
    if obj.minimizer().is_none() || obj.optimum().is_none() {
        return precondition("checkpoint rates need the minimizer and optimum");
    }
    let options = EngineOptions { retention: Retention::Sparse, anchor: None };
    let traj = run_source(obj, x1, &ScheduleSource::Anytime(params), horizon, &options)?;
    let d1 = traj.at(1).dist_sq.expect("minimizer known").as_f64();
    let scale = scale_or_one(d1);
    let mut prefix = Vec::with_capacity(horizon);
    let mut acc = 0.0;
    prefix.push(0.0);
    for a in traj.stepsizes() {
        acc += a.as_f64();
        prefix.push(acc);
    }
    let mut slacks = Vec::new();
    let mut count = 0;
    for ti in params.checkpoint_lengths(horizon.saturating_sub(1) as u64) {
        let idx = ti as usize + 1;
        let r = traj.at(idx);
        let a = prefix[idx - 1];
        let c = a * (a + 1.0) / 2.0;
        let gap = r.gap.expect("optimum known").as_f64();
        let g = r.grad_sq.as_f64();
        slacks.push((d1 / a - gap) / scale);
        slacks.push((d1 / (2.0 * c) - g) / scale);
        slacks.push((d1 / (a * a) - g) / scale);
        count += 1;
    }
    Ok(VerificationReport::from_slacks(
        "checkpoint_rates",
        format!("T={horizon}"),
        slacks,
        tol_for::<T>(SLACK_TOL),
    )
    .with_aux("scale", scale)
    .with_aux("checkpoints", count as f64))
}

/// One-step descent bound at every step of `traj`.
pub fn check_descent_bound<T: Scalar>(traj: &Trajectory<T>, instance: impl Into<String>) -> VerificationReport {
    VerificationReport::from_slacks("descent_bound", instance, descent_bound_slacks(traj), tol_for::<T>(DESCENT_TOL))
}

#[cfg(test)]
mod tests;
