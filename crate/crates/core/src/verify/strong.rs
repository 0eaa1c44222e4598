use serde::Serialize;

use super::fit::least_squares;
use super::worst_case::WorstCaseSeries;
use crate::error::{precondition, Result};
use crate::gd::{run_source, EngineOptions, Retention, ScheduleSource};
use crate::objectives::Objective;
use crate::report::VerificationReport;
use crate::scalar::{theta, varsigma};
use crate::schedule::{AnytimeParams, AnytimeStream, StronglyConvexSchedule};
use crate::Scalar;

/// Largest accepted per-period contraction of `||x - x*||^2`.
pub const CONTRACTION_ENVELOPE: f64 = 0.75;

#[derive(Clone, Debug, Serialize)]
pub struct StrongConvexOutcome {
    pub report: VerificationReport,
    pub tau: usize,
    /// Per-period ratios `||x_{i tau + 1} - x*||^2 / ||x_{(i-1) tau + 1} - x*||^2`.
    pub contractions: Vec<f64>,
    /// Fitted rate in `f_t - f* ~ C exp(-c_hat t)`.
    pub c_hat: f64,
    /// `c_hat kappa^varsigma`.
    pub c_hat_scaled: f64,
}

/// Runs the periodic schedule for `horizon >= 3 tau` steps and measures the
/// per-period contraction of the squared distance to the minimizer (each
/// must be at most [`CONTRACTION_ENVELOPE`]) and the linear rate of the
/// gap. Periods and gaps already at the rounding floor are left out.
pub fn check_strongly_convex<T: Scalar, O: Objective<T> + ?Sized>(
    schedule: &StronglyConvexSchedule<T>,
    obj: &O,
    x1: Vec<T>,
    horizon: usize,
) -> Result<StrongConvexOutcome> {
    let tau = schedule.tau();
    let Some(x_star) = obj.minimizer() else {
        return precondition("strongly convex check needs the minimizer");
    };
    if obj.optimum().is_none() || obj.strong_convexity() <= T::zero() {
        return precondition("strongly convex check needs f* and mu > 0");
    }
    if horizon < 3 * tau {
        return precondition(format!("horizon {horizon} shorter than three periods ({})", 3 * tau));
    }
    let options = EngineOptions { retention: Retention::Sparse, anchor: None };
    let traj = run_source(obj, x1, &ScheduleSource::Periodic(schedule.clone()), horizon, &options)?;
    let eps = T::epsilon().as_f64();
    let star_sq: f64 = x_star.iter().map(|v| v.as_f64().powi(2)).sum();
    let dist_floor = (16.0 * eps).powi(2) * star_sq + 1e-280;
    let l = obj.smoothness().as_f64();
    let gap_floor = 64.0 * eps * obj.optimum().expect("checked").as_f64().abs() / l + 1e-280;

    let mut contractions = Vec::new();
    let mut start = 1;
    while start + tau <= horizon {
        let d0 = traj.at(start).dist_sq.expect("minimizer known").as_f64();
        let d1 = traj.at(start + tau).dist_sq.expect("minimizer known").as_f64();
        if d0 <= dist_floor || d1 <= dist_floor {
            break;
        }
        contractions.push(d1 / d0);
        start += tau;
    }
    let points: Vec<(f64, f64)> = traj
        .records
        .iter()
        .map(|r| (r.t as f64, r.gap.expect("optimum known").as_f64()))
        .take_while(|&(_, g)| g > gap_floor)
        .map(|(t, g)| (t, g.ln()))
        .collect();
    let c_hat = if points.len() >= 2 { -least_squares(points.iter().copied()).0 } else { f64::NAN };
    let kappa = schedule.params().kappa.as_f64();
    let c_hat_scaled = c_hat * kappa.powf(varsigma::<f64>());
    let slacks: Vec<f64> = contractions.iter().map(|r| CONTRACTION_ENVELOPE - r).collect();
    let worst = contractions.iter().copied().fold(0.0, f64::max);
    let mut report = VerificationReport::from_slacks(
        "strongly_convex",
        format!("kappa={kappa},c0={},tau={tau},T={horizon}", schedule.params().c0),
        slacks,
        0.0,
    )
    .with_aux("tau", tau as f64)
    .with_aux("periods", contractions.len() as f64)
    .with_aux("worst_contraction", worst)
    .with_aux("c_hat", c_hat)
    .with_aux("c_hat_kappa_varsigma", c_hat_scaled)
    .with_aux("tau_bound", schedule.tau_bound().as_f64());
    report.pass = report.pass && c_hat > 0.0 && !contractions.is_empty();
    Ok(StrongConvexOutcome { report, tau, contractions, c_hat, c_hat_scaled })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct C0Calibration {
    /// `max_T F_T T^theta` over `1 <= T <= t_max`.
    pub c0: f64,
    pub argmax_t: usize,
    pub t_max: usize,
}

/// Smallest `C0` with `F_T T^theta <= C0` for the anytime schedule on the
/// worst-case quadratic family, `1 <= T <= t_max`. Every `T` is scanned on
/// the grid; the best candidates are refined.
pub fn calibrate_c0<T: Scalar>(params: AnytimeParams<T>, t_max: usize) -> Result<C0Calibration> {
    if t_max == 0 {
        return precondition("calibration needs t_max >= 1");
    }
    let th = theta::<f64>();
    let mut stream = AnytimeStream::new(params);
    let mut series = WorstCaseSeries::new();
    let mut scaled: Vec<(usize, f64)> = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        if t > 1 {
            series.push(stream.next_step().value.as_f64());
        }
        scaled.push((t, series.grid_value() * (t as f64).powf(th)));
    }
    scaled.sort_by(|a, b| b.1.total_cmp(&a.1));
    let values: Vec<f64> = {
        let mut s = AnytimeStream::new(params);
        (1..t_max).map(|_| s.next_step().value.as_f64()).collect()
    };
    let (argmax_t, c0) = scaled
        .iter()
        .take(16)
        .map(|&(t, _)| (t, super::worst_case_quadratic(&values[..t - 1]) * (t as f64).powf(th)))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(C0Calibration { c0, argmax_t, t_max })
}
