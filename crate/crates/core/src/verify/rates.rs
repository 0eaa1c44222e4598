//! Rate measurements on the worst-case quadratic family.

use serde::Serialize;

use super::fit::{rate_fit, RateFit};
use super::worst_case::worst_case_series;
use crate::error::Result;
use crate::report::VerificationReport;
use crate::scalar::theta;
use crate::schedule::{anytime_prefix, silver, AnytimeParams};

/// Default horizons of the rate fits: `16, 32, ..., 16384`.
pub fn default_t_grid() -> Vec<usize> {
    (4..=14).map(|k| 1usize << k).collect()
}

/// Bounds asserted on the fitted log-log slopes.
pub const CONSTANT_SLOPE_RANGE: (f64, f64) = (-1.05, -0.95);
pub const ANYTIME_SLOPE_MAX: f64 = -1.08;
pub const SILVER_SLOPE_MAX: f64 = -1.25;
/// Largest accepted `max / min` of `F_T T^theta` for the anytime schedule.
pub const ANYTIME_ENVELOPE_RATIO: f64 = 50.0;
/// Smallest accepted spike `F_T / F_{2^k}` inside each dyadic band of silver.
pub const SILVER_SPIKE_MIN: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct RateSeries {
    pub kind: String,
    pub horizons: Vec<usize>,
    pub values: Vec<f64>,
    pub fit: RateFit,
}

impl RateSeries {
    fn new(kind: &str, horizons: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let pts: Vec<(f64, f64)> = horizons.iter().zip(&values).map(|(&t, &v)| (t as f64, v)).collect();
        let fit = rate_fit(&pts)?;
        Ok(Self { kind: kind.to_string(), horizons, values, fit })
    }

    /// `max / min` of `F_T T^theta` over the series.
    pub fn envelope_ratio(&self) -> f64 {
        let th = theta::<f64>();
        let scaled: Vec<f64> = self.horizons.iter().zip(&self.values).map(|(&t, &v)| v * (t as f64).powf(th)).collect();
        let max = scaled.iter().copied().fold(0.0, f64::max);
        let min = scaled.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// Worst-case values of the constant `alpha = 1`, anytime and silver
/// schedules. Silver is evaluated only at `T = 2^k`, where its first
/// `T - 1 = 2^k - 1` stepsizes form the complete schedule of order `k`.
pub fn rate_series(horizons: &[usize]) -> Result<Vec<RateSeries>> {
    let t_max = horizons.iter().copied().max().unwrap_or(1);
    let constant = vec![1.0; t_max - 1];
    let anytime = anytime_prefix::<f64>(t_max.max(2) - 1, AnytimeParams::default())?;
    let mut out = vec![
        RateSeries::new("constant", horizons.to_vec(), worst_case_series(&constant, horizons))?,
        RateSeries::new("anytime", horizons.to_vec(), worst_case_series(anytime.values(), horizons))?,
    ];
    let silver_horizons: Vec<usize> = horizons.iter().copied().filter(|t| t.is_power_of_two()).collect();
    let order = t_max.ilog2();
    let s = silver::<f64>(order)?;
    out.push(RateSeries::new("silver", silver_horizons.clone(), worst_case_series(s.values(), &silver_horizons))?);
    Ok(out)
}

/// Slope and envelope assertions on [`rate_series`]. Slacks are distances
/// to the asserted bounds (nonnegative when they hold).
pub fn check_rate_separation(horizons: &[usize]) -> Result<(VerificationReport, Vec<RateSeries>)> {
    let series = rate_series(horizons)?;
    let slope = |k: &str| series.iter().find(|s| s.kind == k).map(|s| s.fit.slope).unwrap_or(f64::NAN);
    let c = slope("constant");
    let a = slope("anytime");
    let s = slope("silver");
    let ratio = series.iter().find(|s| s.kind == "anytime").map(|s| s.envelope_ratio()).unwrap_or(f64::NAN);
    let slacks = vec![
        c - CONSTANT_SLOPE_RANGE.0,
        CONSTANT_SLOPE_RANGE.1 - c,
        ANYTIME_SLOPE_MAX - a,
        SILVER_SLOPE_MAX - s,
        ANYTIME_ENVELOPE_RATIO - ratio,
    ];
    let report = VerificationReport::from_slacks(
        "rate_separation",
        format!("T in {}..={}", horizons.first().unwrap_or(&0), horizons.last().unwrap_or(&0)),
        slacks,
        0.0,
    )
    .with_aux("slope_constant", c)
    .with_aux("slope_anytime", a)
    .with_aux("slope_silver", s)
    .with_aux("anytime_envelope_ratio", ratio);
    Ok((report, series))
}

/// Intermediate horizons: for each band `2^k < T < 2^(k+1)`, `4 <= k < max_exp`,
/// silver's `F_T / F_{2^k}` must exceed [`SILVER_SPIKE_MIN`] somewhere, while
/// the anytime `F_T T^theta` stays within [`ANYTIME_ENVELOPE_RATIO`] over every
/// `16 <= T <= 2^max_exp`.
pub fn check_intermediate_horizons(max_exp: u32) -> Result<VerificationReport> {
    let t_max = 1usize << max_exp;
    let all: Vec<usize> = (16..=t_max).collect();
    let s = silver::<f64>(max_exp)?;
    let silver_f = worst_case_series(s.values(), &all);
    let anytime = anytime_prefix::<f64>(t_max - 1, AnytimeParams::default())?;
    let anytime_f = worst_case_series(anytime.values(), &all);
    let at = |t: usize| t - 16;
    let mut slacks = Vec::new();
    let mut report_aux = Vec::new();
    for k in 4..max_exp {
        let base = silver_f[at(1 << k)];
        let spike = ((1 << k) + 1..(1 << (k + 1)))
            .map(|t| silver_f[at(t)] / base)
            .fold(0.0, f64::max);
        slacks.push(spike / SILVER_SPIKE_MIN - 1.0);
        report_aux.push((format!("silver_spike_band_{k}"), spike));
    }
    let th = theta::<f64>();
    let scaled: Vec<f64> = all.iter().zip(&anytime_f).map(|(&t, &v)| v * (t as f64).powf(th)).collect();
    let max = scaled.iter().copied().fold(0.0, f64::max);
    let min = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    slacks.push(1.0 - (max / min) / ANYTIME_ENVELOPE_RATIO);
    let mut report = VerificationReport::from_slacks("intermediate_horizons", format!("T in 16..={t_max}"), slacks, 0.0)
        .with_aux("anytime_envelope_ratio", max / min)
        .with_aux("anytime_scaled_max", max)
        .with_aux("anytime_scaled_min", min);
    for (k, v) in report_aux {
        report = report.with_aux(k, v);
    }
    Ok(report)
}
