use serde::Serialize;

use crate::error::{domain, Result};
use crate::scalar::theta;
use crate::schedule::{silver, AnytimeParams, AnytimeStream};
use crate::Scalar;

/// Least-squares fit of `ln value = intercept + slope ln T`, together with
/// `sup value T^theta` over the points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub sup_scaled: f64,
    pub points: usize,
}

pub fn rate_fit(series: &[(f64, f64)]) -> Result<RateFit> {
    if series.len() < 5 {
        return domain(format!("rate fit needs at least 5 points, got {}", series.len()));
    }
    if let Some(&(t, v)) = series.iter().find(|&&(t, v)| !(t > 0.0 && v > 0.0 && v.is_finite())) {
        return domain(format!("rate fit needs positive values, got ({t}, {v})"));
    }
    let (slope, intercept) = least_squares(series.iter().map(|&(t, v)| (t.ln(), v.ln())));
    let th = theta::<f64>();
    let sup_scaled = series.iter().map(|&(t, v)| v * t.powf(th)).fold(0.0, f64::max);
    Ok(RateFit { slope, intercept, sup_scaled, points: series.len() })
}

/// Ordinary least squares `y = b + m x`, returning `(m, b)`.
pub(crate) fn least_squares(points: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64) {
    let n = points.clone().count() as f64;
    let (sx, sy) = points.clone().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    let m = sxy / sxx;
    (m, my - m * mx)
}

/// Cumulative join counts of the silver and anytime schedules:
/// entry `t - 1` is the number of join steps among positions `1..=t`.
#[derive(Clone, Debug, PartialEq)]
pub struct JoinCensus {
    pub silver: Vec<u64>,
    pub anytime: Vec<u64>,
}

impl JoinCensus {
    pub fn t_max(&self) -> usize {
        self.anytime.len()
    }

    /// Log-log slope of the anytime count over geometrically spaced `t` in
    /// `[from, t_max]`.
    pub fn anytime_growth_exponent(&self, from: usize) -> Result<f64> {
        let t_max = self.t_max();
        if from < 1 || from * 4 > t_max {
            return domain("census range too short for a growth fit");
        }
        let n = 40;
        let ratio = (t_max as f64 / from as f64).ln();
        let mut points: Vec<(f64, f64)> = (0..n)
            .map(|i| (from as f64 * (ratio * i as f64 / (n - 1) as f64).exp()).round() as usize)
            .map(|t| t.clamp(from, t_max))
            .map(|t| ((t as f64).ln(), (self.anytime[t - 1] as f64).ln()))
            .collect();
        points.dedup();
        Ok(least_squares(points.into_iter()).0)
    }
}

/// Join counts up to `t_max` for the silver schedule (joins at powers of
/// two, read off a silver schedule long enough to cover `t_max`) and the
/// anytime schedule.
pub fn join_step_census<T: Scalar>(params: AnytimeParams<T>, t_max: usize) -> Result<JoinCensus> {
    if t_max < 2 {
        return domain("census needs t_max >= 2");
    }
    let order = usize::BITS - t_max.leading_zeros();
    let s = silver::<T>(order)?;
    let mut silver_counts = Vec::with_capacity(t_max);
    let mut count = 0;
    for t in 1..=t_max {
        if s.is_join(t) {
            count += 1;
        }
        silver_counts.push(count);
    }
    let mut stream = AnytimeStream::new(params);
    let mut anytime = Vec::with_capacity(t_max);
    let mut count = 0;
    for _ in 0..t_max {
        if stream.next_step().is_join {
            count += 1;
        }
        anytime.push(count);
    }
    Ok(JoinCensus { silver: silver_counts, anytime })
}
