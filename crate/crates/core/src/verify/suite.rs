//! Named batteries of checks, as run by the `verify` command.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fit::join_step_census;
use super::lemmas::{
    check_checkpoint_rates, check_lemma_key, check_lemma_key2, check_lemma_key3, check_primitive_run, check_refine1,
    LemmaRun,
};
use super::rates::{check_intermediate_horizons, check_rate_separation, default_t_grid, RateSeries};
use super::schedules::{check_anytime_bounds, check_join_values, check_silver_identities, check_stepsizes_exceed_one};
use super::strong::check_strongly_convex;
use crate::error::{domain, Error, Result};
use crate::gd::StartSpec;
use crate::objectives::{Objective, ObjectiveSpec, QuadraticDiag};
use crate::report::VerificationReport;
use crate::rng::seeded;
use crate::schedule::{anytime_prefix, silver, strongly_convex_schedule, AnytimeParams};

/// Calibrated anytime constant: `max_T F_T T^theta` for `T <= 10^4`, attained
/// at `T = 1`. Default `C0` of the strongly convex schedule.
pub const DEFAULT_C0: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Silver,
    AnytimeBounds,
    Primitive,
    Lemmas,
    Rates,
    StronglyConvex,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "silver" => Suite::Silver,
            "anytime-bounds" => Suite::AnytimeBounds,
            "primitive" => Suite::Primitive,
            "lemmas" => Suite::Lemmas,
            "rates" => Suite::Rates,
            "strongly-convex" => Suite::StronglyConvex,
            "all" => Suite::All,
            other => return domain(format!("unknown suite {other:?}")),
        })
    }
}

impl Suite {
    pub const NAMES: [&'static str; 7] =
        ["silver", "anytime-bounds", "primitive", "lemmas", "rates", "strongly-convex", "all"];
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Horizon of the anytime bound scan.
    pub t_max: u64,
    /// Seeded instances per inequality battery.
    pub instances: usize,
    pub seed: u64,
    /// Horizon of the checkpoint-rate runs.
    pub checkpoint_horizon: usize,
    /// Horizons of the rate fits.
    pub t_grid: Vec<usize>,
    /// Largest exponent of the intermediate-horizon scan (`T <= 2^k`).
    pub intermediate_exp: u32,
    pub c0: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            t_max: 1_000_000,
            instances: 50,
            seed: 0,
            checkpoint_horizon: 10_000,
            t_grid: default_t_grid(),
            intermediate_exp: 12,
            c0: DEFAULT_C0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub entries: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rates: Vec<RateSeries>,
    pub pass: bool,
}

/// One seeded instance of the inequality batteries: quadratics and
/// log-sum-exp alternate, dimensions 2..=8.
pub fn battery_instance(i: usize, seed: u64) -> (ObjectiveSpec, StartSpec) {
    let dim = 2 + i % 7;
    let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
    let spec = if i % 2 == 0 {
        ObjectiveSpec::preset("quadratic", dim, s).expect("valid preset")
    } else {
        ObjectiveSpec::preset("log_sum_exp", dim, s).expect("valid preset")
    };
    (spec, StartSpec::Ball { radius: 1.0 + (i % 3) as f64, seed: s })
}

fn threshold(a: f64) -> f64 {
    (2f64.sqrt() - 1.0) * a + 2f64.sqrt()
}

fn battery<F>(name: &str, opts: &SuiteOptions, f: F) -> Result<VerificationReport>
where
    F: Fn(usize, &dyn Objective<f64>, Vec<f64>) -> Result<Vec<VerificationReport>> + Sync,
{
    let parts: Vec<Vec<VerificationReport>> = (0..opts.instances)
        .into_par_iter()
        .map(|i| {
            let (spec, start) = battery_instance(i, opts.seed);
            let obj = spec.build::<f64>()?;
            let x = start.point(&*obj)?;
            f(i, &*obj, x).map(|mut rs| {
                for r in &mut rs {
                    r.instance = format!("#{i} {} {}", spec.family(), r.instance);
                }
                rs
            })
        })
        .collect::<Result<_>>()?;
    let parts: Vec<VerificationReport> = parts.into_iter().flatten().collect();
    Ok(VerificationReport::merge(name, format!("{} instances, seed {}", opts.instances, opts.seed), &parts))
}

fn primitive_suite(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let params = AnytimeParams::<f64>::default();
    let checkpoints = params.checkpoint_lengths(1 << 20);
    let silver_part = battery("primitive_silver", opts, |i, obj, x| {
        Ok(vec![check_primitive_run(obj, x, &silver((1 + i % 8) as u32)?)?])
    })?;
    let anytime_part = battery("primitive_anytime", opts, |i, obj, x| {
        let t = checkpoints[i % 20] as usize;
        Ok(vec![check_primitive_run(obj, x, &anytime_prefix(t, params)?)?])
    })?;
    Ok(vec![silver_part, anytime_part])
}

fn lemmas_suite(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let order = |i: usize| (1 + i % 8) as u32;
    let key = battery("lemma_key", opts, |i, obj, x0| {
        let s = silver(order(i))?;
        Ok(vec![check_lemma_key(&LemmaRun::new(obj, &x0, threshold(s.aggregate()), &s)?)?])
    })?;
    let key3 = battery("lemma_key3", opts, |i, obj, x0| {
        let s = silver(order(i))?;
        Ok(vec![check_lemma_key3(&LemmaRun::new(obj, &x0, threshold(s.aggregate()), &s)?)?])
    })?;
    let key2 = battery("lemma_key2", opts, |i, obj, x0| {
        let s = silver(order(i))?;
        let a = s.aggregate();
        let alpha = if i % 2 == 0 { 1.0 } else { 1.0 + seeded(i as u64).random::<f64>() * (a + 1.0) };
        Ok(vec![check_lemma_key2(obj, &x0, alpha, &s)?])
    })?;
    let refine = battery("refine1", opts, |i, obj, x0| {
        let s = silver(order(i))?;
        let alpha = threshold(s.aggregate()) * (1.0 + seeded(i as u64).random::<f64>());
        Ok(vec![check_refine1(obj, &x0, &s, alpha)?])
    })?;
    let horizon = opts.checkpoint_horizon;
    let rates = battery("checkpoint_rates", opts, |_, obj, x1| {
        Ok(vec![check_checkpoint_rates(AnytimeParams::default(), obj, x1, horizon)?])
    })?;
    Ok(vec![key, key3, key2, refine, rates])
}

fn anytime_bounds_suite(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let params = AnytimeParams::<f64>::default();
    let mut out = vec![
        check_anytime_bounds(params, opts.t_max),
        check_join_values(params, opts.t_max),
        check_stepsizes_exceed_one(params, opts.t_max, 20),
    ];
    let census_t = (opts.t_max as usize).clamp(128, 100_000);
    let census = join_step_census(params, census_t)?;
    let exponent = census.anytime_growth_exponent(16)?;
    let target = crate::scalar::log2_rho::<f64>() / (1.0 + crate::scalar::log2_rho::<f64>());
    out.push(
        VerificationReport::from_slacks(
            "join_census",
            format!("t_max={census_t}"),
            vec![if census.silver[127] == 7 { 0.0 } else { -1.0 }, 0.1 - (exponent - target).abs()],
            0.0,
        )
        .with_aux("silver_joins_128", census.silver[127] as f64)
        .with_aux("anytime_joins_128", census.anytime[127] as f64)
        .with_aux("anytime_growth_exponent", exponent),
    );
    Ok(out)
}

/// Diagonal quadratic with `n` eigenvalues spread geometrically over
/// `[1/kappa, 1]` and minimizer at the origin.
pub fn conditioned_quadratic(kappa: f64, n: usize) -> Result<QuadraticDiag<f64>> {
    let spectrum = (0..n).map(|i| kappa.powf(-(i as f64) / (n - 1) as f64)).collect();
    QuadraticDiag::new(spectrum, vec![0.0; n])
}

fn strongly_convex_suite(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let mut scaled = Vec::new();
    for kappa in [10.0, 100.0] {
        let s = strongly_convex_schedule(kappa, opts.c0, AnytimeParams::default())?;
        let q = conditioned_quadratic(kappa, 50)?;
        let x1 = vec![1.0 / (50f64).sqrt(); 50];
        let outcome = check_strongly_convex(&s, &q, x1, 20 * s.tau() + 1)?;
        scaled.push(outcome.c_hat_scaled);
        out.push(outcome.report);
    }
    let ratio = scaled[0].max(scaled[1]) / scaled[0].min(scaled[1]);
    out.push(
        VerificationReport::from_slacks("strongly_convex_stability", "kappa in {10, 100}", vec![2.0 - ratio], 0.0)
            .with_aux("ratio", ratio)
            .with_aux("c_hat_kappa_varsigma_10", scaled[0])
            .with_aux("c_hat_kappa_varsigma_100", scaled[1]),
    );
    Ok(out)
}

/// Runs a battery. The overall flag is the conjunction of the entries.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut entries = Vec::new();
    let mut rates = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Silver {
        entries.push(check_silver_identities::<f64>(20));
    }
    if all || suite == Suite::AnytimeBounds {
        entries.extend(anytime_bounds_suite(opts)?);
    }
    if all || suite == Suite::Primitive {
        entries.extend(primitive_suite(opts)?);
    }
    if all || suite == Suite::Lemmas {
        entries.extend(lemmas_suite(opts)?);
    }
    if all || suite == Suite::Rates {
        let (report, series) = check_rate_separation(&opts.t_grid)?;
        entries.push(report);
        rates = series;
        entries.push(check_intermediate_horizons(opts.intermediate_exp)?);
    }
    if all || suite == Suite::StronglyConvex {
        entries.extend(strongly_convex_suite(opts)?);
    }
    let pass = entries.iter().all(|e| e.pass);
    let name = match suite {
        Suite::All => "all",
        s => Suite::NAMES[s as usize],
    };
    Ok(SuiteReport { suite: name.to_string(), entries, rates, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        for n in Suite::NAMES {
            let s: Suite = n.parse().unwrap();
            assert_eq!(Suite::NAMES[s as usize], n);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_batteries_pass() {
        let opts = SuiteOptions { instances: 6, checkpoint_horizon: 500, t_max: 5_000, ..SuiteOptions::default() };
        for suite in [Suite::Silver, Suite::Primitive, Suite::Lemmas, Suite::AnytimeBounds] {
            let r = run_suite(suite, &opts).unwrap();
            assert!(r.pass, "{suite:?}: {:#?}", r.entries);
        }
    }
}
