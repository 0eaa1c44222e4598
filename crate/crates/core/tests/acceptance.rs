//! Acceptance criteria, one PASS/FAIL line each. Every check compares the
//! library against an oracle rebuilt here from first principles.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use silverstep::gd::{descent_bound_slacks, run_source, EngineOptions, Retention, ScheduleSource, StartSpec};
use silverstep::schedule::{anytime_prefix, silver, strongly_convex_schedule, AnytimeParams, AnytimeStream};
use silverstep::verify::suite::conditioned_quadratic;
use silverstep::verify::{
    calibrate_c0, check_anytime_bounds, check_intermediate_horizons, check_join_values, check_rate_separation,
    check_silver_identities, check_stepsizes_exceed_one, check_strongly_convex, default_t_grid, join_step_census,
    run_suite, worst_case_quadratic, worst_case_series, Suite, SuiteOptions, CONTRACTION_ENVELOPE, DESCENT_TOL,
    IDENTITY_TOL, SLACK_TOL,
};
use silverstep::{Objective, ObjectiveSpec};

const RHO: f64 = 1.0 + std::f64::consts::SQRT_2;

fn log2_rho() -> f64 {
    RHO.log2()
}

fn theta() -> f64 {
    2.0 * log2_rho() / (1.0 + log2_rho())
}

/// Silver stepsize at 1-based position `j`: `1 + rho^(nu(j) - 1)`, with
/// `nu` the 2-adic valuation.
fn silver_oracle(j: usize) -> f64 {
    1.0 + RHO.powi(j.trailing_zeros() as i32 - 1)
}

/// One block of the anytime construction.
#[derive(Clone, Copy, Debug)]
struct Block {
    /// Position of its join step.
    start: usize,
    order: u32,
}

/// Blocks covering positions `1..=t_max`, from `k_j = floor(2 rho^j)`.
fn anytime_blocks(t_max: usize) -> Vec<Block> {
    let mut out = Vec::new();
    let mut start = 1;
    let mut j = 1u32;
    while start <= t_max {
        let k = (2.0 * RHO.powi(j as i32)).floor() as usize;
        for _ in 0..k {
            if start > t_max {
                break;
            }
            out.push(Block { start, order: j });
            start += 1 << j;
        }
        j += 1;
    }
    out
}

/// `ln((lambda/2) prod (1 - lambda a)^2)`.
fn log_objective(values: &[f64], lambda: f64) -> f64 {
    values.iter().fold((lambda / 2.0).ln(), |acc, a| acc + 2.0 * (1.0 - lambda * a).abs().ln())
}

/// Dense scan of `(0, 1]`: `n` uniform points plus `n` geometric points on `[1e-8, 1]`.
fn brute_force_worst_case(values: &[f64], n: usize) -> f64 {
    let best = (1..=n)
        .into_par_iter()
        .map(|i| {
            let u = i as f64 / n as f64;
            let g = (1e-8f64.ln() * (1.0 - (i - 1) as f64 / (n - 1) as f64)).exp();
            log_objective(values, u).max(log_objective(values, g))
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    best.exp()
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + (x - mx) * (y - my), b + (x - mx).powi(2)));
    sxy / sxx
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion(label: &str, name: &str, limit_s: Option<f64>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let secs = start.elapsed().as_secs_f64();
    let in_time = limit_s.is_none_or(|l| secs < l);
    let pass = o.pass && in_time;
    let limit = limit_s.map(|l| format!(" < {l}s")).unwrap_or_default();
    let timing = if in_time { format!("{secs:.2}s{limit}") } else { format!("{secs:.2}s exceeds{limit}") };
    println!("{label} {name}: {} ({timing}) {}", if pass { "PASS" } else { "FAIL" }, o.detail);
    pass
}

fn c1_silver_identities() -> Outcome {
    let report = check_silver_identities::<f64>(20);
    let mut worst_value = 0.0f64;
    let mut ok = report.pass;
    for i in 0..=20u32 {
        let s = silver::<f64>(i).unwrap();
        ok &= s.len() == (1usize << i) - 1;
        let sum: f64 = (1..1usize << i).map(silver_oracle).sum();
        ok &= (s.aggregate() - (RHO.powi(i as i32) - 1.0)).abs() <= 1e-9 * RHO.powi(i as i32);
        ok &= (sum - s.aggregate()).abs() <= 1e-9 * RHO.powi(i as i32);
        for (j, &v) in s.values().iter().enumerate() {
            worst_value = worst_value.max((v - silver_oracle(j + 1)).abs() / v);
        }
    }
    ok &= worst_value <= IDENTITY_TOL;
    outcome(ok, format!("orders 0..=20, worst stepsize deviation from 1 + rho^(nu(j)-1) {worst_value:.1e}"))
}

fn c2_anytime_bounds() -> Outcome {
    let t_max = 1_000_000usize;
    let params = AnytimeParams::<f64>::default();
    let report = check_anytime_bounds(params, t_max as u64);
    let s = anytime_prefix::<f64>(t_max, params).unwrap();
    let th = theta();
    let c = log2_rho();
    let mut aggregate = 0.0;
    let mut worst_ratio = f64::INFINITY;
    for (t, &a) in s.values().iter().enumerate() {
        let t = t + 1;
        aggregate += a;
        // aggregate now equals A_{t+1}
        worst_ratio = worst_ratio.min(aggregate / ((t as f64).powf(th) / 36.0));
    }
    let blocks = anytime_blocks(t_max);
    let mut order_ok = true;
    // o_t is constant on each block, so the bound is tightest at block starts
    for b in &blocks {
        let t = b.start as f64;
        order_ok &= 2f64.powi(b.order as i32) <= 2.0 * t.powf(1.0 / (c + 1.0)) * (1.0 + 1e-12);
    }
    let ok = report.pass && worst_ratio >= 1.0 && order_ok;
    outcome(ok, format!("t <= 1e6, min A_(t+1) / (t^theta/36) = {worst_ratio:.3}, order bound {}", if order_ok { "holds" } else { "violated" }))
}

fn c3_prefix_consistency() -> Outcome {
    let params = AnytimeParams::<f64>::default();
    let short = anytime_prefix::<f64>(10_000, params).unwrap();
    let long = anytime_prefix::<f64>(100_000, params).unwrap();
    let batch_ok = short.values().iter().zip(long.values()).all(|(a, b)| a.to_bits() == b.to_bits());
    let joins_ok = long.join_positions().iter().copied().filter(|&p| p <= 10_000).eq(short.join_positions().iter().copied());
    let stream_ok = AnytimeStream::new(params)
        .take(100_000)
        .zip(long.steps())
        .all(|(s, (v, j))| s.value.to_bits() == v.to_bits() && s.is_join == j);
    let s32 = anytime_prefix::<f32>(1000, AnytimeParams::default()).unwrap();
    let f32_ok = AnytimeStream::<f32>::new(AnytimeParams::default()).take(1000).zip(s32.values()).all(|(s, v)| s.value.to_bits() == v.to_bits());
    outcome(batch_ok && joins_ok && stream_ok && f32_ok, "1e4 vs 1e5 prefix and stream vs batch, bit-exact")
}

fn c4_stepsizes_and_joins() -> Outcome {
    let t_max = 1_000_000usize;
    let params = AnytimeParams::<f64>::default();
    let lib = check_stepsizes_exceed_one(params, t_max as u64, 20).pass && check_join_values(params, t_max as u64).pass;
    let s = anytime_prefix::<f64>(t_max, params).unwrap();
    let min_anytime = s.values().iter().copied().fold(f64::INFINITY, f64::min);
    let min_silver = (1..=20).map(|k| silver::<f64>(k).unwrap().values().iter().copied().fold(f64::INFINITY, f64::min)).fold(f64::INFINITY, f64::min);
    let blocks = anytime_blocks(t_max);
    let mut worst = f64::INFINITY;
    // the first block starts at position 1, before any checkpoint
    for b in &blocks[1..] {
        let y = RHO.powi(b.order as i32) - 1.0;
        let a = s.values()[b.start - 1];
        let lo = (std::f64::consts::SQRT_2 - 1.0) * y + std::f64::consts::SQRT_2;
        worst = worst.min((a - lo) / lo).min((y + 2.0 - a) / (y + 2.0));
    }
    let positions_ok = s.join_positions().iter().copied().eq(blocks.iter().map(|b| b.start));
    let ok = lib && min_anytime > 1.0 && min_silver > 1.0 && worst >= -1e-9 && positions_ok;
    outcome(ok, format!("min stepsize {:.6}, {} checkpoints, min relative join slack {worst:.2e}", min_anytime.min(min_silver), blocks.len() - 1))
}

fn c5_rate_separation() -> Outcome {
    let grid = default_t_grid();
    let (report, series) = check_rate_separation(&grid).unwrap();
    let get = |k: &str| series.iter().find(|s| s.kind == k).unwrap();
    let fit = |k: &str| {
        let s = get(k);
        slope(&s.horizons.iter().zip(&s.values).map(|(&t, &v)| ((t as f64).ln(), v.ln())).collect::<Vec<_>>())
    };
    let (c, a, s) = (fit("constant"), fit("anytime"), fit("silver"));
    let any = get("anytime");
    let scaled: Vec<f64> = any.horizons.iter().zip(&any.values).map(|(&t, &v)| v * (t as f64).powf(theta())).collect();
    let ratio = scaled.iter().copied().fold(0.0, f64::max) / scaled.iter().copied().fold(f64::INFINITY, f64::min);
    // brute-force spot checks of the series at the two shortest horizons
    let mut spot = 0.0f64;
    for (kind, values) in [
        ("constant", vec![1.0; 31]),
        ("anytime", anytime_prefix::<f64>(31, AnytimeParams::default()).unwrap().into_values()),
        ("silver", silver::<f64>(5).unwrap().into_values()),
    ] {
        let r = get(kind);
        for (&t, &v) in r.horizons.iter().zip(&r.values).take(2) {
            let b = brute_force_worst_case(&values[..t - 1], 200_000);
            spot = spot.max((v - b).abs() / b);
        }
    }
    let ok = report.pass
        && (-1.05..=-0.95).contains(&c)
        && a <= -1.08
        && s <= -1.25
        && ratio <= 50.0
        && spot <= 1e-6;
    outcome(ok, format!("slopes constant {c:.3}, anytime {a:.3}, silver {s:.3}; anytime envelope ratio {ratio:.2}; brute-force deviation {spot:.1e}"))
}

fn c6_intermediate() -> Outcome {
    let report = check_intermediate_horizons(12).unwrap();
    let horizons: Vec<usize> = (16..=4096).collect();
    let s = silver::<f64>(12).unwrap();
    let f = worst_case_series(s.values(), &horizons);
    let mut min_spike = f64::INFINITY;
    for k in 4..12 {
        let base = f[(1 << k) - 16];
        let spike = ((1usize << k) + 1..1 << (k + 1)).map(|t| f[t - 16] / base).fold(0.0, f64::max);
        min_spike = min_spike.min(spike);
    }
    let a = anytime_prefix::<f64>(4095, AnytimeParams::default()).unwrap();
    let fa = worst_case_series(a.values(), &horizons);
    let scaled: Vec<f64> = horizons.iter().zip(&fa).map(|(&t, &v)| v * (t as f64).powf(theta())).collect();
    let ratio = scaled.iter().copied().fold(0.0, f64::max) / scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let ok = report.pass && min_spike >= 10.0 && ratio <= 50.0;
    outcome(ok, format!("smallest silver spike over bands k=4..11: {min_spike:.1}; anytime envelope ratio over every T <= 4096: {ratio:.2}"))
}

fn c7_batteries() -> Outcome {
    let opts = SuiteOptions::default();
    let mut entries = run_suite(Suite::Primitive, &opts).unwrap().entries;
    entries.extend(run_suite(Suite::Lemmas, &opts).unwrap().entries);
    let checks = ["primitive_silver", "primitive_anytime", "lemma_key", "lemma_key3", "lemma_key2", "refine1", "checkpoint_rates"];
    let mut ok = checks.iter().all(|c| entries.iter().any(|e| e.check == *c));
    let mut worst = f64::INFINITY;
    for e in &entries {
        ok &= e.pass && e.min_slack >= -SLACK_TOL && e.aux("instances") == Some(50.0) && e.aux("failed") == Some(0.0);
        worst = worst.min(e.min_slack);
    }
    outcome(ok, format!("{} batteries x 50 instances, smallest normalized slack {worst:.2e}", entries.len()))
}

fn descent_on<O: Objective<f64> + ?Sized>(obj: &O, x1: Vec<f64>, source: &ScheduleSource<f64>, t: usize) -> (f64, usize) {
    let traj = run_source(obj, x1, source, t, &EngineOptions { retention: Retention::Sparse, anchor: None }).unwrap();
    let slacks = descent_bound_slacks(&traj);
    (slacks.iter().copied().fold(f64::INFINITY, f64::min), slacks.len())
}

fn c8_descent_bound() -> Outcome {
    let mut runs: Vec<(ObjectiveSpec, ScheduleSource<f64>, usize)> = Vec::new();
    let scalar = ObjectiveSpec::ScalarQuadratic { lambda: 1.0, x_star: 0.0, smoothness: 1.0 };
    runs.push((scalar.clone(), ScheduleSource::Constant(1.0), 16_384));
    runs.push((scalar.clone(), ScheduleSource::Anytime(AnytimeParams::default()), 16_384));
    runs.push((scalar, ScheduleSource::Finite(silver(14).unwrap()), 16_384));
    for family in ["quadratic", "least_squares", "log_sum_exp", "huber"] {
        for seed in 0..3 {
            let spec = ObjectiveSpec::preset(family, 6, seed).unwrap();
            runs.push((spec.clone(), ScheduleSource::Anytime(AnytimeParams::default()), 4096));
            runs.push((spec, ScheduleSource::Finite(silver(12).unwrap()), 4096));
        }
    }
    let results: Vec<(f64, usize)> = runs
        .par_iter()
        .map(|(spec, source, t)| {
            let obj = spec.build::<f64>().unwrap();
            let x1 = StartSpec::Ball { radius: 2.0, seed: 11 }.point(&*obj).unwrap();
            let x1 = if obj.dim() == 1 { vec![1.0] } else { x1 };
            descent_on(&*obj, x1, source, *t)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let steps: usize = results.iter().map(|r| r.1).sum();
    outcome(worst >= -DESCENT_TOL, format!("{} runs, {steps} steps, smallest relative slack {worst:.2e}", runs.len()))
}

fn c9_strongly_convex() -> Outcome {
    let cal = calibrate_c0(AnytimeParams::<f64>::default(), 10_000).unwrap();
    let n = 50;
    let x1 = vec![1.0 / (n as f64).sqrt(); n];
    let mut scaled = Vec::new();
    let mut ok = true;
    let mut detail = format!("C0 = {:.4};", cal.c0);
    for kappa in [10.0, 100.0] {
        let s = strongly_convex_schedule(kappa, cal.c0, AnytimeParams::default()).unwrap();
        let q = conditioned_quadratic(kappa, n).unwrap();
        let tau = s.tau();
        let out = check_strongly_convex(&s, &q, x1.clone(), 20 * tau + 1).unwrap();
        let spectrum: Vec<f64> = (0..n).map(|i| kappa.powf(-(i as f64) / (n - 1) as f64)).collect();
        // one period multiplies each coordinate's square by the same factor
        let factors: Vec<f64> =
            spectrum.iter().map(|&l| s.period().values().iter().map(|a| (1.0 - l * a).powi(2)).product()).collect();
        let dist = |i: i32| -> f64 { factors.iter().zip(&x1).map(|(f, x)| x * x * f.powi(i)).sum() };
        let exact: Vec<f64> = (0..20).map(|i| dist(i + 1) / dist(i)).collect();
        let worst = exact.iter().copied().fold(0.0, f64::max);
        let agree = out.contractions.iter().zip(&exact).all(|(a, b)| (a - b).abs() <= 1e-6 * b.max(1e-12));
        ok &= out.report.pass
            && out.contractions.len() >= 20
            && out.contractions.iter().all(|&c| c <= CONTRACTION_ENVELOPE)
            && worst <= CONTRACTION_ENVELOPE
            && agree
            && out.c_hat > 0.0;
        scaled.push(out.c_hat_scaled);
        detail += &format!(" kappa={kappa}: tau={tau}, worst contraction {:.3} (closed form {worst:.3}), c_hat kappa^varsigma {:.3};", out.contractions.iter().copied().fold(0.0, f64::max), out.c_hat_scaled);
    }
    let ratio = scaled[0].max(scaled[1]) / scaled[0].min(scaled[1]);
    ok &= ratio <= 2.0;
    outcome(ok, format!("{detail} ratio {ratio:.3}"))
}

fn c10_census() -> Outcome {
    let t_max = 100_000;
    let census = join_step_census(AnytimeParams::<f64>::default(), t_max).unwrap();
    let blocks = anytime_blocks(t_max);
    let mut counts = vec![0u64; t_max];
    for b in &blocks {
        counts[b.start - 1] += 1;
    }
    let mut acc = 0;
    for c in counts.iter_mut() {
        acc += *c;
        *c = acc;
    }
    let silver_128 = census.silver[127];
    let silver_oracle_128 = (1..=128usize).filter(|&t| t > 1 && t.is_power_of_two()).count() as u64;
    let points: Vec<(f64, f64)> = (0..40)
        .map(|i| (16.0 * ((t_max as f64 / 16.0).ln() * i as f64 / 39.0).exp()).round() as usize)
        .map(|t| ((t as f64).ln(), (counts[t.min(t_max) - 1] as f64).ln()))
        .collect();
    let exponent = slope(&points);
    let lib_exponent = census.anytime_growth_exponent(16).unwrap();
    let target = log2_rho() / (1.0 + log2_rho());
    let ok = silver_128 == 7
        && silver_oracle_128 == 7
        && census.anytime == counts
        && (exponent - target).abs() <= 0.1
        && (lib_exponent - target).abs() <= 0.1;
    outcome(ok, format!("silver joins in 128 steps: {silver_128}; anytime joins in 128 steps: {} (enumeration {}); growth exponent {exponent:.3} (library {lib_exponent:.3}, target {target:.3})", census.anytime[127], counts[127]))
}

fn c11_oracle() -> Outcome {
    let cases: [(&[f64], f64, &str); 3] = [(&[], 0.5, "1/2"), (&[1.0], 2.0 / 27.0, "2/27"), (&[2.0], 1.0 / 27.0, "1/27")];
    let mut ok = true;
    let mut parts = Vec::new();
    for (values, stated, label) in cases {
        let lib = worst_case_quadratic::<f64>(values);
        let brute = brute_force_worst_case(values, 1_000_000);
        let agree = (lib - brute).abs() <= 1e-6 * brute;
        let matches = (lib - stated).abs() <= 1e-6 * stated && (brute - stated).abs() <= 1e-6 * stated;
        ok &= agree && matches;
        parts.push(format!("{values:?}: oracle {lib:.6}, brute force {brute:.6}, stated {label}{}", if matches { "" } else { " MISMATCH" }));
    }
    outcome(ok, parts.join("; "))
}

fn random_prefix_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(1..64);
        let values: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..6.0)).collect();
        let lib = worst_case_quadratic::<f64>(&values);
        let brute = brute_force_worst_case(&values, 200_000);
        worst = worst.max((lib - brute).abs() / brute);
    }
    outcome(worst <= 1e-6, format!("20 random prefixes, worst relative deviation {worst:.1e}"))
}

fn main() -> ExitCode {
    let results = [
        criterion("criterion  1", "silver identities", Some(1.0), c1_silver_identities),
        criterion("criterion  2", "anytime bounds", Some(10.0), c2_anytime_bounds),
        criterion("criterion  3", "prefix consistency", None, c3_prefix_consistency),
        criterion("criterion  4", "stepsizes above one and join values", None, c4_stepsizes_and_joins),
        criterion("criterion  5", "rate separation", Some(120.0), c5_rate_separation),
        criterion("criterion  6", "intermediate horizons", None, c6_intermediate),
        criterion("criterion  7", "inequality batteries", Some(120.0), c7_batteries),
        criterion("criterion  8", "per-step descent bound", None, c8_descent_bound),
        criterion("criterion  9", "strongly convex restarts", Some(60.0), c9_strongly_convex),
        criterion("criterion 10", "join census", None, c10_census),
        criterion("criterion 11", "worst-case oracle", None, c11_oracle),
    ];
    let extra = criterion("supplementary", "oracle on random prefixes", None, random_prefix_cross_check);
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria pass", results.len());
    if results.iter().all(|&p| p) && extra {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
