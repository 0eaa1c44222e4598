use super::{tol_for, IDENTITY_TOL};
use crate::report::VerificationReport;
use crate::scalar::aggregate_exponent;
use crate::schedule::{silver_with_cap, AnytimeParams, AnytimeStream, SILVER_ORDER_CAP};
use crate::Scalar;

/// Length, aggregate and nesting of the silver schedules of order
/// `1..=max_order`: `|s_i| = 2^i - 1`, `sum s_i = rho^i - 1` and `s_i` is a
/// prefix of `s_{max_order}`.
pub fn check_silver_identities<T: Scalar>(max_order: u32) -> VerificationReport {
    let tol = tol_for::<T>(IDENTITY_TOL);
    let instance = format!("orders 1..={max_order}");
    let largest = match silver_with_cap::<T>(max_order, SILVER_ORDER_CAP) {
        Ok(s) => s,
        Err(e) => return VerificationReport::flag("silver_identities", format!("{instance}: {e}"), false),
    };
    let rho = 1.0 + 2f64.sqrt();
    let mut slacks = Vec::new();
    let mut length_failures = 0;
    let mut nesting_failures = 0;
    let mut worst_rel = 0f64;
    for i in 1..=max_order {
        let s = silver_with_cap::<T>(i, SILVER_ORDER_CAP).expect("order below cap");
        if s.len() != (1usize << i) - 1 {
            length_failures += 1;
            slacks.push(-1.0);
        }
        if s.values() != &largest.values()[..s.len()] {
            nesting_failures += 1;
            slacks.push(-1.0);
        }
        let rho_i = rho.powi(i as i32);
        let rel = (s.aggregate().as_f64() - (rho_i - 1.0)).abs() / rho_i;
        worst_rel = worst_rel.max(rel);
        slacks.push(-rel);
    }
    VerificationReport::from_slacks("silver_identities", instance, slacks, tol)
        .with_aux("worst_relative_aggregate_error", worst_rel)
        .with_aux("length_failures", length_failures as f64)
        .with_aux("nesting_failures", nesting_failures as f64)
}

/// Streams the anytime schedule up to `t_max` and checks, for every `t`,
/// `A_{t+1} >= t^((c + log2 rho)/(c + 1)) / 36` and
/// `2^(o_t) <= 2 t^(1/(c+1))`. Slacks are `observed / bound - 1` and
/// `1 - lhs / bound`; only the per-inequality minima are kept.
pub fn check_anytime_bounds<T: Scalar>(params: AnytimeParams<T>, t_max: u64) -> VerificationReport {
    let c = params.c().as_f64();
    let exponent = aggregate_exponent(c);
    let mut stream = AnytimeStream::new(params);
    let mut aggregate = 0f64;
    let mut worst_a = f64::INFINITY;
    let mut worst_a_at = 0;
    let mut worst_o = f64::INFINITY;
    let mut order_mismatches = 0u64;
    for t in 1..=t_max {
        let step = stream.next_step();
        aggregate += step.value.as_f64();
        let tf = t as f64;
        let ratio = aggregate / (tf.powf(exponent) / 36.0) - 1.0;
        if ratio < worst_a {
            worst_a = ratio;
            worst_a_at = t;
        }
        let o = params.o_t(t);
        if o != step.order {
            order_mismatches += 1;
        }
        let ratio = 1.0 - 2f64.powi(o as i32) / (2.0 * tf.powf(1.0 / (c + 1.0)));
        worst_o = worst_o.min(ratio);
    }
    let mut slacks = vec![worst_a, worst_o];
    if order_mismatches > 0 {
        slacks.push(-1.0);
    }
    VerificationReport::from_slacks("anytime_bounds", format!("c={c},t_max={t_max}"), slacks, 0.0)
        .with_aux("min_aggregate_ratio_minus_one", worst_a)
        .with_aux("argmin_t", worst_a_at as f64)
        .with_aux("min_order_slack", worst_o)
        .with_aux("order_mismatches", order_mismatches as f64)
}

/// Join stepsizes at the checkpoints `t_i + 1` (`i >= 1`) against
/// `(sqrt2 - 1) y + sqrt2 <= alpha <= y + 2` with `y = rho^o - 1`.
pub fn check_join_values<T: Scalar>(params: AnytimeParams<T>, t_max: u64) -> VerificationReport {
    let tol = tol_for::<T>(IDENTITY_TOL);
    let rho = 1.0 + 2f64.sqrt();
    let checkpoints = params.checkpoint_lengths(t_max);
    let mut stream = AnytimeStream::new(params);
    let mut slacks = Vec::with_capacity(2 * checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    let mut joins_seen = 0u64;
    let mut misplaced = 0u64;
    for t in 1..=t_max {
        let step = stream.next_step();
        let at_checkpoint = next.peek().is_some_and(|&&ti| ti + 1 == t);
        if at_checkpoint {
            next.next();
        }
        if step.is_join != (at_checkpoint || t == 1) {
            misplaced += 1;
        }
        if !at_checkpoint {
            continue;
        }
        joins_seen += 1;
        let a = step.value.as_f64();
        let y = rho.powi(step.order as i32) - 1.0;
        let lo = (2f64.sqrt() - 1.0) * y + 2f64.sqrt();
        slacks.push((a - lo) / lo);
        slacks.push((y + 2.0 - a) / (y + 2.0));
    }
    if misplaced > 0 {
        slacks.push(-1.0);
    }
    VerificationReport::from_slacks("join_values", format!("t_max={t_max}"), slacks, tol)
        .with_aux("checkpoints", joins_seen as f64)
        .with_aux("misplaced_joins", misplaced as f64)
}

/// Every stepsize of the anytime schedule up to `t_max` and of the silver
/// schedules up to `max_order` is strictly greater than one.
pub fn check_stepsizes_exceed_one<T: Scalar>(params: AnytimeParams<T>, t_max: u64, max_order: u32) -> VerificationReport {
    let mut slacks = Vec::new();
    let mut min_value = f64::INFINITY;
    let mut stream = AnytimeStream::new(params);
    for _ in 0..t_max {
        min_value = min_value.min(stream.next_step().value.as_f64());
    }
    slacks.push(min_value - 1.0);
    let mut min_silver = f64::INFINITY;
    if max_order >= 1 {
        match silver_with_cap::<T>(max_order, SILVER_ORDER_CAP) {
            Ok(s) => min_silver = s.values().iter().fold(f64::INFINITY, |m, v| m.min(v.as_f64())),
            Err(_) => slacks.push(-1.0),
        }
        slacks.push(min_silver - 1.0);
    }
    let mut report = VerificationReport::from_slacks(
        "stepsizes_exceed_one",
        format!("t_max={t_max},max_order={max_order}"),
        slacks,
        0.0,
    );
    // strict inequality: a value of exactly one fails
    report.pass = report.pass && report.min_slack > 0.0;
    report.with_aux("min_anytime", min_value).with_aux("min_silver", min_silver)
}
