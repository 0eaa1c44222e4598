use super::phi::phi_unchecked;
use super::{naive_sum, FiniteSchedule, ScheduleKind};
use crate::error::{Error, Result};
use crate::Scalar;

/// Highest silver order built by [`silver`].
pub const SILVER_ORDER_CAP: u32 = 30;

/// The `order`-th silver schedule, of length `2^order - 1`.
///
/// Built by repeated self-concatenation starting from the null schedule.
/// The recorded join positions are the self-concatenation joins at
/// `2, 4, ..., 2^(order-1)`; the lone stepsize of the first-order schedule
/// is the base element and is not counted as a join.
pub fn silver<T: Scalar>(order: u32) -> Result<FiniteSchedule<T>> {
    silver_with_cap(order, SILVER_ORDER_CAP)
}

pub fn silver_with_cap<T: Scalar>(order: u32, cap: u32) -> Result<FiniteSchedule<T>> {
    if order > cap {
        return Err(Error::Resource {
            what: "silver order",
            requested: order as u64,
            cap: cap as u64,
        });
    }
    let values = silver_values(order);
    let joins = (1..order).map(|k| 1usize << k).collect();
    Ok(FiniteSchedule::from_parts_unchecked(
        values,
        ScheduleKind::Silver { order },
        joins,
    ))
}

pub(crate) fn silver_values<T: Scalar>(order: u32) -> Vec<T> {
    let mut values: Vec<T> = Vec::with_capacity((1usize << order) - 1);
    for _ in 0..order {
        double_silver(&mut values);
    }
    values
}

/// `v <- concat(v, v)` in place.
pub(crate) fn double_silver<T: Scalar>(values: &mut Vec<T>) {
    let sum = naive_sum(values);
    let n = values.len();
    values.reserve(n + 1);
    values.push(phi_unchecked(sum, sum));
    values.extend_from_within(..n);
}
