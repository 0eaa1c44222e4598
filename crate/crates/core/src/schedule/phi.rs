use super::{naive_sum, FiniteSchedule, ScheduleKind};
use crate::error::{domain, Result};
use crate::Scalar;

/// Join stepsize `phi(x, y)` for concatenating primitive schedules with
/// aggregates `x` and `y`.
///
/// Evaluated as `2(xy + 2x + 2y + 2) / (s + sqrt(D))` with `s = x + y` and
/// `D = (s + 2)^2 + 4(x + 1)(y + 1)`, which avoids the cancellation in
/// `(-s + sqrt(D)) / 2` for large aggregates.
pub fn phi<T: Scalar>(x: T, y: T) -> Result<T> {
    if !(x.is_finite() && y.is_finite()) || x < T::zero() || y < T::zero() {
        return domain(format!("phi requires finite nonnegative arguments, got ({x}, {y})"));
    }
    Ok(phi_unchecked(x, y))
}

#[inline]
pub(crate) fn phi_unchecked<T: Scalar>(x: T, y: T) -> T {
    let one = T::one();
    let two = one + one;
    let four = two + two;
    let s = x + y;
    let d = (s + two) * (s + two) + four * (x + one) * (y + one);
    two * (x * y + two * x + two * y + two) / (s + d.sqrt())
}

/// `[s, phi(sum s, sum r), r]`.
///
/// Join positions of `s` are kept, the new join lands at `|s| + 1`, and the
/// joins of `r` are shifted by `|s| + 1`.
pub fn concat<T: Scalar>(s: &FiniteSchedule<T>, r: &FiniteSchedule<T>) -> FiniteSchedule<T> {
    let join = phi_unchecked(naive_sum(s.values()), naive_sum(r.values()));
    let offset = s.len() + 1;

    let mut values = Vec::with_capacity(s.len() + r.len() + 1);
    values.extend_from_slice(s.values());
    values.push(join);
    values.extend_from_slice(r.values());

    let mut joins = Vec::with_capacity(s.join_positions().len() + r.join_positions().len() + 1);
    joins.extend_from_slice(s.join_positions());
    joins.push(offset);
    joins.extend(r.join_positions().iter().map(|p| p + offset));

    FiniteSchedule::from_parts_unchecked(values, ScheduleKind::Custom, joins)
}
