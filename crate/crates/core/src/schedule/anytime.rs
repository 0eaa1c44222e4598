//! The anytime schedule: an infinite concatenation of silver blocks whose
//! repetition counts grow exponentially with the block order.

use super::phi::phi_unchecked;
use super::silver::double_silver;
use super::{naive_sum, FiniteSchedule, ScheduleKind, PREFIX_CAP};
use crate::error::{domain, Error, Result};
use crate::scalar::log2_rho;
use crate::Scalar;

/// Growth parameter `c` of the anytime construction.
///
/// The silver block of order `j` is repeated `k_j = floor(2 * 2^(c j))` times;
/// with the default `c = log2(1 + sqrt 2)` this gives `k = 4, 11, 28, ...`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnytimeParams<T> {
    c: T,
}

impl<T: Scalar> Default for AnytimeParams<T> {
    fn default() -> Self {
        Self { c: log2_rho() }
    }
}

impl<T: Scalar> AnytimeParams<T> {
    pub fn new(c: T) -> Result<Self> {
        if !c.is_finite() || c < T::one() {
            return domain(format!("anytime parameter c must be finite and >= 1, got {c}"));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// Repetition count `k_j`; `k_0 = 0`. Saturates at `u64::MAX`.
    pub fn k(&self, j: u32) -> u64 {
        if j == 0 {
            return 0;
        }
        let v = (2.0 * (self.c.as_f64() * j as f64).exp2()).floor();
        if v >= u64::MAX as f64 {
            u64::MAX
        } else {
            v as u64
        }
    }

    /// `M_j = k_1 + ... + k_j`, the number of blocks of order at most `j`.
    pub fn m(&self, j: u32) -> u64 {
        (1..=j).fold(0u64, |acc, i| acc.saturating_add(self.k(i)))
    }

    /// Total length `k_j 2^j` occupied by the blocks of order `j`, each block
    /// being one join step plus `2^j - 1` silver stepsizes.
    pub fn order_span(&self, j: u32) -> u64 {
        if j >= 63 {
            return u64::MAX;
        }
        self.k(j).saturating_mul(1u64 << j)
    }

    /// `sum_{j <= order} k_j 2^j`.
    pub fn cumulative_span(&self, order: u32) -> u64 {
        (1..=order).fold(0u64, |acc, j| acc.saturating_add(self.order_span(j)))
    }

    /// Silver order used by the `i`-th appended block (1-based).
    pub fn block_order(&self, i: u64) -> u32 {
        assert!(i >= 1, "block indices are 1-based");
        let mut j = 1;
        while self.m(j) < i {
            j += 1;
        }
        j
    }

    /// The order `o_t` of the block containing position `t`:
    /// `sum_{j < o_t} k_j 2^j < t <= sum_{j <= o_t} k_j 2^j`.
    pub fn o_t(&self, t: u64) -> u32 {
        assert!(t >= 1, "positions are 1-based");
        let mut cum = 0u64;
        let mut j = 0;
        while cum < t {
            j += 1;
            cum = cum.saturating_add(self.order_span(j));
        }
        j
    }

    /// Checkpoints `t_1 < t_2 < ...` (lengths of the successive concatenated
    /// prefixes) that do not exceed `max_t`.
    pub fn checkpoint_lengths(&self, max_t: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut t = 0u64;
        let mut j = 1u32;
        'outer: loop {
            let stride = 1u64 << j;
            for _ in 0..self.k(j) {
                t = t.saturating_add(stride);
                if t > max_t {
                    break 'outer;
                }
                out.push(t);
            }
            j += 1;
        }
        out
    }
}

/// One emitted stepsize of the anytime schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnytimeStep<T> {
    pub value: T,
    pub is_join: bool,
    /// Silver order of the block this step belongs to.
    pub order: u32,
}

/// Lazy generator of the anytime schedule.
///
/// Emission is deterministic and prefix-consistent: the first `n` outputs are
/// the same bits regardless of how many are requested later.
#[derive(Clone, Debug)]
pub struct AnytimeStream<T> {
    params: AnytimeParams<T>,
    emitted: u64,
    prefix_aggregate: T,
    order: u32,
    repeats_done: u64,
    repeats_in_order: u64,
    /// Index within the current block; 0 means the next step is a join.
    inner: usize,
    block: Vec<T>,
    block_sum: T,
}

impl<T: Scalar> AnytimeStream<T> {
    pub fn new(params: AnytimeParams<T>) -> Self {
        let mut block = Vec::new();
        double_silver(&mut block);
        let block_sum = naive_sum(&block);
        Self {
            params,
            emitted: 0,
            prefix_aggregate: T::zero(),
            order: 1,
            repeats_done: 0,
            repeats_in_order: params.k(1),
            inner: 0,
            block,
            block_sum,
        }
    }

    pub fn params(&self) -> &AnytimeParams<T> {
        &self.params
    }

    /// Number of stepsizes produced so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Exact running sum of everything emitted so far.
    pub fn prefix_aggregate(&self) -> T {
        self.prefix_aggregate
    }

    /// Order of the block currently being emitted (or about to start).
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn repeats_done(&self) -> u64 {
        self.repeats_done
    }

    pub fn inner_position(&self) -> usize {
        self.inner
    }

    pub fn next_step(&mut self) -> AnytimeStep<T> {
        let order = self.order;
        let (value, is_join) = if self.inner == 0 {
            (phi_unchecked(self.prefix_aggregate, self.block_sum), true)
        } else {
            (self.block[self.inner - 1], false)
        };
        self.prefix_aggregate += value;
        self.emitted += 1;
        self.inner += 1;

        if self.inner > self.block.len() {
            self.inner = 0;
            self.repeats_done += 1;
            if self.repeats_done == self.repeats_in_order {
                self.order += 1;
                self.repeats_done = 0;
                self.repeats_in_order = self.params.k(self.order);
                double_silver(&mut self.block);
                self.block_sum = naive_sum(&self.block);
            }
        }
        AnytimeStep {
            value,
            is_join,
            order,
        }
    }
}

impl<T: Scalar> Iterator for AnytimeStream<T> {
    type Item = AnytimeStep<T>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_step())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (usize::MAX, None)
    }
}

/// First `n` stepsizes of the anytime schedule, with join positions.
pub fn anytime_prefix<T: Scalar>(n: usize, params: AnytimeParams<T>) -> Result<FiniteSchedule<T>> {
    if n == 0 {
        return domain("anytime prefix length must be at least 1");
    }
    if n > PREFIX_CAP {
        return Err(Error::Resource {
            what: "anytime prefix length",
            requested: n as u64,
            cap: PREFIX_CAP as u64,
        });
    }
    let mut values = Vec::with_capacity(n);
    let mut joins = Vec::new();
    for (i, step) in AnytimeStream::new(params).take(n).enumerate() {
        values.push(step.value);
        if step.is_join {
            joins.push(i + 1);
        }
    }
    Ok(FiniteSchedule::from_parts_unchecked(
        values,
        ScheduleKind::AnytimePrefix {
            c: params.c().as_f64(),
            length: n,
        },
        joins,
    ))
}
