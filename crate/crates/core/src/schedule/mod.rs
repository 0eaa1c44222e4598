//! Stepsize schedule construction.
//!
//! Stepsizes are expressed in units of `1/L`, i.e. they are the stepsizes GD
//! would use on a 1-smooth objective. Positions are 1-based throughout: the
//! first stepsize `alpha_1` is applied at `x_1`.

mod anytime;
mod phi;
mod prefix;
mod silver;
mod strongly_convex;

pub use anytime::{anytime_prefix, AnytimeParams, AnytimeStep, AnytimeStream};
pub use phi::{concat, phi};
pub use prefix::{prefix_sums, PrefixSums};
pub use silver::{silver, silver_with_cap, SILVER_ORDER_CAP};
pub use strongly_convex::{strongly_convex_schedule, StrongConvexParams, StronglyConvexSchedule};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::Scalar;

/// Largest finite prefix materialized by default (2^27 values).
pub const PREFIX_CAP: usize = 1 << 27;

/// Provenance of a [`FiniteSchedule`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleKind {
    Silver { order: u32 },
    AnytimePrefix { c: f64, length: usize },
    Constant { alpha: f64 },
    StronglyConvex { kappa: f64, c0: f64, tau: usize },
    Custom,
}

impl ScheduleKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScheduleKind::Silver { .. } => "silver",
            ScheduleKind::AnytimePrefix { .. } => "anytime_prefix",
            ScheduleKind::Constant { .. } => "constant",
            ScheduleKind::StronglyConvex { .. } => "strongly_convex",
            ScheduleKind::Custom => "custom",
        }
    }
}

/// A finite sequence of positive stepsizes together with the positions of
/// the join steps that concatenation inserted.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSchedule<T> {
    values: Vec<T>,
    kind: ScheduleKind,
    join_positions: Vec<usize>,
}

impl<T: Scalar> FiniteSchedule<T> {
    /// The null schedule.
    pub fn empty() -> Self {
        Self {
            values: Vec::new(),
            kind: ScheduleKind::Custom,
            join_positions: Vec::new(),
        }
    }

    /// Builds a schedule from raw values, validating positivity and the join
    /// positions (1-based, strictly increasing, within the length).
    pub fn new(values: Vec<T>, kind: ScheduleKind, join_positions: Vec<usize>) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > T::zero()))
        {
            return domain(format!("stepsize {} at position {} is not positive and finite", v, i + 1));
        }
        let n = values.len();
        let mut prev = 0;
        for &p in &join_positions {
            if p <= prev || p > n {
                return domain(format!("join position {p} out of order or outside 1..={n}"));
            }
            prev = p;
        }
        Ok(Self {
            values,
            kind,
            join_positions,
        })
    }

    /// Custom schedule without join steps.
    pub fn custom(values: Vec<T>) -> Result<Self> {
        Self::new(values, ScheduleKind::Custom, Vec::new())
    }

    /// `n` copies of `alpha`.
    pub fn constant(alpha: T, n: usize) -> Result<Self> {
        if n > PREFIX_CAP {
            return Err(crate::Error::Resource {
                what: "constant schedule length",
                requested: n as u64,
                cap: PREFIX_CAP as u64,
            });
        }
        Self::new(
            vec![alpha; n],
            ScheduleKind::Constant {
                alpha: alpha.as_f64(),
            },
            Vec::new(),
        )
    }

    pub(crate) fn from_parts_unchecked(
        values: Vec<T>,
        kind: ScheduleKind,
        join_positions: Vec<usize>,
    ) -> Self {
        Self {
            values,
            kind,
            join_positions,
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn kind(&self) -> &ScheduleKind {
        &self.kind
    }

    pub fn join_positions(&self) -> &[usize] {
        &self.join_positions
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 1-based access.
    pub fn get(&self, position: usize) -> Option<T> {
        position.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// Sum of the stepsizes, accumulated left to right.
    pub fn aggregate(&self) -> T {
        naive_sum(&self.values)
    }

    pub fn is_join(&self, position: usize) -> bool {
        self.join_positions.binary_search(&position).is_ok()
    }

    /// Same values, relabelled.
    pub fn with_kind(mut self, kind: ScheduleKind) -> Self {
        self.kind = kind;
        self
    }

    /// Same values with the join metadata dropped, for use as an atomic block.
    pub fn as_block(&self) -> Self {
        Self {
            values: self.values.clone(),
            kind: self.kind.clone(),
            join_positions: Vec::new(),
        }
    }

    /// First `n` values (join positions truncated accordingly).
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            values: self.values[..n].to_vec(),
            kind: self.kind.clone(),
            join_positions: self.join_positions.iter().copied().filter(|&p| p <= n).collect(),
        }
    }

    /// Iterates `(value, is_join)` pairs in order.
    pub fn steps(&self) -> impl Iterator<Item = (T, bool)> + '_ {
        let mut joins = self.join_positions.iter().peekable();
        self.values.iter().enumerate().map(move |(i, &v)| {
            let is_join = joins.next_if(|&&p| p == i + 1).is_some();
            (v, is_join)
        })
    }
}

impl<T: Scalar> Default for FiniteSchedule<T> {
    fn default() -> Self {
        Self::empty()
    }
}

/// Left-to-right summation. Every aggregate in the crate goes through this so
/// that independently built schedules agree bit for bit.
pub(crate) fn naive_sum<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, &v| acc + v)
}
