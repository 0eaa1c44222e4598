use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Result};
use crate::schedule::{
    silver, strongly_convex_schedule, AnytimeParams, AnytimeStream, FiniteSchedule, StronglyConvexSchedule,
};
use crate::Scalar;

/// Where the stepsizes of a run come from.
#[derive(Clone, Debug)]
pub enum ScheduleSource<T> {
    Finite(FiniteSchedule<T>),
    Anytime(AnytimeParams<T>),
    Constant(T),
    Periodic(StronglyConvexSchedule<T>),
}

impl<T: Scalar> ScheduleSource<T> {
    /// Number of stepsizes available, `None` for infinite sources.
    pub fn available(&self) -> Option<usize> {
        match self {
            ScheduleSource::Finite(s) => Some(s.len()),
            _ => None,
        }
    }

    /// Stepsizes with their join flags, in order.
    pub fn steps(&self) -> Box<dyn Iterator<Item = (T, bool)> + '_> {
        match self {
            ScheduleSource::Finite(s) => Box::new(s.steps()),
            ScheduleSource::Anytime(p) => Box::new(AnytimeStream::new(*p).map(|s| (s.value, s.is_join))),
            ScheduleSource::Constant(a) => Box::new(std::iter::repeat((*a, false))),
            ScheduleSource::Periodic(s) => Box::new(s.stream()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ScheduleSource::Finite(s) => s.kind().name().to_string(),
            ScheduleSource::Anytime(_) => "anytime".to_string(),
            ScheduleSource::Constant(_) => "constant".to_string(),
            ScheduleSource::Periodic(_) => "strongly_convex".to_string(),
        }
    }
}

/// Serializable schedule descriptor used in run and experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Silver {
        order: u32,
    },
    Anytime {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
    },
    Constant {
        alpha: f64,
    },
    StronglyConvex {
        kappa: f64,
        c0: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
    },
    /// Explicit stepsizes in units of `1/L`.
    Values {
        values: Vec<f64>,
    },
    /// A schedule file written by `gen`.
    File {
        path: std::path::PathBuf,
    },
}

impl ScheduleSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ScheduleSpec::Silver { .. } => "silver",
            ScheduleSpec::Anytime { .. } => "anytime",
            ScheduleSpec::Constant { .. } => "constant",
            ScheduleSpec::StronglyConvex { .. } => "strongly_convex",
            ScheduleSpec::Values { .. } => "values",
            ScheduleSpec::File { .. } => "file",
        }
    }

    pub fn source<T: Scalar>(&self) -> Result<ScheduleSource<T>> {
        let params = |c: &Option<f64>| match c {
            Some(c) => AnytimeParams::new(T::lit(*c)),
            None => Ok(AnytimeParams::default()),
        };
        Ok(match self {
            ScheduleSpec::Silver { order } => ScheduleSource::Finite(silver(*order)?),
            ScheduleSpec::Anytime { c } => ScheduleSource::Anytime(params(c)?),
            ScheduleSpec::Constant { alpha } => {
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    return domain(format!("constant stepsize must be positive, got {alpha}"));
                }
                ScheduleSource::Constant(T::lit(*alpha))
            }
            ScheduleSpec::StronglyConvex { kappa, c0, c } => {
                ScheduleSource::Periodic(strongly_convex_schedule(T::lit(*kappa), T::lit(*c0), params(c)?)?)
            }
            ScheduleSpec::Values { values } => {
                ScheduleSource::Finite(FiniteSchedule::custom(values.iter().map(|&v| T::lit(v)).collect())?)
            }
            ScheduleSpec::File { path } => {
                let file = crate::io::read_schedule_file(path)?;
                if file.values.is_empty() && !matches!(file.kind.as_str(), "silver" | "custom") {
                    return precondition("schedule file holds no values");
                }
                ScheduleSource::Finite(file.into_schedule()?)
            }
        })
    }
}
