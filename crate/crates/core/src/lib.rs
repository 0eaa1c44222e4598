//! Silver and anytime stepsize schedules for gradient descent on smooth
//! convex functions, a GD engine that records every quantity the schedule
//! guarantees refer to, and a battery of numerical checks for those
//! guarantees.

pub mod error;
pub mod gd;
pub mod io;
pub mod objectives;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod schedule;
pub mod verify;

pub use error::{Error, Result};
pub use objectives::{Objective, ObjectiveSpec};
pub use report::VerificationReport;
pub use scalar::Scalar;

/// Double-precision instantiations, the default everywhere outside tests.
pub type Schedule = schedule::FiniteSchedule<f64>;
pub type Schedule32 = schedule::FiniteSchedule<f32>;
pub type AnytimeParams = schedule::AnytimeParams<f64>;
pub type Trajectory = gd::Trajectory<f64>;
pub type Trajectory32 = gd::Trajectory<f32>;
