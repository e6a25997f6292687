//! Restart meta-schemes around the inner solvers.
//!
//! Every scheme warm-starts the line search of each cycle with the final
//! Lipschitz estimate of the previous one, counts `N` in accepted inner
//! iterations across all cycles, and marks the last iterate of every cycle as
//! a restart point in the returned [`Trace`](crate::Trace).

mod criterion;
mod grid;
mod monotone;
mod schedule;
mod scheduled;

pub use criterion::{criterion_restart, default_criterion_gamma};
pub use grid::{adaptive_grid, grid_schedule, GridOutcome};
pub use monotone::monotone_restart;
pub use schedule::{optimal_schedule_holder, optimal_schedule_smooth, Schedule, ScheduleKind};
pub use scheduled::{h_restart, restart_scheduled};
