//! Energy-minimal speed scaling on identical parallel machines.
//!
//! A processor running at speed `s` draws power `s^α` (α > 1), so the energy of
//! a job executed at constant speed `s` for `t` time units is `s^α · t`. Given
//! jobs with works, release dates and deadlines, the problem is to finish every
//! job inside its window at minimum total energy.
//!
//! This crate provides:
//!
//! * [`model`] — exact-rational domain types (jobs, instances, schedules),
//!   energy accounting, feasibility checking and instance-family
//!   classification;
//! * [`preemptive`] — the optimal migratory preemptive solver used as the
//!   lower bound, plus the exact single-machine special case;
//! * [`approx`] — non-preemptive schedulers with proven ratio guarantees for
//!   common-release, common-deadline, clique and agreeable instances;
//! * [`oracle`] — desk-scale ground truth: brute-force non-preemptive optima,
//!   an independent convex solver for the preemptive bound, and the
//!   preemptive-vs-non-preemptive gap family with its closed-form energies;
//! * [`generators`] — seeded random instance generators per family;
//! * [`io`] — JSON instance/schedule files and CSV benchmark reports.
//!
//! Times, works and speeds are exact rationals throughout; energies are
//! evaluated in floating point because α may be non-integral.

pub mod approx;
pub mod error;
mod flow;
pub mod generators;
pub mod io;
pub mod model;
pub mod oracle;
pub mod preemptive;
pub mod rational;

pub use error::Error;
pub use model::{
    check_feasible, classify, scale_schedule, total_energy, ExecutionPiece, FamilyFlags, Instance,
    Job, Schedule, ScheduleMode,
};
pub use rational::Rational;

/// Default relative tolerance for solvers that report one.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
