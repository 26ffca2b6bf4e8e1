//! Core domain types: jobs, instances, schedules, feasibility and
//! instance-family classification.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{to_f64, Rational};

/// One work item. The job must receive `work` units of processing inside
/// its active interval `[release, deadline]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub id: String,
    pub work: Rational,
    pub release: Rational,
    pub deadline: Rational,
}

impl Job {
    pub fn new(
        id: impl Into<String>,
        work: Rational,
        release: Rational,
        deadline: Rational,
    ) -> Self {
        Job {
            id: id.into(),
            work,
            release,
            deadline,
        }
    }

    /// Length of the active interval.
    pub fn window(&self) -> Rational {
        &self.deadline - &self.release
    }

    fn validate(&self) -> Result<(), Error> {
        if !self.work.is_positive() {
            return Err(Error::Validation(format!(
                "job {:?}: work must be positive",
                self.id
            )));
        }
        if self.release.is_negative() {
            return Err(Error::Validation(format!(
                "job {:?}: release must be nonnegative",
                self.id
            )));
        }
        if self.release >= self.deadline {
            return Err(Error::Validation(format!(
                "job {:?}: release must precede deadline",
                self.id
            )));
        }
        Ok(())
    }
}

/// A job set together with the machine count and the power exponent α.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub jobs: Vec<Job>,
    pub machines: usize,
    pub alpha: f64,
}

impl Instance {
    /// Build and validate an instance: `machines >= 1`, `alpha > 1`,
    /// pairwise distinct job ids, and per-job invariants.
    pub fn new(jobs: Vec<Job>, machines: usize, alpha: f64) -> Result<Self, Error> {
        let instance = Instance {
            jobs,
            machines,
            alpha,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.machines < 1 {
            return Err(Error::Validation("machines must be at least 1".into()));
        }
        if self.alpha.is_nan() || self.alpha <= 1.0 || !self.alpha.is_finite() {
            return Err(Error::Validation(format!(
                "alpha must be a finite real > 1, got {}",
                self.alpha
            )));
        }
        let mut seen = HashSet::new();
        for job in &self.jobs {
            job.validate()?;
            if !seen.insert(job.id.as_str()) {
                return Err(Error::Validation(format!("duplicate job id {:?}", job.id)));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn job(&self, id: &str) -> Option<&Job> {
        self.jobs.iter().find(|j| j.id == id)
    }

    /// Job lookup table keyed by id.
    pub fn jobs_by_id(&self) -> HashMap<&str, &Job> {
        self.jobs.iter().map(|j| (j.id.as_str(), j)).collect()
    }
}

/// A contiguous run of one job on one machine at constant speed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionPiece {
    pub job: String,
    pub machine: usize,
    pub start: Rational,
    pub end: Rational,
    pub speed: Rational,
}

impl ExecutionPiece {
    pub fn duration(&self) -> Rational {
        &self.end - &self.start
    }

    /// Work processed by this piece: `speed × (end − start)`.
    pub fn work(&self) -> Rational {
        &self.speed * self.duration()
    }
}

/// A set of execution pieces; represents both preemptive and
/// non-preemptive solutions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Schedule {
    pub pieces: Vec<ExecutionPiece>,
}

impl Schedule {
    pub fn new(pieces: Vec<ExecutionPiece>) -> Self {
        Schedule { pieces }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Pieces of one job, in start order.
    pub fn job_pieces(&self, id: &str) -> Vec<&ExecutionPiece> {
        let mut pieces: Vec<&ExecutionPiece> = self.pieces.iter().filter(|p| p.job == id).collect();
        pieces.sort_by(|a, b| a.start.cmp(&b.start));
        pieces
    }

    /// Latest piece end of one job, if it is scheduled at all.
    pub fn completion_time(&self, id: &str) -> Option<Rational> {
        self.pieces
            .iter()
            .filter(|p| p.job == id)
            .map(|p| p.end.clone())
            .max()
    }

    /// Sort pieces by (machine, start, job id). All writers emit this
    /// order so schedule files are reproducible.
    pub fn sort_canonical(&mut self) {
        self.pieces.sort_by(|a, b| {
            a.machine
                .cmp(&b.machine)
                .then_with(|| a.start.cmp(&b.start))
                .then_with(|| a.job.cmp(&b.job))
        });
    }

    /// Merge abutting pieces of the same job on the same machine at the
    /// same speed into single pieces.
    pub fn coalesce(&mut self) {
        self.sort_canonical();
        let mut merged: Vec<ExecutionPiece> = Vec::with_capacity(self.pieces.len());
        for piece in self.pieces.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.machine == piece.machine
                    && last.job == piece.job
                    && last.speed == piece.speed
                    && last.end == piece.start
                {
                    last.end = piece.end;
                    continue;
                }
            }
            merged.push(piece);
        }
        self.pieces = merged;
    }
}

/// Whether a schedule is allowed to split a job into several pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleMode {
    Preemptive,
    NonPreemptive,
}

/// One feasibility defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    ReleaseViolation,
    DeadlineViolation,
    MachineOverlap,
    SelfParallelism,
    WorkMismatch,
    PreemptedJob,
    /// A piece references a job id absent from the instance.
    UnknownJob,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub kind: ViolationKind,
    pub job: String,
    pub detail: String,
}

/// Outcome of [`check_feasible`]. `feasible` holds exactly when
/// `violations` is empty.
#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        FeasibilityReport {
            feasible: violations.is_empty(),
            violations,
        }
    }
}

/// Which structural families an instance belongs to.
///
/// All families are defined over ordered job pairs `(j, j')` with
/// `release(j) <= release(j')`. Pairs with equal releases are ordered by
/// descending deadline for the laminar tests and ascending deadline for
/// the agreeable test, so equal-release pairs never violate either; this
/// makes common-release instances classify as pure-laminar and clique.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FamilyFlags {
    /// All releases equal.
    pub common_release: bool,
    /// All deadlines equal.
    pub common_deadline: bool,
    /// All active intervals share a common time point.
    pub clique: bool,
    /// Earlier-released jobs have earlier (or equal) deadlines.
    pub agreeable: bool,
    /// Active intervals are nested or disjoint.
    pub laminar: bool,
    /// Active intervals form a nested chain under release order.
    pub pure_laminar: bool,
}

/// Total energy of a schedule: `Σ speed^α × (end − start)` over pieces.
///
/// For a job run at one constant speed `s` this equals `w · s^(α−1)`.
pub fn total_energy(instance: &Instance, schedule: &Schedule) -> Result<f64, Error> {
    let jobs = instance.jobs_by_id();
    let mut energy = 0.0;
    for piece in &schedule.pieces {
        if !jobs.contains_key(piece.job.as_str()) {
            return Err(Error::UnknownJobId(piece.job.clone()));
        }
        energy += to_f64(&piece.speed).powf(instance.alpha) * to_f64(&piece.duration());
    }
    Ok(energy)
}

/// Check a schedule against an instance, in exact rational arithmetic.
///
/// Feasible means: every piece lies inside its job's active interval, no
/// two pieces overlap on one machine, no job runs in parallel with
/// itself, each job's summed piece work equals its work exactly, and in
/// [`ScheduleMode::NonPreemptive`] each job has exactly one piece.
/// Pieces sharing an endpoint do not overlap (closed-open semantics).
pub fn check_feasible(
    instance: &Instance,
    schedule: &Schedule,
    mode: ScheduleMode,
) -> FeasibilityReport {
    let jobs = instance.jobs_by_id();
    let mut violations = Vec::new();

    for piece in &schedule.pieces {
        let Some(job) = jobs.get(piece.job.as_str()) else {
            violations.push(Violation {
                kind: ViolationKind::UnknownJob,
                job: piece.job.clone(),
                detail: "piece references a job absent from the instance".into(),
            });
            continue;
        };
        if piece.start < job.release {
            violations.push(Violation {
                kind: ViolationKind::ReleaseViolation,
                job: piece.job.clone(),
                detail: format!(
                    "piece starts at {} before release {}",
                    piece.start, job.release
                ),
            });
        }
        if piece.end > job.deadline {
            violations.push(Violation {
                kind: ViolationKind::DeadlineViolation,
                job: piece.job.clone(),
                detail: format!(
                    "piece ends at {} after deadline {}",
                    piece.end, job.deadline
                ),
            });
        }
    }

    // Per-machine overlap.
    let mut by_machine: BTreeMap<usize, Vec<&ExecutionPiece>> = BTreeMap::new();
    for piece in &schedule.pieces {
        by_machine.entry(piece.machine).or_default().push(piece);
    }
    for pieces in by_machine.values_mut() {
        pieces.sort_by(|a, b| a.start.cmp(&b.start).then_with(|| a.end.cmp(&b.end)));
        for pair in pieces.windows(2) {
            if pair[1].start < pair[0].end {
                violations.push(Violation {
                    kind: ViolationKind::MachineOverlap,
                    job: pair[1].job.clone(),
                    detail: format!(
                        "overlaps {:?} on machine {} at {}",
                        pair[0].job, pair[0].machine, pair[1].start
                    ),
                });
            }
        }
    }

    // Per-job checks: self-parallelism across machines, exact work, piece count.
    let mut by_job: BTreeMap<&str, Vec<&ExecutionPiece>> = BTreeMap::new();
    for piece in &schedule.pieces {
        if jobs.contains_key(piece.job.as_str()) {
            by_job.entry(piece.job.as_str()).or_default().push(piece);
        }
    }
    for (&id, pieces) in by_job.iter_mut() {
        pieces.sort_by(|a, b| a.start.cmp(&b.start).then_with(|| a.end.cmp(&b.end)));
        for pair in pieces.windows(2) {
            if pair[1].start < pair[0].end {
                violations.push(Violation {
                    kind: ViolationKind::SelfParallelism,
                    job: id.to_string(),
                    detail: format!("runs in parallel with itself at {}", pair[1].start),
                });
            }
        }
        if mode == ScheduleMode::NonPreemptive && pieces.len() > 1 {
            violations.push(Violation {
                kind: ViolationKind::PreemptedJob,
                job: id.to_string(),
                detail: format!("{} pieces in non-preemptive mode", pieces.len()),
            });
        }
    }
    for job in &instance.jobs {
        let done: Rational = by_job
            .get(job.id.as_str())
            .map(|pieces| pieces.iter().map(|p| p.work()).sum())
            .unwrap_or_else(Rational::zero);
        if done != job.work {
            violations.push(Violation {
                kind: ViolationKind::WorkMismatch,
                job: job.id.clone(),
                detail: format!("scheduled work {} != required {}", done, job.work),
            });
        }
    }

    FeasibilityReport::from_violations(violations)
}

/// Classify an instance into the structural families.
pub fn classify(instance: &Instance) -> FamilyFlags {
    let jobs = &instance.jobs;
    if jobs.is_empty() {
        return FamilyFlags {
            common_release: true,
            common_deadline: true,
            clique: true,
            agreeable: true,
            laminar: true,
            pure_laminar: true,
        };
    }

    let common_release = jobs.iter().all(|j| j.release == jobs[0].release);
    let common_deadline = jobs.iter().all(|j| j.deadline == jobs[0].deadline);
    let max_release = jobs.iter().map(|j| &j.release).max().unwrap();
    let min_deadline = jobs.iter().map(|j| &j.deadline).min().unwrap();
    // All windows share a point iff the latest release precedes the
    // earliest deadline.
    let clique = max_release <= min_deadline;

    let mut agreeable = true;
    let mut laminar = true;
    let mut pure_laminar = true;
    for a in jobs {
        for b in jobs {
            // Pairs with equal releases satisfy every pairwise family
            // condition under the tie ordering, so only strict pairs matter.
            if a.release >= b.release {
                continue;
            }
            if a.deadline > b.deadline {
                agreeable = false;
            }
            if a.deadline < b.deadline {
                pure_laminar = false;
                if a.deadline > b.release {
                    laminar = false;
                }
            }
        }
    }

    FamilyFlags {
        common_release,
        common_deadline,
        clique,
        agreeable,
        laminar,
        pure_laminar,
    }
}

/// Compress a schedule toward `anchor` by `gamma >= 1`: every piece's
/// duration is divided by gamma and its speed multiplied by gamma, so
/// per-job work is preserved and total energy scales by `gamma^(α−1)`.
pub fn scale_schedule(
    schedule: &Schedule,
    gamma: &Rational,
    anchor: &Rational,
) -> Result<Schedule, Error> {
    if gamma < &Rational::one() {
        return Err(Error::InvalidGamma(gamma.to_string()));
    }
    let pieces = schedule
        .pieces
        .iter()
        .map(|p| ExecutionPiece {
            job: p.job.clone(),
            machine: p.machine,
            start: anchor + (&p.start - anchor) / gamma,
            end: anchor + (&p.end - anchor) / gamma,
            speed: &p.speed * gamma,
        })
        .collect();
    Ok(Schedule::new(pieces))
}
