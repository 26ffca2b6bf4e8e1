//! Non-preemptive approximation schedulers.
//!
//! Each scheduler starts from the optimal preemptive execution times
//! `e_j` and pays a bounded energy factor for removing preemption:
//!
//! * [`crd`] — common release dates: run jobs for `e_j / (2 − 1/m)` under
//!   earliest-deadline-first dispatch; energy at most `(2 − 1/m)^(α−1)`
//!   times the preemptive optimum.
//! * [`cd`] — common deadlines: the time-reversed mirror of [`crd`]
//!   (latest release date first, scheduled backward from the deadline),
//!   with the same factor.
//! * [`clique`] — all windows share a point: split jobs at the earliest
//!   deadline `T` by where the preemptive schedule runs them, clamp the
//!   left set's deadlines (resp. right set's releases) to `T`, solve the
//!   two sides with [`cd`] and [`crd`] and concatenate; factor
//!   `(2(2 − 1/m))^(α−1)`.
//! * [`agreeable`] — released-earlier implies due-earlier: partition into
//!   clique groups, halve every active interval toward its group point
//!   to separate consecutive groups, run [`clique`] per group and
//!   concatenate; factor `(4(2 − 1/m))^(α−1)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::Error;
use crate::model::{classify, ExecutionPiece, FamilyFlags, Instance, Job, Schedule};
use crate::preemptive::{optimal_allocation, optimal_preemptive, split_times_at};
use crate::rational::Rational;
use crate::DEFAULT_TOLERANCE;

/// The agreeable decomposition: group `ℓ` holds the jobs released in
/// `(T_{ℓ−1}, T_ℓ]`, where `T_ℓ` is the smallest deadline among jobs not
/// yet grouped.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub entries: Vec<PartitionEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionEntry {
    pub time: Rational,
    pub job_ids: Vec<String>,
}

impl Partition {
    pub fn k(&self) -> usize {
        self.entries.len()
    }
}

/// How a clique instance's jobs divide around the split point `T`: `left`
/// holds the jobs with at least half their preemptive execution before
/// `T`, `right` the others.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueSplit {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub split_time: Rational,
}

/// Split jobs by where a preemptive schedule executes them relative to `t`.
pub fn clique_split(instance: &Instance, preemptive: &Schedule, t: &Rational) -> CliqueSplit {
    let split = split_times_at(instance, preemptive, t);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for job in &instance.jobs {
        let (before, after) = &split[&job.id];
        if before >= after {
            left.push(job.id.clone());
        } else {
            right.push(job.id.clone());
        }
    }
    CliqueSplit {
        left,
        right,
        split_time: t.clone(),
    }
}

/// The non-preemptive schedulers and their energy guarantees relative to
/// the optimal preemptive energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    CommonRelease,
    CommonDeadline,
    Clique,
    Agreeable,
}

impl Algorithm {
    /// The guaranteed ratio of output energy to optimal preemptive energy.
    pub fn ratio_bound(&self, machines: usize, alpha: f64) -> f64 {
        let base = 2.0 - 1.0 / machines as f64;
        let factor = match self {
            Algorithm::CommonRelease | Algorithm::CommonDeadline => base,
            Algorithm::Clique => 2.0 * base,
            Algorithm::Agreeable => 4.0 * base,
        };
        factor.powf(alpha - 1.0)
    }

    /// Whether the scheduler accepts instances with the given flags.
    pub fn applies_to(&self, flags: &FamilyFlags) -> bool {
        match self {
            Algorithm::CommonRelease => flags.common_release,
            Algorithm::CommonDeadline => flags.common_deadline,
            Algorithm::Clique => flags.clique,
            Algorithm::Agreeable => flags.agreeable,
        }
    }

    /// The applicable scheduler with the tightest guarantee, if any.
    pub fn auto_select(flags: &FamilyFlags) -> Option<Algorithm> {
        [
            Algorithm::CommonRelease,
            Algorithm::CommonDeadline,
            Algorithm::Clique,
            Algorithm::Agreeable,
        ]
        .into_iter()
        .find(|alg| alg.applies_to(flags))
    }

    pub fn run(&self, instance: &Instance) -> Result<Schedule, Error> {
        match self {
            Algorithm::CommonRelease => crd(instance),
            Algorithm::CommonDeadline => cd(instance),
            Algorithm::Clique => clique(instance),
            Algorithm::Agreeable => agreeable(instance),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Algorithm::CommonRelease => "crd",
            Algorithm::CommonDeadline => "cd",
            Algorithm::Clique => "clique",
            Algorithm::Agreeable => "agr",
        };
        f.write_str(name)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "crd" => Ok(Algorithm::CommonRelease),
            "cd" => Ok(Algorithm::CommonDeadline),
            "clique" => Ok(Algorithm::Clique),
            "agr" => Ok(Algorithm::Agreeable),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

fn scale_factor(machines: usize) -> Rational {
    // 2 − 1/m = (2m − 1)/m.
    Rational::new(
        BigInt::from(2 * machines as i64 - 1),
        BigInt::from(machines as i64),
    )
}

/// Non-preemptive scheduler for common release dates.
///
/// Every job's processing time is its optimal preemptive execution time
/// divided by `2 − 1/m`; jobs are dispatched earliest-deadline-first
/// (ties by job id, machine ties by index). Every job meets its deadline
/// and the energy is at most `(2 − 1/m)^(α−1)` times the preemptive
/// optimum.
pub fn crd(instance: &Instance) -> Result<Schedule, Error> {
    let flags = classify(instance);
    if !flags.common_release {
        return Err(Error::WrongFamily("release dates are not all equal".into()));
    }
    crd_unchecked(instance)
}

fn crd_unchecked(instance: &Instance) -> Result<Schedule, Error> {
    if instance.jobs.is_empty() {
        return Ok(Schedule::default());
    }
    let profile = optimal_allocation(instance)?;
    let times = profile.execution_times();
    let shrink = scale_factor(instance.machines);

    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_by(|&a, &b| {
        instance.jobs[a]
            .deadline
            .cmp(&instance.jobs[b].deadline)
            .then_with(|| instance.jobs[a].id.cmp(&instance.jobs[b].id))
    });

    let release = instance.jobs[0].release.clone();
    let mut free_at: Vec<Rational> = vec![release; instance.machines];
    let mut schedule = Schedule::default();
    for j in order {
        let job = &instance.jobs[j];
        let processing = &times[j] / &shrink;
        let machine = (0..instance.machines)
            .min_by(|&a, &b| free_at[a].cmp(&free_at[b]).then(a.cmp(&b)))
            .unwrap();
        let start = free_at[machine].clone();
        let end = &start + &processing;
        debug_assert!(end <= job.deadline, "dispatch must meet every deadline");
        schedule.pieces.push(ExecutionPiece {
            job: job.id.clone(),
            machine,
            start,
            end: end.clone(),
            speed: &job.work / &processing,
        });
        free_at[machine] = end;
    }
    schedule.sort_canonical();
    Ok(schedule)
}

/// Non-preemptive scheduler for common deadlines: the time-reversal of
/// [`crd`] on the mirrored instance, which dispatches latest release
/// date first backward from the shared deadline.
pub fn cd(instance: &Instance) -> Result<Schedule, Error> {
    let flags = classify(instance);
    if !flags.common_deadline {
        return Err(Error::WrongFamily("deadlines are not all equal".into()));
    }
    if instance.jobs.is_empty() {
        return Ok(Schedule::default());
    }
    let deadline = instance.jobs[0].deadline.clone();
    let mirrored_jobs = instance
        .jobs
        .iter()
        .map(|j| Job {
            id: j.id.clone(),
            work: j.work.clone(),
            release: &deadline - &j.deadline,
            deadline: &deadline - &j.release,
        })
        .collect();
    let mirrored = Instance::new(mirrored_jobs, instance.machines, instance.alpha)?;
    let forward = crd_unchecked(&mirrored)?;
    let mut schedule = Schedule::new(
        forward
            .pieces
            .into_iter()
            .map(|p| ExecutionPiece {
                job: p.job,
                machine: p.machine,
                start: &deadline - &p.end,
                end: &deadline - &p.start,
                speed: p.speed,
            })
            .collect(),
    );
    schedule.sort_canonical();
    Ok(schedule)
}

/// Non-preemptive scheduler for clique instances (all active intervals
/// share a point).
pub fn clique(instance: &Instance) -> Result<Schedule, Error> {
    let flags = classify(instance);
    if !flags.clique {
        return Err(Error::WrongFamily(
            "active intervals do not share a common point".into(),
        ));
    }
    if instance.jobs.is_empty() {
        return Ok(Schedule::default());
    }

    let split_time = instance
        .jobs
        .iter()
        .map(|j| j.deadline.clone())
        .min()
        .unwrap();
    let (preemptive, _) = optimal_preemptive(instance, DEFAULT_TOLERANCE)?;
    let split = clique_split(instance, &preemptive, &split_time);

    let mut pieces = Vec::new();
    if !split.left.is_empty() {
        let ids: BTreeSet<&str> = split.left.iter().map(|s| s.as_str()).collect();
        let jobs = instance
            .jobs
            .iter()
            .filter(|j| ids.contains(j.id.as_str()))
            .map(|j| Job {
                deadline: split_time.clone(),
                ..j.clone()
            })
            .collect();
        let left_instance = Instance::new(jobs, instance.machines, instance.alpha)?;
        pieces.extend(cd(&left_instance)?.pieces);
    }
    if !split.right.is_empty() {
        let ids: BTreeSet<&str> = split.right.iter().map(|s| s.as_str()).collect();
        let jobs = instance
            .jobs
            .iter()
            .filter(|j| ids.contains(j.id.as_str()))
            .map(|j| Job {
                release: split_time.clone(),
                ..j.clone()
            })
            .collect();
        let right_instance = Instance::new(jobs, instance.machines, instance.alpha)?;
        pieces.extend(crd(&right_instance)?.pieces);
    }

    let mut schedule = Schedule::new(pieces);
    schedule.sort_canonical();
    Ok(schedule)
}

/// The agreeable decomposition into clique groups.
pub fn partition_agreeable(instance: &Instance) -> Result<Partition, Error> {
    let flags = classify(instance);
    if !flags.agreeable {
        return Err(Error::WrongFamily("instance is not agreeable".into()));
    }
    if instance.jobs.is_empty() {
        return Err(Error::Validation(
            "an empty instance has no agreeable partition".into(),
        ));
    }

    let mut remaining: Vec<usize> = (0..instance.n()).collect();
    let mut entries = Vec::new();
    while !remaining.is_empty() {
        let time = remaining
            .iter()
            .map(|&j| instance.jobs[j].deadline.clone())
            .min()
            .unwrap();
        let (grouped, rest): (Vec<usize>, Vec<usize>) = remaining
            .into_iter()
            .partition(|&j| instance.jobs[j].release <= time);
        debug_assert!(!grouped.is_empty());
        entries.push(PartitionEntry {
            job_ids: grouped
                .into_iter()
                .map(|j| instance.jobs[j].id.clone())
                .collect(),
            time,
        });
        remaining = rest;
    }
    Ok(Partition { entries })
}

/// Halve every active interval toward the anchor `t`: the new window is
/// `[(r + t)/2, (d + t)/2]`, half as long and still containing `t`.
pub fn shrink_to_clique(instance: &Instance, t: &Rational) -> Result<Instance, Error> {
    let two = Rational::new(BigInt::from(2), BigInt::from(1));
    let jobs = instance
        .jobs
        .iter()
        .map(|j| {
            if &j.release > t || &j.deadline < t {
                return Err(Error::BadAnchor(format!(
                    "job {:?} window does not contain {}",
                    j.id, t
                )));
            }
            Ok(Job {
                id: j.id.clone(),
                work: j.work.clone(),
                release: (&j.release + t) / &two,
                deadline: (&j.deadline + t) / &two,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Instance::new(jobs, instance.machines, instance.alpha)
}

/// Non-preemptive scheduler for agreeable instances: partition into
/// clique groups, halve each group's windows toward its group point (so
/// consecutive groups become strictly separated in time), schedule each
/// group with [`clique`] and concatenate.
pub fn agreeable(instance: &Instance) -> Result<Schedule, Error> {
    let flags = classify(instance);
    if !flags.agreeable {
        return Err(Error::WrongFamily("instance is not agreeable".into()));
    }
    if instance.jobs.is_empty() {
        return Ok(Schedule::default());
    }

    let partition = partition_agreeable(instance)?;
    let mut pieces = Vec::new();
    for entry in &partition.entries {
        let ids: BTreeSet<&str> = entry.job_ids.iter().map(|s| s.as_str()).collect();
        let jobs: Vec<Job> = instance
            .jobs
            .iter()
            .filter(|j| ids.contains(j.id.as_str()))
            .cloned()
            .collect();
        let group = Instance::new(jobs, instance.machines, instance.alpha)?;
        let shrunk = shrink_to_clique(&group, &entry.time)?;
        pieces.extend(clique(&shrunk)?.pieces);
    }

    let mut schedule = Schedule::new(pieces);
    schedule.sort_canonical();
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_feasible, total_energy, ScheduleMode};
    use crate::rational::{int, rat};
    use num_traits::Zero;

    fn instance(jobs: Vec<Job>, machines: usize, alpha: f64) -> Instance {
        Instance::new(jobs, machines, alpha).unwrap()
    }

    fn job(id: &str, w: i64, r: i64, d: i64) -> Job {
        Job::new(id, int(w), int(r), int(d))
    }

    #[test]
    fn crd_single_machine_keeps_preemptive_times() {
        let inst = instance(vec![job("a", 1, 0, 1), job("b", 1, 0, 2)], 1, 2.0);
        let schedule = crd(&inst).unwrap();
        let a = schedule.job_pieces("a");
        let b = schedule.job_pieces("b");
        assert_eq!((a[0].start.clone(), a[0].end.clone()), (int(0), int(1)));
        assert_eq!((b[0].start.clone(), b[0].end.clone()), (int(1), int(2)));
        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 2.0).abs() < 1e-12);
    }

    #[test]
    fn crd_two_machines_hits_its_guarantee_exactly() {
        let jobs = (0..3).map(|k| job(&format!("j{k}"), 1, 0, 1)).collect();
        let inst = instance(jobs, 2, 2.0);
        let schedule = crd(&inst).unwrap();
        // p_j = (2/3) / (3/2) = 4/9; two jobs start at 0, the third at 4/9.
        for piece in &schedule.pieces {
            assert_eq!(piece.duration(), rat(4, 9));
            assert_eq!(piece.speed, rat(9, 4));
        }
        let starts: Vec<Rational> = schedule.pieces.iter().map(|p| p.start.clone()).collect();
        assert_eq!(starts.iter().filter(|s| **s == int(0)).count(), 2);
        assert_eq!(starts.iter().filter(|s| **s == rat(4, 9)).count(), 1);
        let report = check_feasible(&inst, &schedule, ScheduleMode::NonPreemptive);
        assert!(report.feasible, "{:?}", report.violations);

        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 6.75).abs() < 1e-12);
        // Ratio against the preemptive optimum 4.5 is exactly the 3/2 bound.
        assert!((energy / 4.5 - 1.5).abs() < 1e-12);
    }

    #[test]
    fn crd_single_job_any_machine_count() {
        // The dispatch shrinks every execution time by 2 − 1/m, a single
        // job included: e = 4 becomes p = 4/(5/3) = 12/5 on three machines.
        let inst = instance(vec![job("a", 2, 0, 4)], 3, 3.0);
        let schedule = crd(&inst).unwrap();
        assert_eq!(schedule.pieces.len(), 1);
        assert_eq!(schedule.pieces[0].end, rat(12, 5));
        assert_eq!(schedule.pieces[0].speed, rat(5, 6));

        // On one machine the factor is 1 and the job fills its window.
        let inst = instance(vec![job("a", 2, 0, 4)], 1, 3.0);
        let schedule = crd(&inst).unwrap();
        assert_eq!(schedule.pieces[0].end, int(4));
        assert_eq!(schedule.pieces[0].speed, rat(1, 2));
    }

    #[test]
    fn crd_rejects_distinct_releases() {
        let inst = instance(vec![job("a", 1, 0, 2), job("b", 1, 1, 2)], 1, 2.0);
        assert!(matches!(crd(&inst), Err(Error::WrongFamily(_))));
    }

    #[test]
    fn cd_single_job_fills_window() {
        let inst = instance(vec![job("a", 1, 0, 2)], 1, 2.0);
        let schedule = cd(&inst).unwrap();
        assert_eq!(schedule.pieces.len(), 1);
        assert_eq!(schedule.pieces[0].start, int(0));
        assert_eq!(schedule.pieces[0].end, int(2));
        assert_eq!(schedule.pieces[0].speed, rat(1, 2));
        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cd_mirrors_the_two_machine_guarantee_case() {
        let jobs = (0..3).map(|k| job(&format!("j{k}"), 1, 0, 1)).collect();
        let inst = instance(jobs, 2, 2.0);
        let schedule = cd(&inst).unwrap();
        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 6.75).abs() < 1e-12);
        let report = check_feasible(&inst, &schedule, ScheduleMode::NonPreemptive);
        assert!(report.feasible, "{:?}", report.violations);
    }

    #[test]
    fn cd_dispatches_later_release_later() {
        let inst = instance(vec![job("j1", 1, 0, 2), job("j2", 1, 1, 2)], 1, 2.0);
        let schedule = cd(&inst).unwrap();
        let first = schedule.job_pieces("j1");
        let second = schedule.job_pieces("j2");
        assert_eq!(
            (first[0].start.clone(), first[0].end.clone()),
            (int(0), int(1))
        );
        assert_eq!(
            (second[0].start.clone(), second[0].end.clone()),
            (int(1), int(2))
        );
        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cd_rejects_distinct_deadlines() {
        let inst = instance(vec![job("a", 1, 0, 2), job("b", 1, 0, 3)], 1, 2.0);
        assert!(matches!(cd(&inst), Err(Error::WrongFamily(_))));
    }

    #[test]
    fn clique_two_job_worked_example() {
        let inst = instance(vec![job("j1", 1, 0, 2), job("j2", 1, 1, 3)], 1, 2.0);
        let schedule = clique(&inst).unwrap();
        let first = schedule.job_pieces("j1");
        assert_eq!(
            (first[0].start.clone(), first[0].end.clone()),
            (int(0), int(2))
        );
        assert_eq!(first[0].speed, rat(1, 2));
        let second = schedule.job_pieces("j2");
        assert_eq!(
            (second[0].start.clone(), second[0].end.clone()),
            (int(2), int(3))
        );
        assert_eq!(second[0].speed, int(1));

        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 1.5).abs() < 1e-12);
        // Preemptive optimum is 4/3, so the ratio is 1.125, well under
        // the (2(2-1/1))^(2-1) = 2 guarantee.
        assert!((energy / (4.0 / 3.0) - 1.125).abs() < 1e-12);

        let report = check_feasible(&inst, &schedule, ScheduleMode::NonPreemptive);
        assert!(report.feasible, "{:?}", report.violations);
    }

    #[test]
    fn clique_single_job_matches_direct_schedulers() {
        // One machine: no shrink factor, the job fills its window.
        let inst = instance(vec![job("a", 2, 1, 3)], 1, 2.0);
        let schedule = clique(&inst).unwrap();
        let energy = total_energy(&inst, &schedule).unwrap();
        // w^α/(d−r)^(α−1) = 4/2 = 2.
        assert!((energy - 2.0).abs() < 1e-12);
        assert_eq!(schedule, cd(&inst).unwrap());

        // Two machines: the 2 − 1/2 factor raises the energy to
        // (3/2)^(α−1) times the preemptive value.
        let inst = instance(vec![job("a", 2, 1, 3)], 2, 2.0);
        let schedule = clique(&inst).unwrap();
        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 3.0).abs() < 1e-12);
    }

    #[test]
    fn clique_handles_an_empty_right_side() {
        // With a common deadline the split point is the deadline itself,
        // so every job lands on the left side.
        let inst = instance(
            vec![job("a", 1, 0, 3), job("b", 2, 1, 3), job("c", 1, 2, 3)],
            2,
            2.0,
        );
        let schedule = clique(&inst).unwrap();
        let report = check_feasible(&inst, &schedule, ScheduleMode::NonPreemptive);
        assert!(report.feasible, "{:?}", report.violations);
        assert_eq!(schedule, cd(&inst).unwrap());
    }

    #[test]
    fn clique_rejects_disjoint_windows() {
        let inst = instance(vec![job("a", 1, 0, 1), job("b", 1, 2, 3)], 1, 2.0);
        assert!(matches!(clique(&inst), Err(Error::WrongFamily(_))));
    }

    #[test]
    fn clique_accepts_pure_laminar() {
        let inst = instance(
            vec![job("a", 1, 0, 6), job("b", 1, 1, 5), job("c", 1, 2, 4)],
            1,
            2.0,
        );
        let flags = classify(&inst);
        assert!(flags.pure_laminar && flags.clique);
        let schedule = clique(&inst).unwrap();
        let report = check_feasible(&inst, &schedule, ScheduleMode::NonPreemptive);
        assert!(report.feasible, "{:?}", report.violations);
    }

    #[test]
    fn partition_disjoint_windows() {
        let inst = instance(vec![job("j1", 1, 0, 2), job("j2", 1, 3, 5)], 1, 2.0);
        let partition = partition_agreeable(&inst).unwrap();
        assert_eq!(partition.k(), 2);
        assert_eq!(partition.entries[0].time, int(2));
        assert_eq!(partition.entries[0].job_ids, vec!["j1"]);
        assert_eq!(partition.entries[1].time, int(5));
        assert_eq!(partition.entries[1].job_ids, vec!["j2"]);
    }

    #[test]
    fn partition_of_clique_is_single_group() {
        let inst = instance(vec![job("a", 1, 0, 3), job("b", 1, 1, 4)], 1, 2.0);
        let partition = partition_agreeable(&inst).unwrap();
        assert_eq!(partition.k(), 1);
        assert_eq!(partition.entries[0].job_ids.len(), 2);
    }

    #[test]
    fn partition_pulls_released_jobs_into_earlier_group() {
        let inst = instance(
            vec![
                job("j1", 1, 0, 2),
                job("j2", 1, 1, 3),
                Job::new("j3", int(1), rat(5, 2), int(4)),
            ],
            1,
            2.0,
        );
        let partition = partition_agreeable(&inst).unwrap();
        assert_eq!(partition.k(), 2);
        assert_eq!(partition.entries[0].time, int(2));
        assert_eq!(partition.entries[0].job_ids, vec!["j1", "j2"]);
        assert_eq!(partition.entries[1].time, int(4));
        assert_eq!(partition.entries[1].job_ids, vec!["j3"]);
    }

    #[test]
    fn shrink_halves_windows_around_anchor() {
        let inst = instance(vec![job("a", 1, 0, 2)], 1, 2.0);
        let shrunk = shrink_to_clique(&inst, &int(2)).unwrap();
        assert_eq!(shrunk.jobs[0].release, int(1));
        assert_eq!(shrunk.jobs[0].deadline, int(2));

        let inst = instance(vec![job("b", 1, 3, 5)], 1, 2.0);
        let shrunk = shrink_to_clique(&inst, &int(5)).unwrap();
        assert_eq!(shrunk.jobs[0].release, int(4));
        assert_eq!(shrunk.jobs[0].deadline, int(5));

        let inst = instance(vec![job("c", 1, 2, 8)], 1, 2.0);
        let shrunk = shrink_to_clique(&inst, &int(5)).unwrap();
        assert_eq!(shrunk.jobs[0].release, rat(7, 2));
        assert_eq!(shrunk.jobs[0].deadline, rat(13, 2));
    }

    #[test]
    fn shrink_rejects_anchor_outside_window() {
        let inst = instance(vec![job("a", 1, 0, 2)], 1, 2.0);
        assert!(matches!(
            shrink_to_clique(&inst, &int(3)),
            Err(Error::BadAnchor(_))
        ));
    }

    #[test]
    fn agreeable_two_disjoint_jobs_worked_example() {
        let inst = instance(vec![job("j1", 1, 0, 2), job("j2", 1, 3, 5)], 1, 2.0);
        let schedule = agreeable(&inst).unwrap();
        let first = schedule.job_pieces("j1");
        assert_eq!(
            (first[0].start.clone(), first[0].end.clone()),
            (int(1), int(2))
        );
        assert_eq!(first[0].speed, int(1));
        let second = schedule.job_pieces("j2");
        assert_eq!(
            (second[0].start.clone(), second[0].end.clone()),
            (int(4), int(5))
        );
        assert_eq!(second[0].speed, int(1));

        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 2.0).abs() < 1e-12);
        // Whole-instance preemptive optimum is 1, ratio 2 <= bound 4.
        let report = check_feasible(&inst, &schedule, ScheduleMode::NonPreemptive);
        assert!(report.feasible, "{:?}", report.violations);
    }

    #[test]
    fn agreeable_single_job_doubles_speed() {
        let inst = instance(vec![job("a", 1, 0, 4)], 1, 3.0);
        let schedule = agreeable(&inst).unwrap();
        assert_eq!(schedule.pieces.len(), 1);
        assert_eq!(schedule.pieces[0].duration(), int(2));
        assert_eq!(schedule.pieces[0].speed, rat(1, 2));
        let energy = total_energy(&inst, &schedule).unwrap();
        // 2^(α−1) × w^α/(d−r)^(α−1) = 4 × 1/16 = 0.25.
        assert!((energy - 0.25).abs() < 1e-12);
    }

    #[test]
    fn agreeable_rejects_non_agreeable() {
        let inst = instance(vec![job("a", 1, 0, 5), job("b", 1, 1, 3)], 1, 2.0);
        assert!(matches!(agreeable(&inst), Err(Error::WrongFamily(_))));
    }

    #[test]
    fn crd_completion_times_respect_the_dispatch_recurrence() {
        // Under EDF dispatch, job k completes by (Σ_{j<k} p_j)/m + p_k.
        let jobs = vec![
            job("a", 2, 0, 2),
            job("b", 1, 0, 2),
            job("c", 3, 0, 5),
            job("d", 1, 0, 6),
            job("e", 2, 0, 6),
        ];
        let inst = instance(jobs, 2, 2.0);
        let profile = optimal_allocation(&inst).unwrap();
        let times = profile.execution_times();
        let shrink = scale_factor(2);
        let schedule = crd(&inst).unwrap();

        let mut order: Vec<usize> = (0..inst.n()).collect();
        order.sort_by(|&x, &y| {
            inst.jobs[x]
                .deadline
                .cmp(&inst.jobs[y].deadline)
                .then_with(|| inst.jobs[x].id.cmp(&inst.jobs[y].id))
        });
        let m = Rational::new(BigInt::from(2), BigInt::from(1));
        let mut prefix = Rational::zero();
        for &j in &order {
            let p = &times[j] / &shrink;
            let completion = schedule.completion_time(&inst.jobs[j].id).unwrap();
            assert!(completion <= &prefix / &m + &p);
            prefix += &p;
        }
    }

    #[test]
    fn ratio_bounds_match_closed_forms() {
        assert!((Algorithm::CommonRelease.ratio_bound(2, 2.0) - 1.5).abs() < 1e-15);
        assert!((Algorithm::Clique.ratio_bound(1, 2.0) - 2.0).abs() < 1e-15);
        assert!((Algorithm::Agreeable.ratio_bound(2, 3.0) - 36.0).abs() < 1e-15);
    }
}
