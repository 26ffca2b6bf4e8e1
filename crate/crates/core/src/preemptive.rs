//! Optimal preemptive multiprocessor scheduling with migration.
//!
//! The energy-minimal preemptive schedule gives every job one constant
//! speed `w_j / e_j`, where the execution times `e_j` maximize the
//! smallest `e_j / w_j` level subject to the interval capacities, then
//! the next level, and so on. The solver computes these levels exactly:
//! on the event-time grid the feasible execution-time vectors form a
//! polymatroid whose capacity questions reduce to min-cuts on a small
//! job/interval network, so each level is found by exact ratio search
//! (Dinkelbach iterations over integer max-flows) and the allocation of
//! each level set is recovered by one more flow. Per interval, the
//! allocated amounts are placed on machines by wrap-around filling.
//!
//! All quantities are exact rationals; only the reported energy is a
//! float.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::flow::FlowNetwork;
use crate::model::{ExecutionPiece, Instance, Schedule};
use crate::rational::{denominator_lcm, to_f64, Rational};

type BigRatio = num_rational::Ratio<BigInt>;

/// Execution time allocated to each job in each event interval.
///
/// `event_times` are the sorted distinct releases and deadlines;
/// `alloc[j][i]` is the time job `j` receives inside interval `i`.
/// Every row satisfies `0 <= alloc[j][i] <= length(i)`, vanishes outside
/// the job's active interval, and each interval's column sum is at most
/// `machines × length(i)`.
#[derive(Debug, Clone)]
pub struct AllocationProfile {
    pub event_times: Vec<Rational>,
    pub alloc: Vec<Vec<Rational>>,
}

impl AllocationProfile {
    pub fn interval_count(&self) -> usize {
        self.event_times.len().saturating_sub(1)
    }

    pub fn interval_length(&self, i: usize) -> Rational {
        &self.event_times[i + 1] - &self.event_times[i]
    }

    /// Total execution time of job `j` across all intervals.
    pub fn execution_time(&self, j: usize) -> Rational {
        self.alloc[j].iter().sum()
    }

    pub fn execution_times(&self) -> Vec<Rational> {
        (0..self.alloc.len())
            .map(|j| self.execution_time(j))
            .collect()
    }
}

/// Scaled-integer view of the instance: event times in ticks, works in
/// multiples of their common denominator.
struct Grid {
    /// Interval lengths in ticks.
    lens: Vec<BigInt>,
    /// `covers[j][i]`: job j's active interval contains event interval i.
    covers: Vec<Vec<bool>>,
    /// Scaled works.
    works: Vec<BigInt>,
}

impl Grid {
    fn build(instance: &Instance, event_times: &[Rational]) -> Grid {
        let time_scale = denominator_lcm(
            instance
                .jobs
                .iter()
                .flat_map(|j| [&j.release, &j.deadline].into_iter()),
        );
        let work_scale = denominator_lcm(instance.jobs.iter().map(|j| &j.work));
        let tick = |t: &Rational| -> BigInt {
            (t * Rational::from_integer(time_scale.clone())).to_integer()
        };
        let ticks: Vec<BigInt> = event_times.iter().map(tick).collect();
        let lens = ticks.windows(2).map(|w| &w[1] - &w[0]).collect();
        let covers = instance
            .jobs
            .iter()
            .map(|job| {
                event_times
                    .windows(2)
                    .map(|w| job.release <= w[0] && w[1] <= job.deadline)
                    .collect()
            })
            .collect();
        let works = instance
            .jobs
            .iter()
            .map(|j| (&j.work * Rational::from_integer(work_scale.clone())).to_integer())
            .collect();
        Grid {
            lens,
            covers,
            works,
        }
    }

    /// `Σ_i len_i · min(residual_i, |S ∩ jobs covering i|)`: the total
    /// time the jobs of `S` can still receive.
    fn capacity(&self, jobs: &[usize], residual: &[usize]) -> BigInt {
        let mut total = BigInt::zero();
        for (i, len) in self.lens.iter().enumerate() {
            let count = jobs.iter().filter(|&&j| self.covers[j][i]).count();
            total += len * BigInt::from(count.min(residual[i]));
        }
        total
    }

    fn work_sum(&self, jobs: &[usize]) -> BigInt {
        jobs.iter().map(|&j| self.works[j].clone()).sum()
    }
}

/// Find the smallest achievable level `θ = capacity(S) / work(S)` over
/// nonempty subsets of `active`, and the maximal subset attaining it.
fn min_level(grid: &Grid, active: &[usize], residual: &[usize]) -> (BigRatio, Vec<usize>) {
    let mut theta = BigRatio::new(grid.capacity(active, residual), grid.work_sum(active));
    loop {
        let (value, subset) = min_cut_level(grid, active, residual, &theta);
        let target = theta.numer() * grid.work_sum(active);
        if value == target {
            // No subset beats θ: θ is the optimum and `subset` is the
            // maximal tight set.
            debug_assert!(!subset.is_empty());
            return (theta, subset);
        }
        debug_assert!(!subset.is_empty());
        let next = BigRatio::new(grid.capacity(&subset, residual), grid.work_sum(&subset));
        debug_assert!(next < theta);
        theta = next;
    }
}

/// Min cut of the level network for a candidate θ = p/q. Returns the cut
/// value (in `p·work` units) and the job set on the maximal source side,
/// which minimizes `q·capacity(S) − p·work(S)`.
fn min_cut_level(
    grid: &Grid,
    active: &[usize],
    residual: &[usize],
    theta: &BigRatio,
) -> (BigInt, Vec<usize>) {
    let intervals: Vec<usize> = (0..grid.lens.len()).filter(|&i| residual[i] > 0).collect();
    let source = 0usize;
    let job_node = |k: usize| 1 + k;
    let interval_node = |pos: usize| 1 + active.len() + pos;
    let sink = 1 + active.len() + intervals.len();
    let mut net = FlowNetwork::new(sink + 1);

    for (k, &j) in active.iter().enumerate() {
        net.add_arc(source, job_node(k), theta.numer() * &grid.works[j]);
    }
    for (pos, &i) in intervals.iter().enumerate() {
        let scaled_len = theta.denom() * &grid.lens[i];
        for (k, &j) in active.iter().enumerate() {
            if grid.covers[j][i] {
                net.add_arc(job_node(k), interval_node(pos), scaled_len.clone());
            }
        }
        net.add_arc(
            interval_node(pos),
            sink,
            &scaled_len * BigInt::from(residual[i]),
        );
    }

    let value = net.max_flow(source, sink);
    let side = net.max_min_cut_source_side(sink);
    let subset = active
        .iter()
        .enumerate()
        .filter(|(k, _)| side[job_node(*k)])
        .map(|(_, &j)| j)
        .collect();
    (value, subset)
}

/// Distribute the level set's execution times over its intervals by one
/// feasibility flow. `theta` is the level; the per-interval budget is
/// what the set consumes there.
fn extract_level_allocation(
    grid: &Grid,
    level_jobs: &[usize],
    residual: &[usize],
    theta: &BigRatio,
    time_scale: &Rational,
    alloc: &mut [Vec<Rational>],
) {
    let intervals: Vec<usize> = (0..grid.lens.len())
        .filter(|&i| residual[i] > 0 && level_jobs.iter().any(|&j| grid.covers[j][i]))
        .collect();
    let source = 0usize;
    let job_node = |k: usize| 1 + k;
    let interval_node = |pos: usize| 1 + level_jobs.len() + pos;
    let sink = 1 + level_jobs.len() + intervals.len();
    let mut net = FlowNetwork::new(sink + 1);

    let mut demand_arcs = Vec::with_capacity(level_jobs.len());
    let mut alloc_arcs: Vec<(usize, usize, usize)> = Vec::new();
    for (k, &j) in level_jobs.iter().enumerate() {
        let demand = theta.numer() * &grid.works[j];
        demand_arcs.push((net.add_arc(source, job_node(k), demand.clone()), demand));
    }
    for (pos, &i) in intervals.iter().enumerate() {
        let scaled_len = theta.denom() * &grid.lens[i];
        let count = level_jobs.iter().filter(|&&j| grid.covers[j][i]).count();
        for (k, &j) in level_jobs.iter().enumerate() {
            if grid.covers[j][i] {
                let arc = net.add_arc(job_node(k), interval_node(pos), scaled_len.clone());
                alloc_arcs.push((arc, j, i));
            }
        }
        let budget = &scaled_len * BigInt::from(count.min(residual[i]));
        net.add_arc(interval_node(pos), sink, budget);
    }

    net.max_flow(source, sink);
    // Tightness of the level set guarantees every demand is met in full.
    for (arc, demand) in demand_arcs {
        debug_assert_eq!(net.flow(arc), &demand);
    }
    // Flows are in (θ-denominator × tick) units.
    let unit = Rational::new(BigInt::one(), theta.denom().clone()) * time_scale;
    for (arc, j, i) in alloc_arcs {
        let flow = net.flow(arc);
        if !flow.is_zero() {
            alloc[j][i] = Rational::from_integer(flow.clone()) * &unit;
        }
    }
}

/// Compute the optimal execution-time allocation on the event grid.
pub fn optimal_allocation(instance: &Instance) -> Result<AllocationProfile, Error> {
    instance.validate()?;
    let n = instance.n();
    let mut event_times: Vec<Rational> = instance
        .jobs
        .iter()
        .flat_map(|j| [j.release.clone(), j.deadline.clone()])
        .collect();
    event_times.sort();
    event_times.dedup();
    if n == 0 {
        return Ok(AllocationProfile {
            event_times,
            alloc: Vec::new(),
        });
    }

    let grid = Grid::build(instance, &event_times);
    let time_scale = {
        let l = denominator_lcm(event_times.iter());
        Rational::new(BigInt::one(), l)
    };

    let intervals = grid.lens.len();
    let mut residual = vec![instance.machines; intervals];
    let mut active: Vec<usize> = (0..n).collect();
    let mut alloc = vec![vec![Rational::zero(); intervals]; n];
    let mut previous_level: Option<BigRatio> = None;

    while !active.is_empty() {
        let (theta, level_jobs) = min_level(&grid, &active, &residual);
        if !theta.is_positive() {
            return Err(Error::InfeasibleInstance(
                "a job set has no usable execution window".into(),
            ));
        }
        if let Some(prev) = &previous_level {
            debug_assert!(&theta > prev, "levels must increase strictly");
        }
        extract_level_allocation(
            &grid,
            &level_jobs,
            &residual,
            &theta,
            &time_scale,
            &mut alloc,
        );
        for (i, slot) in residual.iter_mut().enumerate() {
            let count = level_jobs.iter().filter(|&&j| grid.covers[j][i]).count();
            *slot -= count.min(*slot);
        }
        active.retain(|j| !level_jobs.contains(j));
        previous_level = Some(theta);
    }

    // Reject vanishing execution times instead of emitting unbounded speeds.
    let max_deadline = instance.jobs.iter().map(|j| &j.deadline).max().unwrap();
    let threshold = max_deadline / Rational::from_integer(BigInt::from(10u64).pow(12));
    let profile = AllocationProfile { event_times, alloc };
    for (j, job) in instance.jobs.iter().enumerate() {
        let e = profile.execution_time(j);
        if e < threshold {
            return Err(Error::InfeasibleInstance(format!(
                "execution time of job {:?} is numerically degenerate",
                job.id
            )));
        }
    }
    debug_assert_profile(instance, &profile);
    Ok(profile)
}

fn debug_assert_profile(instance: &Instance, profile: &AllocationProfile) {
    if cfg!(debug_assertions) {
        let m = Rational::from_integer(BigInt::from(instance.machines));
        for i in 0..profile.interval_count() {
            let len = profile.interval_length(i);
            let mut column = Rational::zero();
            for (j, job) in instance.jobs.iter().enumerate() {
                let x = &profile.alloc[j][i];
                assert!(!x.is_negative() && x <= &len);
                let inside = job.release <= profile.event_times[i]
                    && profile.event_times[i + 1] <= job.deadline;
                assert!(inside || x.is_zero());
                column += x;
            }
            assert!(column <= &m * &len);
        }
    }
}

/// Energy `Σ_j w_j^α / e_j^(α−1)` of a constant-speed allocation.
pub fn allocation_energy(instance: &Instance, execution_times: &[Rational]) -> f64 {
    instance
        .jobs
        .iter()
        .zip(execution_times)
        .map(|(job, e)| {
            let w = to_f64(&job.work);
            let speed = w / to_f64(e);
            w * speed.powf(instance.alpha - 1.0)
        })
        .sum()
}

/// Turn an allocation into concrete pieces: per interval, the allocated
/// amounts are laid across the machines by wrap-around filling, which
/// never runs a job in parallel with itself because each amount is at
/// most the interval length.
pub fn schedule_from_allocation(
    instance: &Instance,
    profile: &AllocationProfile,
) -> Result<Schedule, Error> {
    let times = profile.execution_times();
    let mut speeds = Vec::with_capacity(instance.n());
    for (job, e) in instance.jobs.iter().zip(&times) {
        if e.is_zero() {
            return Err(Error::InfeasibleInstance(format!(
                "job {:?} received no execution time",
                job.id
            )));
        }
        speeds.push(&job.work / e);
    }

    let mut schedule = Schedule::default();
    for i in 0..profile.interval_count() {
        let lo = &profile.event_times[i];
        let len = profile.interval_length(i);
        let mut machine = 0usize;
        let mut used = Rational::zero();
        for (j, job) in instance.jobs.iter().enumerate() {
            let mut amount = profile.alloc[j][i].clone();
            while amount.is_positive() {
                debug_assert!(machine < instance.machines);
                let room = &len - &used;
                let slice = amount.clone().min(room.clone());
                schedule.pieces.push(ExecutionPiece {
                    job: job.id.clone(),
                    machine,
                    start: lo + &used,
                    end: lo + &used + &slice,
                    speed: speeds[j].clone(),
                });
                amount -= &slice;
                used += &slice;
                if used == len {
                    machine += 1;
                    used = Rational::zero();
                }
            }
        }
    }
    schedule.coalesce();
    Ok(schedule)
}

/// Compute an optimal preemptive schedule and a certified lower bound on
/// the optimal preemptive energy.
///
/// The allocation is exact, so the schedule energy and the bound
/// coincide up to the floating-point safety margin; the pair satisfies
/// `lower_bound <= optimum <= energy <= (1 + tolerance) × lower_bound`
/// for any positive `tolerance`.
pub fn optimal_preemptive(instance: &Instance, tolerance: f64) -> Result<(Schedule, f64), Error> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let profile = optimal_allocation(instance)?;
    let schedule = schedule_from_allocation(instance, &profile)?;
    let energy = allocation_energy(instance, &profile.execution_times());
    let margin = (tolerance / 2.0).min(1e-12);
    Ok((schedule, energy * (1.0 - margin)))
}

/// Exact optimal preemptive schedule on a single machine, via iterative
/// critical-interval peeling: repeatedly find the window of maximum work
/// density, run its jobs there at that density in deadline order, freeze
/// the window and continue with the rest. On agreeable input every job
/// comes out as one contiguous piece.
pub fn yds_single(instance: &Instance) -> Result<Schedule, Error> {
    if instance.machines != 1 {
        return Err(Error::WrongMachineCount {
            expected: 1,
            got: instance.machines,
        });
    }
    instance.validate()?;

    let jobs = &instance.jobs;
    let mut active: Vec<usize> = (0..jobs.len()).collect();
    let mut frozen: Vec<(Rational, Rational)> = Vec::new();
    let mut pieces: Vec<ExecutionPiece> = Vec::new();

    while !active.is_empty() {
        let releases: Vec<&Rational> = sorted_unique(active.iter().map(|&j| &jobs[j].release));
        let deadlines: Vec<&Rational> = sorted_unique(active.iter().map(|&j| &jobs[j].deadline));

        // Maximum-density candidate window; ties prefer the earliest
        // start, then the widest window.
        let mut best: Option<(Rational, &Rational, &Rational, Vec<usize>)> = None;
        for &a in &releases {
            for &b in &deadlines {
                if b <= a {
                    continue;
                }
                let contained: Vec<usize> = active
                    .iter()
                    .copied()
                    .filter(|&j| {
                        contains_effectively(&jobs[j].release, &jobs[j].deadline, a, b, &frozen)
                    })
                    .collect();
                if contained.is_empty() {
                    continue;
                }
                let avail = available_length(a, b, &frozen);
                if !avail.is_positive() {
                    return Err(Error::InfeasibleInstance(
                        "jobs confined to a zero-width window".into(),
                    ));
                }
                let work: Rational = contained.iter().map(|&j| jobs[j].work.clone()).sum();
                let density = work / avail;
                let better = match &best {
                    None => true,
                    Some((d, ba, bb, _)) => {
                        density > *d || (density == *d && (a < *ba || (a == *ba && b > *bb)))
                    }
                };
                if better {
                    best = Some((density, a, b, contained));
                }
            }
        }

        let (speed, a, b, contained) =
            best.expect("an active job's own window is always a candidate");
        let segments = subtract_frozen(a, b, &frozen);
        edf_layout(jobs, &contained, &speed, &segments, &mut pieces)?;
        let (a, b) = (a.clone(), b.clone());
        merge_frozen(&mut frozen, a, b);
        active.retain(|j| !contained.contains(j));
    }

    let mut schedule = Schedule::new(pieces);
    schedule.coalesce();
    Ok(schedule)
}

fn sorted_unique<'a>(values: impl Iterator<Item = &'a Rational>) -> Vec<&'a Rational> {
    let mut v: Vec<&Rational> = values.collect();
    v.sort();
    v.dedup();
    v
}

/// Whether `[x, y]` is fully covered by the frozen set (vacuously true
/// for empty ranges).
fn covered(x: &Rational, y: &Rational, frozen: &[(Rational, Rational)]) -> bool {
    if y <= x {
        return true;
    }
    let mut cursor = x.clone();
    for (fa, fb) in frozen {
        if fa > &cursor {
            return false;
        }
        if fb > &cursor {
            cursor = fb.clone();
            if &cursor >= y {
                return true;
            }
        }
    }
    false
}

/// Containment of a job window in `[a, b]` up to already-frozen time:
/// overhangs that are entirely frozen do not count.
fn contains_effectively(
    release: &Rational,
    deadline: &Rational,
    a: &Rational,
    b: &Rational,
    frozen: &[(Rational, Rational)],
) -> bool {
    (release >= a || covered(release, a, frozen)) && (deadline <= b || covered(b, deadline, frozen))
}

fn available_length(a: &Rational, b: &Rational, frozen: &[(Rational, Rational)]) -> Rational {
    let mut len = b - a;
    for (fa, fb) in frozen {
        let lo = fa.max(a);
        let hi = fb.min(b);
        if hi > lo {
            len -= hi - lo;
        }
    }
    len
}

/// `[a, b]` minus the frozen set, as ordered segments.
fn subtract_frozen(
    a: &Rational,
    b: &Rational,
    frozen: &[(Rational, Rational)],
) -> Vec<(Rational, Rational)> {
    let mut segments = Vec::new();
    let mut cursor = a.clone();
    for (fa, fb) in frozen {
        if fb <= &cursor {
            continue;
        }
        if fa >= b {
            break;
        }
        if fa > &cursor {
            segments.push((cursor.clone(), fa.min(b).clone()));
        }
        cursor = cursor.max(fb.clone());
        if &cursor >= b {
            break;
        }
    }
    if &cursor < b {
        segments.push((cursor, b.clone()));
    }
    segments
}

fn merge_frozen(frozen: &mut Vec<(Rational, Rational)>, a: Rational, b: Rational) {
    frozen.push((a, b));
    frozen.sort_by(|x, y| x.0.cmp(&y.0));
    let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(frozen.len());
    for (fa, fb) in frozen.drain(..) {
        if let Some(last) = merged.last_mut() {
            if fa <= last.1 {
                if fb > last.1 {
                    last.1 = fb;
                }
                continue;
            }
        }
        merged.push((fa, fb));
    }
    *frozen = merged;
}

/// Earliest-deadline-first layout of `contained` jobs at `speed` over the
/// given free segments. Preemption happens only when a strictly smaller
/// deadline arrives, so equal-deadline arrivals never split a running job.
fn edf_layout(
    jobs: &[crate::model::Job],
    contained: &[usize],
    speed: &Rational,
    segments: &[(Rational, Rational)],
    out: &mut Vec<ExecutionPiece>,
) -> Result<(), Error> {
    let mut remaining: BTreeMap<usize, Rational> = contained
        .iter()
        .map(|&j| (j, &jobs[j].work / speed))
        .collect();
    let mut running: Option<usize> = None;

    for (seg_start, seg_end) in segments {
        let mut t = seg_start.clone();
        while &t < seg_end && !remaining.is_empty() {
            let ready: Vec<usize> = remaining
                .keys()
                .copied()
                .filter(|&j| jobs[j].release <= t)
                .collect();
            if ready.is_empty() {
                // Idle until the next release inside this segment.
                let next = remaining
                    .keys()
                    .map(|&j| &jobs[j].release)
                    .filter(|r| *r > &t)
                    .min()
                    .cloned();
                match next {
                    Some(r) if &r < seg_end => {
                        t = r;
                        continue;
                    }
                    _ => break,
                }
            }
            let pick = *ready
                .iter()
                .min_by_key(|&&j| (&jobs[j].deadline, running != Some(j), &jobs[j].id))
                .unwrap();
            let completion = &t + &remaining[&pick];
            let next_release = remaining
                .keys()
                .map(|&j| &jobs[j].release)
                .filter(|r| *r > &t)
                .min();
            let mut until = completion.clone().min(seg_end.clone());
            if let Some(r) = next_release {
                if r < &until {
                    until = r.clone();
                }
            }
            debug_assert!(until > t);
            out.push(ExecutionPiece {
                job: jobs[pick].id.clone(),
                machine: 0,
                start: t.clone(),
                end: until.clone(),
                speed: speed.clone(),
            });
            let used = &until - &t;
            let left = remaining.get_mut(&pick).unwrap();
            *left -= used;
            if left.is_zero() {
                remaining.remove(&pick);
                running = None;
            } else {
                running = Some(pick);
            }
            t = until;
        }
    }

    if remaining.is_empty() {
        Ok(())
    } else {
        Err(Error::InfeasibleInstance(
            "critical window could not absorb its jobs".into(),
        ))
    }
}

/// Per-job execution time strictly before `t` and at-or-after `t`;
/// pieces straddling `t` are split there. Jobs without pieces get zeros.
pub fn split_times_at(
    instance: &Instance,
    schedule: &Schedule,
    t: &Rational,
) -> BTreeMap<String, (Rational, Rational)> {
    let mut split: BTreeMap<String, (Rational, Rational)> = instance
        .jobs
        .iter()
        .map(|j| (j.id.clone(), (Rational::zero(), Rational::zero())))
        .collect();
    for piece in &schedule.pieces {
        let entry = match split.get_mut(piece.job.as_str()) {
            Some(e) => e,
            None => continue,
        };
        if &piece.end <= t {
            entry.0 += piece.duration();
        } else if &piece.start >= t {
            entry.1 += piece.duration();
        } else {
            entry.0 += t - &piece.start;
            entry.1 += &piece.end - t;
        }
    }
    split
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_feasible, total_energy, Job, ScheduleMode};
    use crate::rational::{int, rat};

    fn instance(jobs: Vec<Job>, machines: usize, alpha: f64) -> Instance {
        Instance::new(jobs, machines, alpha).unwrap()
    }

    #[test]
    fn single_job_stretches_over_its_window() {
        for m in [1usize, 3] {
            let inst = instance(vec![Job::new("a", int(3), int(1), int(4))], m, 2.5);
            let profile = optimal_allocation(&inst).unwrap();
            assert_eq!(profile.execution_time(0), int(3));
            let (schedule, lb) = optimal_preemptive(&inst, 1e-9).unwrap();
            let energy = total_energy(&inst, &schedule).unwrap();
            // w^α / (d-r)^(α-1) = 3^2.5 / 3^1.5 = 3.
            assert!((energy - 3.0).abs() < 1e-12);
            assert!(lb <= energy && energy <= lb * (1.0 + 1e-9));
        }
    }

    #[test]
    fn two_nested_jobs_run_at_unit_speed() {
        let inst = instance(
            vec![
                Job::new("a", int(1), int(0), int(1)),
                Job::new("b", int(1), int(0), int(2)),
            ],
            1,
            2.0,
        );
        let profile = optimal_allocation(&inst).unwrap();
        assert_eq!(profile.execution_time(0), int(1));
        assert_eq!(profile.execution_time(1), int(1));
        let (schedule, _) = optimal_preemptive(&inst, 1e-9).unwrap();
        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 2.0).abs() < 1e-12);
        let report = check_feasible(&inst, &schedule, ScheduleMode::Preemptive);
        assert!(report.feasible, "{:?}", report.violations);
    }

    #[test]
    fn three_unit_jobs_on_two_machines_share_evenly() {
        let jobs = (0..3)
            .map(|k| Job::new(format!("j{k}"), int(1), int(0), int(1)))
            .collect();
        let inst = instance(jobs, 2, 2.0);
        let profile = optimal_allocation(&inst).unwrap();
        for j in 0..3 {
            assert_eq!(profile.execution_time(j), rat(2, 3));
        }
        let (schedule, lb) = optimal_preemptive(&inst, 1e-9).unwrap();
        let energy = total_energy(&inst, &schedule).unwrap();
        assert!((energy - 4.5).abs() < 1e-12);
        assert!(lb <= energy);
        let report = check_feasible(&inst, &schedule, ScheduleMode::Preemptive);
        assert!(report.feasible, "{:?}", report.violations);
    }

    #[test]
    fn constant_speed_across_pieces() {
        let inst = instance(
            vec![
                Job::new("a", int(2), int(0), int(2)),
                Job::new("b", int(1), int(1), int(3)),
                Job::new("c", int(2), int(0), int(4)),
            ],
            2,
            3.0,
        );
        let (schedule, _) = optimal_preemptive(&inst, 1e-9).unwrap();
        for job in &inst.jobs {
            let speeds: Vec<_> = schedule
                .pieces
                .iter()
                .filter(|p| p.job == job.id)
                .map(|p| p.speed.clone())
                .collect();
            assert!(!speeds.is_empty());
            assert!(speeds.iter().all(|s| *s == speeds[0]));
        }
        let report = check_feasible(&inst, &schedule, ScheduleMode::Preemptive);
        assert!(report.feasible, "{:?}", report.violations);
    }

    #[test]
    fn yds_two_jobs() {
        let inst = instance(
            vec![
                Job::new("a", int(1), int(0), int(1)),
                Job::new("b", int(1), int(0), int(2)),
            ],
            1,
            2.0,
        );
        let schedule = yds_single(&inst).unwrap();
        assert_eq!(schedule.pieces.len(), 2);
        let a = schedule.job_pieces("a");
        assert_eq!((a[0].start.clone(), a[0].end.clone()), (int(0), int(1)));
        assert_eq!(a[0].speed, int(1));
        let b = schedule.job_pieces("b");
        assert_eq!((b[0].start.clone(), b[0].end.clone()), (int(1), int(2)));
        assert_eq!(b[0].speed, int(1));
    }

    #[test]
    fn yds_single_job() {
        let inst = instance(vec![Job::new("a", int(3), int(1), int(4))], 1, 3.0);
        let schedule = yds_single(&inst).unwrap();
        assert_eq!(schedule.pieces.len(), 1);
        assert_eq!(schedule.pieces[0].start, int(1));
        assert_eq!(schedule.pieces[0].end, int(4));
        assert_eq!(schedule.pieces[0].speed, int(1));
    }

    #[test]
    fn yds_rejects_multiprocessor_input() {
        let inst = instance(vec![Job::new("a", int(1), int(0), int(1))], 2, 2.0);
        assert!(matches!(
            yds_single(&inst),
            Err(Error::WrongMachineCount {
                expected: 1,
                got: 2
            })
        ));
    }

    #[test]
    fn yds_gap_family_runs_at_unit_speed() {
        for n in [3i64, 5, 8] {
            let mut jobs: Vec<Job> = (1..n)
                .map(|j| Job::new(format!("j{j:02}"), int(1), int(2 * j - 1), int(2 * j)))
                .collect();
            jobs.push(Job::new(format!("j{n:02}"), int(n), int(0), int(2 * n - 1)));
            let inst = instance(jobs, 1, 2.0);
            let schedule = yds_single(&inst).unwrap();
            assert!(schedule.pieces.iter().all(|p| p.speed == int(1)));
            let energy = total_energy(&inst, &schedule).unwrap();
            assert!((energy - (2 * n - 1) as f64).abs() < 1e-12);
            let report = check_feasible(&inst, &schedule, ScheduleMode::Preemptive);
            assert!(report.feasible, "{:?}", report.violations);
        }
    }

    #[test]
    fn split_at_interval_point() {
        let inst = instance(vec![Job::new("a", int(3), int(0), int(3))], 1, 2.0);
        let schedule = Schedule::new(vec![ExecutionPiece {
            job: "a".into(),
            machine: 0,
            start: int(0),
            end: int(3),
            speed: int(1),
        }]);
        let split = split_times_at(&inst, &schedule, &int(2));
        assert_eq!(split["a"], (int(2), int(1)));
    }

    #[test]
    fn split_with_detached_pieces() {
        let inst = instance(vec![Job::new("a", int(2), int(0), int(5))], 1, 2.0);
        let schedule = Schedule::new(vec![
            ExecutionPiece {
                job: "a".into(),
                machine: 0,
                start: int(0),
                end: int(1),
                speed: int(1),
            },
            ExecutionPiece {
                job: "a".into(),
                machine: 0,
                start: int(4),
                end: int(5),
                speed: int(1),
            },
        ]);
        let split = split_times_at(&inst, &schedule, &int(2));
        assert_eq!(split["a"], (int(1), int(1)));
    }

    #[test]
    fn split_of_solved_two_job_overlap() {
        // Both jobs run at speed 2/3 in the preemptive optimum; the job
        // released first has all its time before the earliest deadline.
        let inst = instance(
            vec![
                Job::new("j1", int(1), int(0), int(2)),
                Job::new("j2", int(1), int(1), int(3)),
            ],
            1,
            2.0,
        );
        let profile = optimal_allocation(&inst).unwrap();
        assert_eq!(profile.execution_time(0), rat(3, 2));
        assert_eq!(profile.execution_time(1), rat(3, 2));
        let (schedule, _) = optimal_preemptive(&inst, 1e-9).unwrap();
        let split = split_times_at(&inst, &schedule, &int(2));
        assert_eq!(split["j1"], (rat(3, 2), int(0)));
        assert_eq!(split["j2"], (rat(1, 2), int(1)));
    }

    #[test]
    fn empty_instance_solves_to_empty_schedule() {
        let inst = instance(vec![], 2, 2.0);
        let (schedule, lb) = optimal_preemptive(&inst, 1e-9).unwrap();
        assert!(schedule.is_empty());
        assert_eq!(lb, 0.0);
    }

    #[test]
    fn tolerance_must_be_positive() {
        let inst = instance(vec![Job::new("a", int(1), int(0), int(1))], 1, 2.0);
        assert!(optimal_preemptive(&inst, 0.0).is_err());
        assert!(optimal_preemptive(&inst, -1.0).is_err());
    }
}
