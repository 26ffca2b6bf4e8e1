//! Desk-scale ground truth.
//!
//! * [`brute_force_nonpreemptive`] — the optimal non-preemptive schedule
//!   by exhaustive search over machine assignments and per-machine job
//!   orders, with a convex timing solve per order.
//! * [`fixed_order_timing`] — the inner convex subproblem: optimal piece
//!   boundaries for a fixed single-machine job order.
//! * [`preemptive_convex`] — an independent check of the preemptive
//!   solver: the allocation program solved numerically by a log-barrier
//!   interior-point method with a dual lower bound.
//! * [`gap_instance`] / [`gap_energies`] — the family on which the
//!   optimal non-preemptive energy exceeds the preemptive one by a
//!   factor of order `n^(α−1)`, with both closed-form energies.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::model::{ExecutionPiece, Instance, Job, Schedule};
use crate::rational::{int, to_f64, Rational};

/// Result of the exhaustive non-preemptive search.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub energy: f64,
    pub schedule: Schedule,
    /// Number of fixed-order timing problems solved during the search.
    pub enumerated: u64,
    pub tolerance: f64,
}

const MAX_ORACLE_JOBS: usize = 8;
const MAX_ORACLE_MACHINES: usize = 3;

/// Default relative tolerance of the oracle's inner convex solves.
pub const DEFAULT_ORACLE_TOLERANCE: f64 = 1e-7;

/// Optimal boundaries for running `jobs` back to back (with gaps where
/// releases force them) in the given order on one machine.
///
/// Returns the boundary times `t_0 <= t_1 <= ... <= t_k`: job `i`
/// occupies `[max(t_i, r_i), min(t_{i+1}, d_i)]`, so when no window edge
/// binds, consecutive jobs share boundaries exactly. The energy
/// `Σ w_i^α / duration_i^(α−1)` is minimized to the given relative
/// tolerance by cyclic exact line search on the boundaries.
pub fn fixed_order_timing(
    jobs: &[Job],
    alpha: f64,
    tolerance: f64,
) -> Result<(Vec<Rational>, f64), Error> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let k = jobs.len();
    if k == 0 {
        return Ok((Vec::new(), 0.0));
    }

    // Exact feasibility: earliest starts forward, latest ends backward.
    let mut earliest: Vec<Rational> = Vec::with_capacity(k);
    for (i, job) in jobs.iter().enumerate() {
        let lo = if i == 0 {
            job.release.clone()
        } else {
            job.release.clone().max(earliest[i - 1].clone())
        };
        earliest.push(lo);
    }
    let mut latest = vec![Rational::zero(); k];
    for (i, job) in jobs.iter().enumerate().rev() {
        let hi = if i == k - 1 {
            job.deadline.clone()
        } else {
            job.deadline.clone().min(latest[i + 1].clone())
        };
        latest[i] = hi;
    }
    for i in 0..k {
        if earliest[i] >= latest[i] {
            return Err(Error::InfeasibleOrder);
        }
    }

    // Strictly feasible rational starting point: each job ends midway
    // between its earliest possible start and latest possible end.
    let two = int(2);
    let mut ends: Vec<Rational> = Vec::with_capacity(k);
    for i in 0..k {
        let floor = if i == 0 {
            earliest[i].clone()
        } else {
            earliest[i].clone().max(ends[i - 1].clone())
        };
        ends.push((&floor + &latest[i]) / &two);
    }

    let release: Vec<f64> = jobs.iter().map(|j| to_f64(&j.release)).collect();
    let deadline: Vec<f64> = jobs.iter().map(|j| to_f64(&j.deadline)).collect();
    let work: Vec<f64> = jobs.iter().map(|j| to_f64(&j.work)).collect();

    let mut bounds = vec![0.0f64; k + 1];
    bounds[0] = release[0];
    bounds[k] = deadline[k - 1];
    for i in 1..k {
        bounds[i] = to_f64(&ends[i - 1]);
    }

    let term = |w: f64, duration: f64| -> f64 {
        if duration <= 0.0 {
            return f64::INFINITY;
        }
        w * (w / duration).powf(alpha - 1.0)
    };
    let duration = |bounds: &[f64], i: usize| -> f64 {
        bounds[i + 1].min(deadline[i]) - bounds[i].max(release[i])
    };
    let energy_of =
        |bounds: &[f64]| -> f64 { (0..k).map(|i| term(work[i], duration(bounds, i))).sum() };

    let mut energy = energy_of(&bounds);
    for _ in 0..200_000 {
        for i in 1..k {
            let lo = bounds[i - 1];
            let hi = bounds[i + 1];
            let left_start = bounds[i - 1].max(release[i - 1]);
            let right_end = bounds[i + 1].min(deadline[i]);
            // Equal-speed stationary point of the two adjacent terms.
            let balanced =
                (work[i] * left_start + work[i - 1] * right_end) / (work[i - 1] + work[i]);
            let mut candidates = [
                balanced.clamp(lo, hi),
                deadline[i - 1].clamp(lo, hi),
                release[i].clamp(lo, hi),
                lo,
                hi,
            ];
            candidates.sort_by(f64::total_cmp);
            // Evaluate the pair objective at each candidate.
            let pair = |b: f64| -> f64 {
                term(work[i - 1], b.min(deadline[i - 1]) - left_start)
                    + term(work[i], right_end - b.max(release[i]))
            };
            let mut best = bounds[i];
            let mut best_value = pair(bounds[i]);
            for &c in &candidates {
                let value = pair(c);
                if value < best_value {
                    best_value = value;
                    best = c;
                }
            }
            bounds[i] = best;
        }
        let next = energy_of(&bounds);
        let converged =
            energy.is_finite() && (energy - next).abs() <= energy.abs() * tolerance / 10.0;
        energy = next;
        if converged {
            break;
        }
    }
    let _ = energy;

    // Rational finalization. The clamped semantics keep windows satisfied
    // structurally; only monotonicity needs enforcing after conversion.
    let mut exact: Vec<Rational> = Vec::with_capacity(k + 1);
    exact.push(jobs[0].release.clone());
    for &b in bounds.iter().take(k).skip(1) {
        let r = Rational::from_float(b).unwrap_or_else(Rational::zero);
        let prev = exact.last().unwrap().clone();
        exact.push(r.max(prev));
    }
    exact.push(jobs[k - 1].deadline.clone());
    for i in (1..k).rev() {
        if exact[i] > exact[i + 1] {
            exact[i] = exact[i + 1].clone();
        }
    }

    let durations: Vec<Rational> = (0..k)
        .map(|i| {
            let start = exact[i].clone().max(jobs[i].release.clone());
            let end = exact[i + 1].clone().min(jobs[i].deadline.clone());
            end - start
        })
        .collect();
    if durations.iter().any(|d| !d.is_positive()) {
        // Degenerate float corner: fall back to the strictly feasible
        // rational midpoint chain.
        let mut fallback = Vec::with_capacity(k + 1);
        fallback.push(jobs[0].release.clone());
        for end in ends.iter().take(k - 1) {
            fallback.push(end.clone());
        }
        fallback.push(jobs[k - 1].deadline.clone());
        let energy = energy_of_exact(jobs, alpha, &fallback);
        return Ok((fallback, energy));
    }

    let energy = energy_of_exact(jobs, alpha, &exact);
    Ok((exact, energy))
}

fn energy_of_exact(jobs: &[Job], alpha: f64, bounds: &[Rational]) -> f64 {
    jobs.iter()
        .enumerate()
        .map(|(i, job)| {
            let start = bounds[i].clone().max(job.release.clone());
            let end = bounds[i + 1].clone().min(job.deadline.clone());
            let w = to_f64(&job.work);
            w * (w / to_f64(&(end - start))).powf(alpha - 1.0)
        })
        .sum()
}

fn pieces_for_order(jobs: &[&Job], bounds: &[Rational], machine: usize) -> Vec<ExecutionPiece> {
    jobs.iter()
        .enumerate()
        .map(|(i, job)| {
            let start = bounds[i].clone().max(job.release.clone());
            let end = bounds[i + 1].clone().min(job.deadline.clone());
            let speed = &job.work / (&end - &start);
            ExecutionPiece {
                job: job.id.clone(),
                machine,
                start,
                end,
                speed,
            }
        })
        .collect()
}

struct MaskSolution {
    energy: f64,
    order: Vec<usize>,
    bounds: Vec<Rational>,
}

/// Optimal non-preemptive schedule by exhaustive search: every partition
/// of the jobs over the machines, and for each machine every distinct
/// job order, with the timing of each order solved as a convex program.
/// Sizes are capped at `n <= 8`, `m <= 3`.
pub fn brute_force_nonpreemptive(
    instance: &Instance,
    tolerance: f64,
) -> Result<OracleResult, Error> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    instance.validate()?;
    let n = instance.n();
    if n > MAX_ORACLE_JOBS {
        return Err(Error::TooLarge(format!(
            "{n} jobs exceeds the search limit of {MAX_ORACLE_JOBS}"
        )));
    }
    if instance.machines > MAX_ORACLE_MACHINES {
        return Err(Error::TooLarge(format!(
            "{} machines exceeds the search limit of {MAX_ORACLE_MACHINES}",
            instance.machines
        )));
    }
    if n == 0 {
        return Ok(OracleResult {
            energy: 0.0,
            schedule: Schedule::default(),
            enumerated: 0,
            tolerance,
        });
    }

    let full: u32 = (1u32 << n) - 1;
    let machines = instance.machines.min(n);
    let mut enumerated = 0u64;

    // Best single-machine solution per job subset. With one machine only
    // the full set is ever used.
    let mut best_single: Vec<Option<MaskSolution>> = Vec::with_capacity(1 << n);
    for mask in 0..=full {
        if mask == 0 || (machines == 1 && mask != full) {
            best_single.push(None);
            continue;
        }
        best_single.push(best_order_for_mask(
            instance,
            mask,
            tolerance,
            &mut enumerated,
        ));
    }

    // Partition the full set into at most `machines` unlabeled parts.
    // dp[k][mask]: best energy covering `mask` with at most k parts.
    let size = (full as usize) + 1;
    let mut dp: Vec<Vec<Option<f64>>> = vec![vec![None; size]; machines + 1];
    let mut choice: Vec<Vec<u32>> = vec![vec![0; size]; machines + 1];
    dp[0][0] = Some(0.0);
    for k in 1..=machines {
        dp[k][0] = Some(0.0);
        for mask in 1..=full {
            let low = mask & mask.wrapping_neg();
            let mut sub = mask;
            while sub != 0 {
                if sub & low != 0 {
                    if let Some(part) = &best_single[sub as usize] {
                        if let Some(rest) = dp[k - 1][(mask & !sub) as usize] {
                            let candidate = part.energy + rest;
                            if dp[k][mask as usize].is_none_or(|cur| candidate < cur) {
                                dp[k][mask as usize] = Some(candidate);
                                choice[k][mask as usize] = sub;
                            }
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
    }

    let energy = dp[machines][full as usize].ok_or_else(|| {
        Error::InfeasibleInstance("no feasible non-preemptive schedule found".into())
    })?;

    // Reconstruct, assigning parts to machines in discovery order.
    let mut pieces = Vec::new();
    let mut mask = full;
    let mut k = machines;
    let mut machine = 0usize;
    while mask != 0 {
        let part = choice[k][mask as usize];
        let solution = best_single[part as usize].as_ref().unwrap();
        let ordered: Vec<&Job> = solution.order.iter().map(|&j| &instance.jobs[j]).collect();
        pieces.extend(pieces_for_order(&ordered, &solution.bounds, machine));
        machine += 1;
        mask &= !part;
        k -= 1;
    }
    let mut schedule = Schedule::new(pieces);
    schedule.sort_canonical();

    Ok(OracleResult {
        energy,
        schedule,
        enumerated,
        tolerance,
    })
}

/// Best order of the jobs in `mask` on one machine. Identical jobs
/// (equal work, release and deadline) are interchangeable, so only
/// distinct type sequences are tried.
fn best_order_for_mask(
    instance: &Instance,
    mask: u32,
    tolerance: f64,
    enumerated: &mut u64,
) -> Option<MaskSolution> {
    let mut members: Vec<usize> = (0..instance.n())
        .filter(|&j| mask & (1 << j) != 0)
        .collect();
    members.sort_by(|&a, &b| {
        let ja = &instance.jobs[a];
        let jb = &instance.jobs[b];
        (&ja.work, &ja.release, &ja.deadline, &ja.id).cmp(&(
            &jb.work,
            &jb.release,
            &jb.deadline,
            &jb.id,
        ))
    });
    let same_type = |a: usize, b: usize| {
        let ja = &instance.jobs[a];
        let jb = &instance.jobs[b];
        ja.work == jb.work && ja.release == jb.release && ja.deadline == jb.deadline
    };

    let mut used = vec![false; members.len()];
    let mut prefix: Vec<usize> = Vec::with_capacity(members.len());
    let mut best: Option<MaskSolution> = None;

    #[allow(clippy::too_many_arguments)]
    fn descend(
        instance: &Instance,
        members: &[usize],
        same_type: &dyn Fn(usize, usize) -> bool,
        used: &mut [bool],
        prefix: &mut Vec<usize>,
        tolerance: f64,
        enumerated: &mut u64,
        best: &mut Option<MaskSolution>,
    ) {
        if prefix.len() == members.len() {
            *enumerated += 1;
            let jobs: Vec<Job> = prefix.iter().map(|&j| instance.jobs[j].clone()).collect();
            if let Ok((bounds, energy)) = fixed_order_timing(&jobs, instance.alpha, tolerance) {
                if best.as_ref().is_none_or(|b| energy < b.energy) {
                    *best = Some(MaskSolution {
                        energy,
                        order: prefix.clone(),
                        bounds,
                    });
                }
            }
            return;
        }
        for pos in 0..members.len() {
            if used[pos] {
                continue;
            }
            if pos > 0 && !used[pos - 1] && same_type(members[pos - 1], members[pos]) {
                continue;
            }
            used[pos] = true;
            prefix.push(members[pos]);
            descend(
                instance, members, same_type, used, prefix, tolerance, enumerated, best,
            );
            prefix.pop();
            used[pos] = false;
        }
    }

    descend(
        instance,
        &members,
        &same_type,
        &mut used,
        &mut prefix,
        tolerance,
        enumerated,
        &mut best,
    );
    best
}

/// The family exhibiting the preemptive/non-preemptive energy gap:
/// `n − 1` unit-work jobs pinned to the slots `[2j−1, 2j]` and one job of
/// work `n` active over the whole of `[0, 2n−1]`, on a single machine.
pub fn gap_instance(n: usize, alpha: f64) -> Result<Instance, Error> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "gap family needs n >= 3, got {n}"
        )));
    }
    let mut jobs: Vec<Job> = (1..n)
        .map(|j| {
            Job::new(
                format!("j{j:02}"),
                int(1),
                int(2 * j as i64 - 1),
                int(2 * j as i64),
            )
        })
        .collect();
    jobs.push(Job::new(
        format!("j{n:02}"),
        int(n as i64),
        int(0),
        int(2 * n as i64 - 1),
    ));
    Instance::new(jobs, 1, alpha)
}

/// Closed-form energies of the gap family: the preemptive optimum
/// `2n − 1` and the non-preemptive value `3((n+2)/3)^α + (n−3)` achieved
/// by compressing the first two unit jobs around the big one in `[1, 4]`.
pub fn gap_energies(n: usize, alpha: f64) -> (f64, f64) {
    let nf = n as f64;
    let preemptive = 2.0 * nf - 1.0;
    let nonpreemptive = 3.0 * ((nf + 2.0) / 3.0).powf(alpha) + (nf - 3.0);
    (preemptive, nonpreemptive)
}

/// The witness schedule behind the non-preemptive closed form: jobs 1,
/// n, 2 run at speed `(n+2)/3` packed into `[1, 4]`, every other unit
/// job fills its own slot at speed one.
pub fn gap_witness_schedule(n: usize) -> Result<Schedule, Error> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "gap family needs n >= 3, got {n}"
        )));
    }
    let speed = Rational::new(BigInt::from(n as i64 + 2), BigInt::from(3));
    let unit_duration = Rational::new(BigInt::from(3), BigInt::from(n as i64 + 2));
    let mut pieces = vec![
        ExecutionPiece {
            job: "j01".into(),
            machine: 0,
            start: int(1),
            end: &int(1) + &unit_duration,
            speed: speed.clone(),
        },
        ExecutionPiece {
            job: format!("j{n:02}"),
            machine: 0,
            start: &int(1) + &unit_duration,
            end: &int(4) - &unit_duration,
            speed: speed.clone(),
        },
        ExecutionPiece {
            job: "j02".into(),
            machine: 0,
            start: &int(4) - &unit_duration,
            end: int(4),
            speed,
        },
    ];
    for j in 3..n {
        pieces.push(ExecutionPiece {
            job: format!("j{j:02}"),
            machine: 0,
            start: int(2 * j as i64 - 1),
            end: int(2 * j as i64),
            speed: int(1),
        });
    }
    let mut schedule = Schedule::new(pieces);
    schedule.sort_canonical();
    Ok(schedule)
}

/// Result of the interior-point solve of the preemptive allocation
/// program: a primal (upper) energy and a dual lower bound bracketing
/// the optimum.
#[derive(Debug, Clone, Copy)]
pub struct ConvexSolution {
    pub energy: f64,
    pub lower_bound: f64,
}

/// Solve the preemptive allocation program numerically: minimize
/// `Σ_j w_j^α e_j^(1−α)` over per-interval time allocations subject to
/// piece caps and machine capacity, by a log-barrier interior-point
/// method. Independent of the exact solver; used to cross-check it.
///
/// The reported `lower_bound` is the Lagrangian dual evaluated at
/// multipliers read off the iterate, so it is valid regardless of how
/// well the Newton centering converged.
pub fn preemptive_convex(instance: &Instance, tolerance: f64) -> Result<ConvexSolution, Error> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    instance.validate()?;
    let n = instance.n();
    if n == 0 {
        return Ok(ConvexSolution {
            energy: 0.0,
            lower_bound: 0.0,
        });
    }

    let mut events: Vec<Rational> = instance
        .jobs
        .iter()
        .flat_map(|j| [j.release.clone(), j.deadline.clone()])
        .collect();
    events.sort();
    events.dedup();
    let lens: Vec<f64> = events
        .windows(2)
        .map(|w| to_f64(&(&w[1] - &w[0])))
        .collect();
    let works: Vec<f64> = instance.jobs.iter().map(|j| to_f64(&j.work)).collect();
    let alpha = instance.alpha;
    let m = instance.machines as f64;

    // Variables: one allocation per (job, covered interval).
    let mut var_job: Vec<usize> = Vec::new();
    let mut var_interval: Vec<usize> = Vec::new();
    let mut interval_vars: Vec<Vec<usize>> = vec![Vec::new(); lens.len()];
    let mut job_vars: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, job) in instance.jobs.iter().enumerate() {
        for i in 0..lens.len() {
            if job.release <= events[i] && events[i + 1] <= job.deadline {
                let v = var_job.len();
                var_job.push(j);
                var_interval.push(i);
                interval_vars[i].push(v);
                job_vars[j].push(v);
            }
        }
    }
    let nvars = var_job.len();
    // Machine capacity can only bind where more than m jobs share an
    // interval; elsewhere the piece caps already imply it, and keeping
    // the redundant constraint would degrade the barrier conditioning.
    let busy_intervals: Vec<usize> = (0..lens.len())
        .filter(|&i| interval_vars[i].len() > instance.machines)
        .collect();
    let constraints = (2 * nvars + busy_intervals.len()) as f64;

    let mut x = vec![0.0f64; nvars];
    for v in 0..nvars {
        let i = var_interval[v];
        let crowd = interval_vars[i].len() as f64;
        x[v] = lens[i] * (m / crowd).min(1.0) * 0.5;
    }

    let exec = |x: &[f64], j: usize| -> f64 { job_vars[j].iter().map(|&v| x[v]).sum() };
    let objective = |x: &[f64]| -> f64 {
        (0..n)
            .map(|j| {
                let e = exec(x, j);
                works[j] * (works[j] / e).powf(alpha - 1.0)
            })
            .sum()
    };
    let slack = |x: &[f64], i: usize| -> f64 {
        m * lens[i] - interval_vars[i].iter().map(|&v| x[v]).sum::<f64>()
    };
    let barrier = |x: &[f64], t: f64| -> f64 {
        let mut phi = t * objective(x);
        for v in 0..nvars {
            let cap = lens[var_interval[v]];
            if x[v] <= 0.0 || x[v] >= cap {
                return f64::INFINITY;
            }
            phi -= x[v].ln() + (cap - x[v]).ln();
        }
        for &i in &busy_intervals {
            let s = slack(x, i);
            if s <= 0.0 {
                return f64::INFINITY;
            }
            phi -= s.ln();
        }
        phi
    };

    // Lagrangian dual value with capacity and piece-cap multipliers read
    // off the current point (central-path estimates 1/(t·slack)):
    //   q = Σ_j min_{e>0} [w_j^α e^(1−α) + c_j e] − Σ_i μ_i m len_i − Σ_v η_v len_v
    // where c_j is the cheapest marginal cost over the job's variables.
    // Every multiplier is nonnegative, so q never exceeds the optimum.
    let dual_bound = |x: &[f64], t: f64| -> f64 {
        let mu: Vec<f64> = busy_intervals
            .iter()
            .map(|&i| 1.0 / (t * slack(x, i)))
            .collect();
        let mut interval_mu = vec![0.0f64; lens.len()];
        for (pos, &i) in busy_intervals.iter().enumerate() {
            interval_mu[i] = mu[pos];
        }
        let eta: Vec<f64> = (0..nvars)
            .map(|v| 1.0 / (t * (lens[var_interval[v]] - x[v])))
            .collect();

        let mut value = 0.0;
        for j in 0..n {
            let cheapest = job_vars[j]
                .iter()
                .map(|&v| interval_mu[var_interval[v]] + eta[v])
                .fold(f64::INFINITY, f64::min);
            if cheapest <= 0.0 {
                continue;
            }
            let best_e = ((alpha - 1.0) * works[j].powf(alpha) / cheapest).powf(1.0 / alpha);
            value += works[j].powf(alpha) * best_e.powf(1.0 - alpha) + cheapest * best_e;
        }
        for (pos, &i) in busy_intervals.iter().enumerate() {
            value -= mu[pos] * m * lens[i];
        }
        for v in 0..nvars {
            value -= eta[v] * lens[var_interval[v]];
        }
        value
    };

    let mut best_lower = f64::NEG_INFINITY;
    let mut t = constraints / objective(&x).max(1e-300);
    'outer: for _ in 0..120 {
        // Newton centering for the current barrier parameter, with ridge
        // escalation when a step fails to make progress.
        let mut ridge_boost = 1.0f64;
        let mut iterations = 0;
        while iterations < 120 {
            iterations += 1;
            let mut grad = vec![0.0f64; nvars];
            let mut hess = vec![0.0f64; nvars * nvars];
            let e: Vec<f64> = (0..n).map(|j| exec(&x, j)).collect();
            for v in 0..nvars {
                let j = var_job[v];
                let cap = lens[var_interval[v]];
                let df = (1.0 - alpha) * works[j].powf(alpha) * e[j].powf(-alpha);
                grad[v] = t * df - 1.0 / x[v] + 1.0 / (cap - x[v]);
                hess[v * nvars + v] += 1.0 / (x[v] * x[v]) + 1.0 / ((cap - x[v]) * (cap - x[v]));
            }
            for j in 0..n {
                let d2f = alpha * (alpha - 1.0) * works[j].powf(alpha) * e[j].powf(-alpha - 1.0);
                for &v in &job_vars[j] {
                    for &u in &job_vars[j] {
                        hess[v * nvars + u] += t * d2f;
                    }
                }
            }
            for &i in &busy_intervals {
                let s = slack(&x, i);
                for &v in &interval_vars[i] {
                    grad[v] += 1.0 / s;
                }
                let w = 1.0 / (s * s);
                for &v in &interval_vars[i] {
                    for &u in &interval_vars[i] {
                        hess[v * nvars + u] += w;
                    }
                }
            }
            if ridge_boost > 1.0 {
                let scale = (0..nvars)
                    .map(|v| hess[v * nvars + v])
                    .fold(0.0f64, f64::max);
                for v in 0..nvars {
                    hess[v * nvars + v] += scale * 1e-14 * ridge_boost;
                }
            }

            let Some(direction) = solve_spd(&mut hess, &grad, nvars) else {
                break;
            };
            let decrement: f64 = grad.iter().zip(&direction).map(|(g, d)| g * d).sum();
            // Newton decrement: the barrier suboptimality is about
            // decrement/2, negligible against the duality gap once small.
            if decrement.abs() / 2.0 < 1e-9 {
                break;
            }

            // Fraction to the boundary, then backtracking.
            let mut step = 1.0f64;
            for v in 0..nvars {
                let cap = lens[var_interval[v]];
                if direction[v] < 0.0 {
                    step = step.min(0.99 * x[v] / -direction[v]);
                }
                if direction[v] > 0.0 {
                    step = step.min(0.99 * (cap - x[v]) / direction[v]);
                }
            }
            for &i in &busy_intervals {
                let push: f64 = interval_vars[i].iter().map(|&v| direction[v]).sum();
                if push > 0.0 {
                    step = step.min(0.99 * slack(&x, i) / push);
                }
            }
            let phi0 = barrier(&x, t);
            let mut improved = false;
            for _ in 0..60 {
                let trial: Vec<f64> = x
                    .iter()
                    .zip(&direction)
                    .map(|(xi, di)| xi - step * di)
                    .collect();
                if barrier(&trial, t) <= phi0 - 1e-4 * step * decrement {
                    x = trial;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if improved {
                ridge_boost = 1.0;
            } else {
                // Rounding left no usable descent; damp the system and
                // retry a few times before giving up on this stage.
                ridge_boost *= 1e4;
                if ridge_boost > 1e14 {
                    break;
                }
            }
        }

        let value = objective(&x);
        best_lower = best_lower.max(dual_bound(&x, t));
        if value - best_lower <= tolerance * value / 4.0 {
            break 'outer;
        }
        t *= 10.0;
    }

    let value = objective(&x);
    best_lower = best_lower.max(dual_bound(&x, t));
    Ok(ConvexSolution {
        energy: value,
        lower_bound: best_lower.min(value),
    })
}

/// Solve `H d = g` for symmetric positive definite `H` (destroyed), by
/// Cholesky after symmetric Jacobi scaling. The barrier Hessians span
/// many orders of magnitude across variables; normalizing the diagonal
/// keeps the factorization accurate.
fn solve_spd(h: &mut [f64], g: &[f64], n: usize) -> Option<Vec<f64>> {
    let scale: Vec<f64> = (0..n)
        .map(|i| {
            let d = h[i * n + i];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] *= scale[i] * scale[j];
        }
    }
    for i in 0..n {
        h[i * n + i] += 1e-14;
    }
    // In-place lower Cholesky.
    for i in 0..n {
        for j in 0..=i {
            let mut sum = h[i * n + j];
            for k in 0..j {
                sum -= h[i * n + k] * h[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                h[i * n + i] = sum.sqrt();
            } else {
                h[i * n + j] = sum / h[j * n + j];
            }
        }
    }
    // Forward then backward substitution on the scaled system.
    let mut y: Vec<f64> = (0..n).map(|i| g[i] * scale[i]).collect();
    for i in 0..n {
        for k in 0..i {
            let delta = h[i * n + k] * y[k];
            y[i] -= delta;
        }
        y[i] /= h[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let delta = h[k * n + i] * y[k];
            y[i] -= delta;
        }
        y[i] /= h[i * n + i];
    }
    for i in 0..n {
        y[i] *= scale[i];
    }
    Some(y)
}
