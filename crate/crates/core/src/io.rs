//! File formats: JSON instances and schedules, CSV benchmark reports.
//!
//! Rationals travel as `"p/q"` strings in lowest terms; decimal literals
//! are accepted on input and converted exactly. Writers emit a fixed
//! field order and sort pieces by (machine, start), so output is
//! byte-reproducible.

use std::fmt::Write as _;

use serde_json::Value;

use crate::error::Error;
use crate::model::{total_energy, ExecutionPiece, Instance, Job, Schedule, ScheduleMode};
use crate::rational::{format_ratio, parse_rational, to_f64, Rational};

/// Provenance block written by the instance generator.
#[derive(Debug, Clone)]
pub struct GeneratorMeta {
    pub generator: String,
    pub family: String,
    pub seed: u64,
}

/// One benchmark row: how an algorithm's energy compares to the
/// preemptive lower bound and to its guarantee.
#[derive(Debug, Clone)]
pub struct RatioRecord {
    pub instance_id: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub algorithm: String,
    pub energy: f64,
    pub preemptive_lb: f64,
    pub ratio: f64,
    pub bound: f64,
    pub within_bound: bool,
}

impl RatioRecord {
    /// Build a row; `ratio` and `within_bound` are derived here so every
    /// report applies the same acceptance slack.
    #[allow(clippy::too_many_arguments)]
    pub fn evaluate(
        instance_id: impl Into<String>,
        family: impl Into<String>,
        n: usize,
        m: usize,
        alpha: f64,
        algorithm: impl Into<String>,
        energy: f64,
        preemptive_lb: f64,
        bound: f64,
    ) -> Self {
        let ratio = energy / preemptive_lb;
        RatioRecord {
            instance_id: instance_id.into(),
            family: family.into(),
            n,
            m,
            alpha,
            algorithm: algorithm.into(),
            energy,
            preemptive_lb,
            ratio,
            bound,
            within_bound: ratio <= bound * (1.0 + 1e-9),
        }
    }
}

fn field<'v>(value: &'v Value, key: &str, context: &str) -> Result<&'v Value, Error> {
    value
        .get(key)
        .ok_or_else(|| Error::Parse(format!("{context}: missing field {key:?}")))
}

/// Accept a rational either as a string (`"3/2"`, `"1.5"`) or as a JSON
/// number whose literal is converted exactly.
fn rational_field(value: &Value, key: &str, context: &str) -> Result<Rational, Error> {
    match field(value, key, context)? {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!(
            "{context}: field {key:?} must be a rational, got {other}"
        ))),
    }
    .map_err(|e| Error::Parse(format!("{context}.{key}: {e}")))
}

/// Parse an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, Error> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let alpha = field(&value, "alpha", "instance")?
        .as_f64()
        .ok_or_else(|| Error::Parse("instance.alpha must be a number".into()))?;
    let machines = field(&value, "machines", "instance")?
        .as_u64()
        .ok_or_else(|| Error::Parse("instance.machines must be a nonnegative integer".into()))?
        as usize;
    let jobs_value = field(&value, "jobs", "instance")?
        .as_array()
        .ok_or_else(|| Error::Parse("instance.jobs must be an array".into()))?;

    let mut jobs = Vec::with_capacity(jobs_value.len());
    for (index, entry) in jobs_value.iter().enumerate() {
        let context = format!("jobs[{index}]");
        let id = field(entry, "id", &context)?
            .as_str()
            .ok_or_else(|| Error::Parse(format!("{context}.id must be a string")))?
            .to_string();
        jobs.push(Job {
            id,
            work: rational_field(entry, "work", &context)?,
            release: rational_field(entry, "release", &context)?,
            deadline: rational_field(entry, "deadline", &context)?,
        });
    }
    Instance::new(jobs, machines, alpha)
}

/// Serialize an instance.
pub fn write_instance(instance: &Instance) -> String {
    write_instance_with_meta(instance, None)
}

/// Serialize an instance with an optional generator provenance block.
pub fn write_instance_with_meta(instance: &Instance, meta: Option<&GeneratorMeta>) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"alpha\": {},", instance.alpha);
    let _ = writeln!(out, "  \"machines\": {},", instance.machines);
    if let Some(meta) = meta {
        let _ = writeln!(
            out,
            "  \"meta\": {{\"generator\": {}, \"family\": {}, \"seed\": {}}},",
            json_string(&meta.generator),
            json_string(&meta.family),
            meta.seed
        );
    }
    out.push_str("  \"jobs\": [\n");
    for (index, job) in instance.jobs.iter().enumerate() {
        let comma = if index + 1 == instance.jobs.len() {
            ""
        } else {
            ","
        };
        let _ = writeln!(
            out,
            "    {{\"id\": {}, \"work\": {}, \"release\": {}, \"deadline\": {}}}{comma}",
            json_string(&job.id),
            json_string(&format_ratio(&job.work)),
            json_string(&format_ratio(&job.release)),
            json_string(&format_ratio(&job.deadline)),
        );
    }
    out.push_str("  ]\n}\n");
    out
}

/// Serialize a schedule with per-job and total energies.
pub fn write_schedule(
    instance: &Instance,
    schedule: &Schedule,
    mode: ScheduleMode,
) -> Result<String, Error> {
    let energy = total_energy(instance, schedule)?;
    let mut pieces = schedule.clone();
    pieces.sort_canonical();

    let mut job_energy: Vec<(String, f64)> = instance
        .jobs
        .iter()
        .map(|job| {
            let e = pieces
                .pieces
                .iter()
                .filter(|p| p.job == job.id)
                .map(|p| to_f64(&p.speed).powf(instance.alpha) * to_f64(&p.duration()))
                .sum();
            (job.id.clone(), e)
        })
        .collect();
    job_energy.sort_by(|a, b| a.0.cmp(&b.0));

    let mode = match mode {
        ScheduleMode::Preemptive => "preemptive",
        ScheduleMode::NonPreemptive => "nonpreemptive",
    };
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"mode\": \"{mode}\",");
    out.push_str("  \"pieces\": [\n");
    for (index, piece) in pieces.pieces.iter().enumerate() {
        let comma = if index + 1 == pieces.pieces.len() {
            ""
        } else {
            ","
        };
        let _ = writeln!(
            out,
            "    {{\"job\": {}, \"machine\": {}, \"start\": {}, \"end\": {}, \"speed\": {}}}{comma}",
            json_string(&piece.job),
            piece.machine,
            json_string(&format_ratio(&piece.start)),
            json_string(&format_ratio(&piece.end)),
            json_string(&format_ratio(&piece.speed)),
        );
    }
    out.push_str("  ],\n");
    out.push_str("  \"job_energies\": [\n");
    for (index, (id, e)) in job_energy.iter().enumerate() {
        let comma = if index + 1 == job_energy.len() {
            ""
        } else {
            ","
        };
        let _ = writeln!(
            out,
            "    {{\"job\": {}, \"energy\": {}}}{comma}",
            json_string(id),
            fmt_f64(*e)
        );
    }
    out.push_str("  ],\n");
    let _ = writeln!(out, "  \"energy\": {}", fmt_f64(energy));
    out.push_str("}\n");
    Ok(out)
}

/// Parse a schedule document.
pub fn parse_schedule(text: &str) -> Result<(ScheduleMode, Schedule), Error> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let mode = match field(&value, "mode", "schedule")?.as_str() {
        Some("preemptive") => ScheduleMode::Preemptive,
        Some("nonpreemptive") => ScheduleMode::NonPreemptive,
        _ => {
            return Err(Error::Parse(
                "schedule.mode must be \"preemptive\" or \"nonpreemptive\"".into(),
            ))
        }
    };
    let pieces_value = field(&value, "pieces", "schedule")?
        .as_array()
        .ok_or_else(|| Error::Parse("schedule.pieces must be an array".into()))?;
    let mut pieces = Vec::with_capacity(pieces_value.len());
    for (index, entry) in pieces_value.iter().enumerate() {
        let context = format!("pieces[{index}]");
        let job = field(entry, "job", &context)?
            .as_str()
            .ok_or_else(|| Error::Parse(format!("{context}.job must be a string")))?
            .to_string();
        let machine = field(entry, "machine", &context)?
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("{context}.machine must be an integer")))?
            as usize;
        let start = rational_field(entry, "start", &context)?;
        let end = rational_field(entry, "end", &context)?;
        let speed = rational_field(entry, "speed", &context)?;
        if start >= end {
            return Err(Error::Validation(format!(
                "{context}: piece must have positive duration"
            )));
        }
        pieces.push(ExecutionPiece {
            job,
            machine,
            start,
            end,
            speed,
        });
    }
    for (index, piece) in pieces.iter().enumerate() {
        if piece.speed <= Rational::from_integer(0.into()) {
            return Err(Error::Validation(format!(
                "pieces[{index}]: speed must be positive"
            )));
        }
    }
    Ok((mode, Schedule::new(pieces)))
}

/// Render ratio records as CSV (RFC 4180 fields, LF line endings).
pub fn write_report(rows: &[RatioRecord]) -> String {
    let mut out = String::from(
        "instance_id,family,n,m,alpha,algorithm,energy,preemptive_lb,ratio,bound,within_bound\n",
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            row.instance_id,
            row.family,
            row.n,
            row.m,
            fmt_f64(row.alpha),
            row.algorithm,
            fmt_f64(row.energy),
            fmt_f64(row.preemptive_lb),
            fmt_f64(row.ratio),
            fmt_f64(row.bound),
            row.within_bound,
        );
    }
    out
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v}")
    }
}
