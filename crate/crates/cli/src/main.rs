//! Command-line driver: generate, classify, solve, check and benchmark
//! speed-scaling instances.
//!
//! Exit codes: 0 on success, 1 on infeasibility or a violated energy
//! bound, 2 on usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use speedscale::approx::Algorithm;
use speedscale::generators::{generate, Family, GenSpec, GENERATOR_NAME};
use speedscale::io::{
    parse_instance, parse_schedule, write_instance_with_meta, write_report, write_schedule,
    GeneratorMeta, RatioRecord,
};
use speedscale::model::{check_feasible, classify, total_energy, ScheduleMode};
use speedscale::oracle::{brute_force_nonpreemptive, gap_energies, gap_instance};
use speedscale::preemptive::optimal_preemptive;
use speedscale::{Error, DEFAULT_TOLERANCE};

/// Energy-minimal speed scaling: preemptive lower bounds and
/// non-preemptive schedulers with proven ratio guarantees.
#[derive(Parser)]
#[command(name = "speedscale", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance of a family.
    Gen(GenArgs),
    /// Report which structural families an instance belongs to.
    Classify { file: PathBuf },
    /// Schedule an instance and report energy, lower bound and ratio.
    Solve(SolveArgs),
    /// Check a schedule file against an instance file.
    Check(CheckArgs),
    /// Run randomized ratio benchmarks and write a CSV report.
    Bench(BenchArgs),
    /// Print the preemptive/non-preemptive gap family energies.
    Gap(GapArgs),
}

#[derive(Args)]
struct GenArgs {
    /// common-release | common-deadline | clique | agreeable | pure-laminar | gap
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output instance file.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// crd | cd | clique | agr | preemptive | oracle | auto
    #[arg(long, default_value = "auto")]
    alg: String,
    /// Relative solver tolerance (also via SPEEDSCALE_TOLERANCE).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write the schedule to this file.
    #[arg(short, long)]
    output: Option<PathBuf>,
    file: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// pre | npr
    #[arg(long, default_value = "npr")]
    mode: String,
    instance: PathBuf,
    schedule: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated families.
    #[arg(
        long,
        default_value = "common-release,common-deadline,clique,pure-laminar,agreeable"
    )]
    families: String,
    /// Trials per (family, alpha, machines) combination.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Comma-separated alpha values.
    #[arg(long, default_value = "1.5,2,3")]
    alphas: String,
    /// Comma-separated machine counts.
    #[arg(long, default_value = "1,2,3,8")]
    machines: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GapArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    /// Also confirm the closed form by brute force (n <= 8).
    #[arg(long, default_value_t = false)]
    verify_oracle: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::InfeasibleInstance(_) | Error::InfeasibleOrder | Error::GenerationFailure(_) => 1,
        _ => 2,
    }
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn tolerance(flag: Option<f64>) -> Result<f64, Error> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("SPEEDSCALE_TOLERANCE") {
        Ok(raw) => raw
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("bad SPEEDSCALE_TOLERANCE {raw:?}"))),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Classify { file } => cmd_classify(&file),
        Command::Solve(args) => cmd_solve(args),
        Command::Check(args) => cmd_check(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Gap(args) => cmd_gap(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let family: Family = args.family.parse()?;
    let mut spec = GenSpec::new(family, args.n, args.m, args.alpha, args.seed);
    if family == Family::Gap {
        spec.gap_n = Some(args.n);
    }
    let instance = generate(&spec)?;
    let meta = GeneratorMeta {
        generator: GENERATOR_NAME.into(),
        family: family.to_string(),
        seed: args.seed,
    };
    write_file(
        &args.output,
        &write_instance_with_meta(&instance, Some(&meta)),
    )?;
    eprintln!(
        "wrote {} ({family}, n={}, m={}, alpha={})",
        args.output.display(),
        instance.n(),
        instance.machines,
        instance.alpha
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(file: &PathBuf) -> Result<ExitCode, Error> {
    let instance = parse_instance(&read_file(file)?)?;
    let flags = classify(&instance);
    println!("common_release: {}", flags.common_release);
    println!("common_deadline: {}", flags.common_deadline);
    println!("clique: {}", flags.clique);
    println!("agreeable: {}", flags.agreeable);
    println!("laminar: {}", flags.laminar);
    println!("pure_laminar: {}", flags.pure_laminar);
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Error> {
    let instance = parse_instance(&read_file(&args.file)?)?;
    let tol = tolerance(args.tolerance)?;

    if args.alg == "preemptive" {
        let (schedule, lower_bound) = optimal_preemptive(&instance, tol)?;
        let energy = total_energy(&instance, &schedule)?;
        println!("energy: {energy}");
        println!("preemptive_lb: {lower_bound}");
        println!("ratio: {}", energy / lower_bound.max(f64::MIN_POSITIVE));
        if let Some(path) = &args.output {
            write_file(
                path,
                &write_schedule(&instance, &schedule, ScheduleMode::Preemptive)?,
            )?;
        }
        return Ok(ExitCode::SUCCESS);
    }

    if args.alg == "oracle" {
        let result = brute_force_nonpreemptive(&instance, tol)?;
        let (_, lower_bound) = optimal_preemptive(&instance, tol)?;
        println!("energy: {}", result.energy);
        println!("preemptive_lb: {lower_bound}");
        println!(
            "ratio: {}",
            result.energy / lower_bound.max(f64::MIN_POSITIVE)
        );
        println!("enumerated: {}", result.enumerated);
        if let Some(path) = &args.output {
            write_file(
                path,
                &write_schedule(&instance, &result.schedule, ScheduleMode::NonPreemptive)?,
            )?;
        }
        return Ok(ExitCode::SUCCESS);
    }

    let algorithm = if args.alg == "auto" {
        Algorithm::auto_select(&classify(&instance)).ok_or_else(|| {
            Error::WrongFamily("no scheduler applies: instance is not agreeable".into())
        })?
    } else {
        args.alg.parse::<Algorithm>()?
    };

    let schedule = algorithm.run(&instance)?;
    let (_, lower_bound) = optimal_preemptive(&instance, tol)?;
    let energy = total_energy(&instance, &schedule)?;
    let bound = algorithm.ratio_bound(instance.machines, instance.alpha);
    let ratio = energy / lower_bound.max(f64::MIN_POSITIVE);
    println!("energy: {energy}");
    println!("preemptive_lb: {lower_bound}");
    println!("ratio: {ratio}");
    println!("bound: {bound}");
    println!("within_bound: {}", ratio <= bound * (1.0 + 1e-9));

    if let Some(path) = &args.output {
        write_file(
            path,
            &write_schedule(&instance, &schedule, ScheduleMode::NonPreemptive)?,
        )?;
    }

    let report = check_feasible(&instance, &schedule, ScheduleMode::NonPreemptive);
    if !report.feasible {
        for violation in &report.violations {
            eprintln!(
                "violation: {:?} {}: {}",
                violation.kind, violation.job, violation.detail
            );
        }
        return Ok(ExitCode::from(1));
    }
    if ratio > bound * (1.0 + 1e-9) {
        eprintln!("bound violation: ratio {ratio} exceeds {bound}");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, Error> {
    let mode = match args.mode.as_str() {
        "pre" => ScheduleMode::Preemptive,
        "npr" => ScheduleMode::NonPreemptive,
        other => {
            return Err(Error::InvalidArgument(format!(
                "mode must be pre or npr, got {other:?}"
            )))
        }
    };
    let instance = parse_instance(&read_file(&args.instance)?)?;
    let (_, schedule) = parse_schedule(&read_file(&args.schedule)?)?;
    let report = check_feasible(&instance, &schedule, mode);
    if report.feasible {
        println!("feasible");
        Ok(ExitCode::SUCCESS)
    } else {
        for violation in &report.violations {
            eprintln!(
                "violation: {:?} {}: {}",
                violation.kind, violation.job, violation.detail
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, Error> {
    let values: Vec<T> = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} entry {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(Error::InvalidArgument(format!("empty {what} list")));
    }
    Ok(values)
}

fn bench_algorithm(family: Family) -> Result<Algorithm, Error> {
    match family {
        Family::CommonRelease => Ok(Algorithm::CommonRelease),
        Family::CommonDeadline => Ok(Algorithm::CommonDeadline),
        Family::Clique | Family::PureLaminar => Ok(Algorithm::Clique),
        Family::Agreeable => Ok(Algorithm::Agreeable),
        Family::Gap => Err(Error::InvalidArgument(
            "the gap family has no ratio benchmark; use the gap command".into(),
        )),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, Error> {
    let families: Vec<Family> = parse_list(&args.families, "family")?;
    let alphas: Vec<f64> = parse_list(&args.alphas, "alpha")?;
    let machines: Vec<usize> = parse_list(&args.machines, "machines")?;
    if args.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }

    let mut rows = Vec::new();
    let mut all_ok = true;
    let mut counter = 0u64;
    for &family in &families {
        let algorithm = bench_algorithm(family)?;
        for &alpha in &alphas {
            for &m in &machines {
                for trial in 0..args.trials {
                    let n = 2 + (counter as usize % 15);
                    let seed = args.seed.wrapping_add(counter);
                    counter += 1;
                    let spec = GenSpec::new(family, n, m, alpha, seed);
                    let instance = generate(&spec)?;
                    let schedule = algorithm.run(&instance)?;
                    let (_, lower_bound) = optimal_preemptive(&instance, DEFAULT_TOLERANCE)?;
                    let energy = total_energy(&instance, &schedule)?;
                    let feasible =
                        check_feasible(&instance, &schedule, ScheduleMode::NonPreemptive).feasible;
                    let record = RatioRecord::evaluate(
                        format!("{family}-{trial:04}-s{seed}"),
                        family.to_string(),
                        instance.n(),
                        m,
                        alpha,
                        algorithm.to_string(),
                        energy,
                        lower_bound,
                        algorithm.ratio_bound(m, alpha),
                    );
                    all_ok &= record.within_bound && feasible;
                    if !feasible {
                        eprintln!("infeasible output on {}", record.instance_id);
                    }
                    rows.push(record);
                }
            }
        }
    }

    write_file(&args.out, &write_report(&rows))?;
    println!(
        "{} rows -> {} (all within bound: {all_ok})",
        rows.len(),
        args.out.display()
    );
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_gap(args: GapArgs) -> Result<ExitCode, Error> {
    if args.n < 3 {
        return Err(Error::InvalidArgument("gap family needs n >= 3".into()));
    }
    let (preemptive, nonpreemptive) = gap_energies(args.n, args.alpha);
    println!("E_pr: {preemptive}");
    println!("E_npr: {nonpreemptive}");
    println!("ratio: {}", nonpreemptive / preemptive);
    if args.verify_oracle {
        let instance = gap_instance(args.n, args.alpha)?;
        let result = brute_force_nonpreemptive(&instance, DEFAULT_TOLERANCE)?;
        println!("oracle: {}", result.energy);
        let matches = (result.energy - nonpreemptive).abs() <= 1e-4 * nonpreemptive;
        println!("oracle_matches_closed_form: {matches}");
        if !matches {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}
