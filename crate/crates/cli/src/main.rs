use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use silverstep::gd::{run, write_trajectory_csv, Retention, RunConfig, ScheduleSpec, StartSpec};
use silverstep::io::{write_schedule_file, ScheduleFile};
use silverstep::schedule::{anytime_prefix, silver, strongly_convex_schedule, AnytimeParams, FiniteSchedule};
use silverstep::verify::{calibrate_c0, run_suite, Suite, SuiteOptions, DEFAULT_C0};
use silverstep::{Error, ObjectiveSpec};
use silverstep_cli::bench::{run_bench, ExperimentConfig};
use silverstep_cli::figure::write_figure_csv;

/// Stepsize schedules for gradient descent: generation, runs, checks and
/// rate benchmarks.
#[derive(Parser)]
#[command(name = "silverstep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a schedule file (hex-float values and join positions).
    Gen(GenArgs),
    /// Run gradient descent and write the trajectory CSV.
    Run(RunArgs),
    /// Run a battery of numerical checks and print a JSON report.
    Verify(VerifyArgs),
    /// Write the first stepsizes of the silver and anytime schedules.
    Figure(FigureArgs),
    /// Run a rate benchmark and write the rate table and a summary.
    Bench(BenchArgs),
    /// Report max_T F_T T^theta of the anytime schedule, the default C0.
    CalibrateC0(CalibrateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Silver,
    Anytime,
    Constant,
    StronglyConvex,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long, value_enum, default_value = "anytime")]
    kind: Kind,
    /// Silver order k (2^k - 1 stepsizes).
    #[arg(long)]
    order: Option<u32>,
    /// Anytime growth constant (default log2 of the silver ratio).
    #[arg(long)]
    c: Option<f64>,
    /// Constant stepsize, in units of 1/L.
    #[arg(long)]
    alpha: Option<f64>,
    /// Condition number of the strongly convex schedule.
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_C0)]
    c0: f64,
}

impl ScheduleArgs {
    fn spec(&self) -> anyhow::Result<ScheduleSpec> {
        Ok(match self.kind {
            Kind::Silver => ScheduleSpec::Silver { order: self.order.context("--order is required for silver")? },
            Kind::Anytime => ScheduleSpec::Anytime { c: self.c },
            Kind::Constant => ScheduleSpec::Constant { alpha: self.alpha.context("--alpha is required for constant")? },
            Kind::StronglyConvex => ScheduleSpec::StronglyConvex {
                kappa: self.kappa.context("--kappa is required for strongly-convex")?,
                c0: self.c0,
                c: self.c,
            },
        })
    }

    fn params(&self) -> anyhow::Result<AnytimeParams<f64>> {
        Ok(match self.c {
            Some(c) => AnytimeParams::new(c)?,
            None => AnytimeParams::default(),
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Number of stepsizes (anytime, constant; strongly-convex defaults to one period).
    #[arg(long)]
    steps: Option<usize>,
    /// Output path; the file is printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Full run description as JSON; the other flags are ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Read the stepsizes from a schedule file instead of --kind.
    #[arg(long)]
    schedule_file: Option<PathBuf>,
    /// Objective family: quadratic, scalar, least_squares, log_sum_exp, huber.
    #[arg(long, default_value = "quadratic")]
    objective: String,
    #[arg(long, default_value_t = 8)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stopping time T (defaults to the full length + 1 of a finite schedule).
    #[arg(long)]
    steps: Option<usize>,
    /// Starting point, comma separated; otherwise uniform in the unit ball
    /// around the minimizer.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x1: Option<Vec<f64>>,
    /// Trajectory CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Silver,
    AnytimeBounds,
    Primitive,
    Lemmas,
    Rates,
    StronglyConvex,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteName,
    /// Horizon of the anytime bound scan.
    #[arg(long, default_value_t = 1_000_000)]
    t_max: u64,
    /// Seeded instances per inequality battery.
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_C0)]
    c0: f64,
    #[arg(long, env = "SILVERSTEP_JOBS")]
    jobs: Option<usize>,
    /// Also write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long, default_value_t = 128)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Without --config, runs constant alpha = 1, anytime and silver (order 14)
/// on the worst-case scalar quadratic over T in {16, 32, ..., 16384}.
#[derive(Args)]
struct BenchArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for the rate table and summary; overrides the config paths.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "SILVERSTEP_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[arg(long, default_value_t = 10_000)]
    t_max: usize,
    #[arg(long)]
    c: Option<f64>,
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| Error::Json(e).into())
}

fn gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    let a = &args.schedule;
    let steps = || args.steps.context("--steps is required for this kind");
    let s: FiniteSchedule<f64> = match a.kind {
        Kind::Silver => silver(a.order.context("--order is required for silver")?)?,
        Kind::Anytime => anytime_prefix(steps()?, a.params()?)?,
        Kind::Constant => FiniteSchedule::constant(a.alpha.context("--alpha is required for constant")?, steps()?)?,
        Kind::StronglyConvex => {
            let sc = strongly_convex_schedule(a.kappa.context("--kappa is required")?, a.c0, a.params()?)?;
            sc.prefix(args.steps.unwrap_or(sc.tau()))
        }
    };
    let summary = serde_json::json!({
        "kind": s.kind().name(),
        "length": s.len(),
        "aggregate": s.aggregate(),
        "joins": s.join_positions().len(),
    });
    match &args.out {
        Some(p) => {
            write_schedule_file(&s, p)?;
            println!("{summary}");
        }
        None => {
            println!("{}", serde_json::to_string_pretty(&ScheduleFile::from_schedule(&s)?)?);
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_cmd(args: RunArgs) -> anyhow::Result<ExitCode> {
    let config: RunConfig = match &args.config {
        Some(p) => read_json(p)?,
        None => {
            let schedule = match &args.schedule_file {
                Some(p) => ScheduleSpec::File { path: p.clone() },
                None => args.schedule.spec()?,
            };
            let horizon = match args.steps {
                Some(t) => t,
                None => match schedule.source::<f64>()?.available() {
                    Some(n) => n + 1,
                    None => bail!("--steps is required for an unbounded schedule"),
                },
            };
            let x1 = match &args.x1 {
                Some(x) => StartSpec::Point { x: x.clone() },
                None => StartSpec::Ball { radius: 1.0, seed: args.seed },
            };
            let dim = if args.objective.starts_with("scalar") { 1 } else { args.dim };
            RunConfig {
                objective: ObjectiveSpec::preset(&args.objective, dim, args.seed)?,
                x1,
                schedule,
                horizon,
                retention: Retention::Sparse,
            }
        }
    };
    let traj = run::<f64>(&config)?;
    let mut out = output(args.out.as_deref())?;
    write_trajectory_csv(&traj, &mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let suite = match args.suite {
        SuiteName::Silver => Suite::Silver,
        SuiteName::AnytimeBounds => Suite::AnytimeBounds,
        SuiteName::Primitive => Suite::Primitive,
        SuiteName::Lemmas => Suite::Lemmas,
        SuiteName::Rates => Suite::Rates,
        SuiteName::StronglyConvex => Suite::StronglyConvex,
        SuiteName::All => Suite::All,
    };
    let opts = SuiteOptions {
        t_max: args.t_max,
        instances: args.instances,
        seed: args.seed,
        c0: args.c0,
        ..SuiteOptions::default()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let report = builder.build()?.install(|| run_suite(suite, &opts))?;
    let text = serde_json::to_string_pretty(&report)?;
    if let Some(p) = &args.out {
        std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
    }
    println!("{text}");
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn figure(args: FigureArgs) -> anyhow::Result<ExitCode> {
    let mut out = output(args.out.as_deref())?;
    write_figure_csv(args.steps, &mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    let mut config = match &args.config {
        Some(p) => read_json(p)?,
        None => ExperimentConfig::default_rates(),
    };
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        config.rate_table = dir.join("rate_table.csv");
        config.summary = dir.join("summary.json");
    }
    let (table, summary) = run_bench(&config, args.jobs)?;
    let mut out = output(Some(&config.rate_table))?;
    table.write_csv(&mut out)?;
    out.flush()?;
    let text = serde_json::to_string_pretty(&summary)?;
    std::fs::write(&config.summary, &text)?;
    println!("{text}");
    Ok(if summary.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn calibrate(args: CalibrateArgs) -> anyhow::Result<ExitCode> {
    let params = match args.c {
        Some(c) => AnytimeParams::new(c)?,
        None => AnytimeParams::default(),
    };
    let cal = calibrate_c0(params, args.t_max)?;
    println!("{}", serde_json::json!({ "c0": cal.c0, "argmax_t": cal.argmax_t, "t_max": cal.t_max }));
    Ok(ExitCode::SUCCESS)
}

/// 2 for bad input, 3 for failures while running.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Domain(_) | Error::Precondition(_) | Error::Resource { .. } | Error::Format(_) | Error::Json(_)) => 2,
        Some(_) => 3,
        None if err.to_string().contains("is required") => 2,
        None => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Figure(a) => figure(a),
        Command::Bench(a) => bench(a),
        Command::CalibrateC0(a) => calibrate(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
