//! `entwit`: train the two-qubit indicators, evaluate and correct states, fit
//! schedules and run the experiment sweeps.
//!
//! Machine-readable results go to stdout as JSON; logs go to stderr. Exit
//! codes: 0 success, 1 numeric or convergence failure, 2 usage error.

mod config;
mod literal;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use entwit::correction::{Corrector, SignResolution};
use entwit::harness::{emit_csv, emit_json, run_sweep, Axis, Experiment, ScheduleSource, SweepSpec};
use entwit::measures::{concurrence, entanglement_of_formation};
use entwit::qnn::{
    make_entanglement_training_set, make_phase_training_set, train, Indicator, OutputFunctional, UpdateMode,
    DEFAULT_LEARNING_RATE, PHASE_LEARNING_RATE,
};
use entwit::schedule::{fit_fourier, Preset};
use entwit::{IntegrationConfig, SampledSchedule, Schedule};
use serde_json::json;

use config::{CliConfig, TrainingOverrides};

#[derive(Parser, Debug)]
#[command(name = "entwit", version, about = "Two-qubit quantum neural network entanglement indicators")]
struct Cli {
    /// JSON configuration file; flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Integration step in ns.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Evolution time in ns.
    #[arg(long, global = true)]
    t_final: Option<f64>,
    /// Directory for written files.
    #[arg(long, global = true, env = "ENTWIT_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train an indicator from its initial preset.
    Train(TrainArgs),
    /// Evaluate an indicator on one state.
    Eval(EvalArgs),
    /// Run an experiment sweep and write CSV plus a JSON summary.
    Sweep(SweepArgs),
    /// Fit Fourier series to a schedule file.
    Fit(FitArgs),
    /// Estimate the phase of a state and report the corrected indicator.
    Correct(CorrectArgs),
    /// Print a built-in schedule as JSON.
    DumpPreset(DumpArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Entanglement,
    Phase,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Online,
    Batch,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Resolution {
    Quadrature,
    AssumePositive,
}

impl From<Resolution> for SignResolution {
    fn from(r: Resolution) -> Self {
        match r {
            Resolution::Quadrature => SignResolution::QuadratureProbe,
            Resolution::AssumePositive => SignResolution::AssumePositive,
        }
    }
}

#[derive(Args, Debug)]
struct TrainArgs {
    target: Target,
    /// Starting schedule: a preset name or a schedule file.
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    max_epochs: Option<usize>,
    #[arg(long)]
    rms_stop: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Number of phase training states.
    #[arg(long, default_value_t = 11)]
    phase_samples: usize,
    /// Report path (default `<out-dir>/<target>_report.json`).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Trained schedule path (default `<out-dir>/<target>_schedule.json`).
    #[arg(long)]
    schedule_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// Four comma-separated amplitudes `re+imj` for |00⟩, |01⟩, |10⟩, |11⟩.
    #[arg(long, allow_hyphen_values = true)]
    state: String,
    /// Rescale a state whose norm is not 1.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Preset name or schedule file (default: entanglement preset, or the
    /// phase preset for a projection read-out).
    #[arg(long)]
    schedule: Option<String>,
    /// Read-out: `zz` or `p0`..`p3`.
    #[arg(long, default_value = "zz", value_parser = parse_functional)]
    functional: OutputFunctional,
}

#[derive(Args, Debug)]
struct SweepArgs {
    experiment: Experiment,
    /// Points on the phase axis.
    #[arg(long)]
    angle_points: Option<usize>,
    /// Points on the magnitude axis.
    #[arg(long)]
    magnitude_points: Option<usize>,
    /// Random states for the scatter experiments.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    entanglement_schedule: Option<String>,
    #[arg(long)]
    phase_schedule: Option<String>,
    #[arg(long, value_enum)]
    sign_resolution: Option<Resolution>,
}

#[derive(Args, Debug)]
struct FitArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    harmonics: u8,
    /// Output path (default `<out-dir>/<input stem>_fit.json`).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CorrectArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Basis state whose phase relative to its complement is estimated.
    #[arg(long, default_value_t = 3)]
    basis_index: usize,
    #[arg(long)]
    entanglement_schedule: Option<String>,
    #[arg(long)]
    phase_schedule: Option<String>,
    #[arg(long, value_enum, default_value = "quadrature")]
    sign_resolution: Resolution,
}

#[derive(Args, Debug)]
struct DumpArgs {
    preset: Preset,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Emit samples on the integration grid instead of Fourier coefficients.
    #[arg(long)]
    sampled: bool,
}

/// Context marking a failure caused by the invocation rather than the
/// computation.
#[derive(Debug)]
struct Usage;

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("invalid input")
    }
}

fn parse_functional(s: &str) -> Result<OutputFunctional, String> {
    match s {
        "zz" => Ok(OutputFunctional::ZzCorrelationSquared),
        _ => s
            .strip_prefix('p')
            .and_then(|b| b.parse::<usize>().ok())
            .filter(|b| *b <= 3)
            .map(OutputFunctional::ProjectionProbability)
            .ok_or_else(|| format!("expected `zz` or `p0`..`p3`, got `{s}`")),
    }
}

/// A preset name, or otherwise a path to a schedule file.
fn schedule_source(spec: &str) -> ScheduleSource {
    match spec.parse::<Preset>() {
        Ok(p) => ScheduleSource::Preset(p),
        Err(_) => ScheduleSource::File(PathBuf::from(spec)),
    }
}

fn load_sampled(spec: &str, cfg: &IntegrationConfig) -> Result<SampledSchedule> {
    let schedule = schedule_source(spec).resolve().with_context(|| format!("loading schedule `{spec}`"))?;
    Ok(schedule.sampled(cfg)?.into_owned())
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

struct RunContext {
    file: CliConfig,
    integration: IntegrationConfig,
    out_dir: PathBuf,
}

impl RunContext {
    fn new(cli: &Cli) -> Result<Self> {
        let mut file = match &cli.config {
            Some(path) => CliConfig::load(path)?,
            None => CliConfig::default(),
        };
        file.dt = cli.dt.or(file.dt);
        file.t_final = cli.t_final.or(file.t_final);
        let integration = file.integration()?;
        let out_dir = cli.out_dir.clone().or_else(|| file.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
        Ok(Self { file, integration, out_dir })
    }

    fn output_path(&self, explicit: Option<&PathBuf>, default_name: &str) -> Result<PathBuf> {
        let path = explicit.cloned().unwrap_or_else(|| self.out_dir.join(default_name));
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        Ok(path)
    }

    fn schedule_or(&self, flag: &Option<String>, file: &Option<String>, preset: Preset) -> String {
        flag.clone().or_else(|| file.clone()).unwrap_or_else(|| preset.name().to_string())
    }
}

fn cmd_train(ctx: &RunContext, args: &TrainArgs) -> Result<ExitCode> {
    let (samples, init_preset, default_lr, name) = match args.target {
        Target::Entanglement => {
            (make_entanglement_training_set(), Preset::EntanglementInit, DEFAULT_LEARNING_RATE, "entanglement")
        }
        Target::Phase => {
            (make_phase_training_set(args.phase_samples)?, Preset::PhaseInit, PHASE_LEARNING_RATE, "phase")
        }
    };
    let flags = TrainingOverrides {
        learning_rate: args.learning_rate,
        max_epochs: args.max_epochs,
        rms_stop: args.rms_stop,
        mode: args.mode.map(|m| match m {
            Mode::Online => UpdateMode::Online,
            Mode::Batch => UpdateMode::Batch,
        }),
    };
    let tcfg = ctx.file.training.merge(flags).resolve(default_lr);
    let init_spec = args.init.clone().unwrap_or_else(|| init_preset.name().to_string());
    let init = load_sampled(&init_spec, &ctx.integration)?;
    log::info!("training {name} indicator from {init_spec}: {tcfg:?}");
    let report = train(&samples, &init, &tcfg, &ctx.integration)?;
    let report_path = ctx.output_path(args.report.as_ref(), &format!("{name}_report.json"))?;
    let schedule_path = ctx.output_path(args.schedule_out.as_ref(), &format!("{name}_schedule.json"))?;
    emit_json(&report, &report_path)?;
    Schedule::Sampled(report.schedule.clone()).save(&schedule_path)?;
    print_json(&json!({
        "target": name,
        "initial_rms": report.rms_history[0],
        "final_rms": report.final_rms(),
        "epochs": report.epochs,
        "converged": report.converged,
        "final_learning_rate": report.final_learning_rate,
        "report": report_path,
        "schedule": schedule_path,
    }))?;
    if report.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        log::warn!("RMS {:.3e} did not reach {:.3e} in {} epochs", report.final_rms(), tcfg.rms_stop, report.epochs);
        Ok(ExitCode::from(1))
    }
}

fn cmd_eval(ctx: &RunContext, args: &EvalArgs) -> Result<ExitCode> {
    let psi = literal::parse_state(&args.state.state, args.state.normalize).context(Usage)?;
    let preset = match args.functional {
        OutputFunctional::ZzCorrelationSquared => Preset::EntanglementTrained,
        OutputFunctional::ProjectionProbability(_) => Preset::PhaseTrained,
    };
    let spec = ctx.schedule_or(&args.schedule, &None, preset);
    let indicator = Indicator::new(&load_sampled(&spec, &ctx.integration)?, args.functional, &ctx.integration)?;
    let rho = psi.density();
    print_json(&json!({
        "functional": args.functional,
        "schedule": schedule_source(&spec).describe(),
        "indicator": indicator.evaluate(&psi),
        "entanglement_of_formation": entanglement_of_formation(&rho)?,
        "concurrence": concurrence(&rho)?,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(ctx: &RunContext, args: &SweepArgs) -> Result<ExitCode> {
    let mut spec = SweepSpec::new(args.experiment);
    if let Some(n) = args.angle_points {
        spec.angle = Axis { count: n, ..spec.angle };
    }
    if let Some(n) = args.magnitude_points {
        spec.magnitude = Axis { count: n, ..spec.magnitude };
    }
    if let Some(n) = args.samples.or(ctx.file.samples) {
        spec.samples = n;
    }
    if let Some(seed) = args.seed.or(ctx.file.seed) {
        spec.seed = Some(seed);
    }
    let ent =
        ctx.schedule_or(&args.entanglement_schedule, &ctx.file.entanglement_schedule, Preset::EntanglementTrained);
    let phase = ctx.schedule_or(&args.phase_schedule, &ctx.file.phase_schedule, Preset::PhaseTrained);
    spec.entanglement_schedule = schedule_source(&ent);
    spec.phase_schedule = schedule_source(&phase);
    spec.integration = ctx.integration;
    if let Some(r) = args.sign_resolution {
        spec.sign_resolution = r.into();
    }
    log::info!("running {} ({} angle points)", args.experiment, spec.angle.count);
    let out = run_sweep(&spec)?;
    let name = args.experiment.name();
    let csv = ctx.output_path(None, &format!("{name}.csv"))?;
    let summary = ctx.output_path(None, &format!("{name}.json"))?;
    emit_csv(&out.table, &csv)?;
    emit_json(&out.summary, &summary)?;
    log::info!("wrote {} and {}", csv.display(), summary.display());
    print_json(&out.summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit(ctx: &RunContext, args: &FitArgs) -> Result<ExitCode> {
    let samples = match Schedule::load(&args.input)? {
        Schedule::Sampled(s) => s,
        Schedule::Fourier(f) => {
            log::warn!(
                "{} holds Fourier coefficients; fitting its samples on the integration grid",
                args.input.display()
            );
            f.to_sampled(&ctx.integration)
        }
    };
    let fit = fit_fourier(&samples, args.harmonics as usize)?;
    let stem = args.input.file_stem().and_then(|s| s.to_str()).unwrap_or("schedule");
    let path = ctx.output_path(args.output.as_ref(), &format!("{stem}_fit.json"))?;
    emit_json(&fit, &path)?;
    print_json(&json!({ "harmonics": fit.harmonics, "rms": fit.rms, "output": path }))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_correct(ctx: &RunContext, args: &CorrectArgs) -> Result<ExitCode> {
    let psi = literal::parse_state(&args.state.state, args.state.normalize).context(Usage)?;
    let ent =
        ctx.schedule_or(&args.entanglement_schedule, &ctx.file.entanglement_schedule, Preset::EntanglementTrained);
    let phase = ctx.schedule_or(&args.phase_schedule, &ctx.file.phase_schedule, Preset::PhaseTrained);
    let corrector = Corrector::new(
        &load_sampled(&phase, &ctx.integration)?,
        &load_sampled(&ent, &ctx.integration)?,
        &ctx.integration,
        args.sign_resolution.into(),
    )?;
    print_json(&corrector.correct(&psi, args.basis_index)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dump(ctx: &RunContext, args: &DumpArgs) -> Result<ExitCode> {
    let schedule = if args.sampled {
        Schedule::Sampled(args.preset.fourier().to_sampled(&ctx.integration))
    } else {
        args.preset.schedule()
    };
    match &args.output {
        Some(path) => {
            schedule.save(&ctx.output_path(Some(path), "")?)?;
            log::info!("wrote {}", path.display());
        }
        None => println!("{}", schedule.to_json()?),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let ctx = RunContext::new(cli).context(Usage)?;
    match &cli.command {
        Command::Train(a) => cmd_train(&ctx, a),
        Command::Eval(a) => cmd_eval(&ctx, a),
        Command::Sweep(a) => cmd_sweep(&ctx, a),
        Command::Fit(a) => cmd_fit(&ctx, a),
        Command::Correct(a) => cmd_correct(&ctx, a),
        Command::DumpPreset(a) => cmd_dump(&ctx, a),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.chain().find_map(|e| e.downcast_ref::<entwit::Error>()) {
        Some(entwit::Error::InvalidArgument(_) | entwit::Error::UnknownExperiment(_) | entwit::Error::Json(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            log::error!("{err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
