mod experiments;
mod verify;

use clap::{Args, Parser, Subcommand};
use experiments::{
    default_delta, default_output, default_pulse_center, default_span, ExperimentConfig,
    ExperimentKind, Format,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Experiments on cursor-clocked spin-chain program lines: spreading,
/// telomeric trapping, control pulses, and clock-damped Grover search.
#[derive(Parser)]
#[command(name = "cursorchain", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Confined cursor: the line entered with a minus control
    Cursor(LineArgs),
    /// Telomeric line entered with a plus control
    Telomere(LineArgs),
    /// Telomeric line with a control-exchange pulse freezing the telomere
    Pipulse(PulseArgs),
    /// Forked line trapping both control components
    #[command(name = "double-trap", alias = "double_trap")]
    DoubleTrap(PulseArgs),
    /// Grover search damped by its cursor clock
    Grover(GroverArgs),
    /// Completion caps tabulated against the telomere length
    Bounds(BoundsArgs),
    /// Invariant checks for one experiment, reported as JSON
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Sampling step
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    /// End of the sampled window (default depends on the experiment)
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Output file (default <experiment>.<format>)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Reserved for future stochastic features; accepted and ignored
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct LineArgs {
    /// Program sites
    #[arg(long, default_value_t = 20)]
    s: usize,
    /// Telomere length (default s/2, at least 1)
    #[arg(long)]
    delta: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct PulseArgs {
    /// Program sites
    #[arg(long, default_value_t = 20)]
    s: usize,
    /// Telomere length (default s/2, at least 1)
    #[arg(long)]
    delta: Option<usize>,
    /// Pulse center (default s + 2*delta)
    #[arg(long)]
    t0: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GroverArgs {
    /// Register q-bits
    #[arg(long, default_value_t = 5)]
    mu: usize,
    /// Chain length (default 2^(mu+1) + 1)
    #[arg(long)]
    s: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BoundsArgs {
    /// Program sites
    #[arg(long, default_value_t = 20)]
    s: usize,
    /// Telomere length highlighted in the summary (default s/2)
    #[arg(long)]
    delta: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    experiment: ExperimentKind,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
}

fn grover_length(mu: usize) -> usize {
    2usize.pow(mu as u32 + 1) + 1
}

fn line_config(experiment: ExperimentKind, args: LineArgs) -> ExperimentConfig {
    let delta = args.delta.unwrap_or_else(|| default_delta(args.s));
    ExperimentConfig {
        experiment,
        s: args.s,
        delta,
        mu: 0,
        t0: 0.0,
        t_max: args.common.t_max.unwrap_or_else(|| default_span(args.s, delta)),
        dt: args.common.dt,
        output_path: args
            .common
            .output
            .unwrap_or_else(|| default_output(experiment, args.common.format)),
        format: args.common.format,
        seed: args.common.seed,
    }
}

fn pulse_config(experiment: ExperimentKind, args: PulseArgs) -> ExperimentConfig {
    let delta = args.delta.unwrap_or_else(|| default_delta(args.s));
    ExperimentConfig {
        experiment,
        s: args.s,
        delta,
        mu: 0,
        t0: args.t0.unwrap_or_else(|| default_pulse_center(args.s, delta)),
        t_max: args.common.t_max.unwrap_or_else(|| default_span(args.s, delta)),
        dt: args.common.dt,
        output_path: args
            .common
            .output
            .unwrap_or_else(|| default_output(experiment, args.common.format)),
        format: args.common.format,
        seed: args.common.seed,
    }
}

fn grover_config(args: GroverArgs) -> ExperimentConfig {
    let s = args.s.unwrap_or_else(|| grover_length(args.mu));
    ExperimentConfig {
        experiment: ExperimentKind::Grover,
        s,
        delta: 0,
        mu: args.mu,
        t0: 0.0,
        t_max: args.common.t_max.unwrap_or(10.0 * s as f64),
        dt: args.common.dt,
        output_path: args
            .common
            .output
            .unwrap_or_else(|| default_output(ExperimentKind::Grover, args.common.format)),
        format: args.common.format,
        seed: args.common.seed,
    }
}

fn bounds_config(args: BoundsArgs) -> ExperimentConfig {
    let delta = args.delta.unwrap_or_else(|| default_delta(args.s));
    ExperimentConfig {
        experiment: ExperimentKind::Bounds,
        s: args.s,
        delta,
        mu: 0,
        t0: 0.0,
        t_max: 0.0,
        dt: args.common.dt,
        output_path: args
            .common
            .output
            .unwrap_or_else(|| default_output(ExperimentKind::Bounds, args.common.format)),
        format: args.common.format,
        seed: args.common.seed,
    }
}

fn verify_config(args: VerifyArgs) -> ExperimentConfig {
    let experiment = args.experiment;
    let (s, mu) = match experiment {
        ExperimentKind::Grover => {
            let mu = args.mu.unwrap_or(5);
            (args.s.unwrap_or_else(|| grover_length(mu)), mu)
        }
        _ => (args.s.unwrap_or(20), 0),
    };
    let delta = args.delta.unwrap_or_else(|| default_delta(s));
    let t0 = args.t0.unwrap_or_else(|| default_pulse_center(s, delta));
    ExperimentConfig {
        experiment,
        s,
        delta,
        mu,
        t0,
        t_max: args.t_max.unwrap_or_else(|| default_span(s, delta)),
        dt: args.dt,
        output_path: PathBuf::new(),
        format: Format::Csv,
        seed: None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Cursor(args) => experiments::run(&line_config(ExperimentKind::Cursor, args)),
        Command::Telomere(args) => experiments::run(&line_config(ExperimentKind::Telomere, args)),
        Command::Pipulse(args) => experiments::run(&pulse_config(ExperimentKind::Pipulse, args)),
        Command::DoubleTrap(args) => {
            experiments::run(&pulse_config(ExperimentKind::DoubleTrap, args))
        }
        Command::Grover(args) => experiments::run(&grover_config(args)),
        Command::Bounds(args) => experiments::run(&bounds_config(args)),
        Command::Verify(args) => {
            return match verify::run(&verify_config(args)) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(1),
                Err(error) => {
                    eprintln!("error: {error}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}
