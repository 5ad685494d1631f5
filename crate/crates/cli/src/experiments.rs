use clap::ValueEnum;
use cursorchain::grover::damped_overlap_series;
use cursorchain::hamiltonian::build;
use cursorchain::observables::{
    completion_probability, confined_completion_bound, control_resolved_probability,
    site_probability, telomeric_completion_bound, write_csv, write_json,
};
use cursorchain::propagator::{evolve_const, evolve_schedule, make_pi_pulse_schedule, time_grid};
use cursorchain::{
    Control, ControlInit, CursorState, EvolutionResult, GroverSpec, ProgramLineSpec, Result,
    TimeSeries,
};
use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Cursor,
    Telomere,
    Pipulse,
    #[value(alias = "double_trap")]
    DoubleTrap,
    Grover,
    Bounds,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Cursor => "cursor",
            ExperimentKind::Telomere => "telomere",
            ExperimentKind::Pipulse => "pipulse",
            ExperimentKind::DoubleTrap => "double-trap",
            ExperimentKind::Grover => "grover",
            ExperimentKind::Bounds => "bounds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A fully resolved run: every default already applied.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub s: usize,
    pub delta: usize,
    pub mu: usize,
    pub t0: f64,
    pub t_max: f64,
    pub dt: f64,
    pub output_path: PathBuf,
    pub format: Format,
    /// Reserved for future stochastic features; accepted and ignored.
    #[allow(dead_code)]
    pub seed: Option<u64>,
}

pub fn default_delta(s: usize) -> usize {
    (s / 2).max(1)
}

pub fn default_pulse_center(s: usize, delta: usize) -> f64 {
    (s + 2 * delta) as f64
}

pub fn default_span(s: usize, delta: usize) -> f64 {
    2.0 * (s + 2 * delta) as f64
}

pub fn default_output(experiment: ExperimentKind, format: Format) -> PathBuf {
    PathBuf::from(format!("{}.{}", experiment.name(), format.extension()))
}

fn unit_register() -> DVector<Complex64> {
    DVector::from_element(1, Complex64::new(1.0, 0.0))
}

fn write_series(config: &ExperimentConfig, series: &[&TimeSeries]) -> Result<()> {
    let writer = BufWriter::new(File::create(&config.output_path)?);
    match config.format {
        Format::Csv => write_csv(writer, series),
        Format::Json => write_json(writer, series),
    }
}

fn evolve_line(
    spec: &ProgramLineSpec,
    control: ControlInit,
    config: &ExperimentConfig,
) -> Result<EvolutionResult> {
    let h = build(spec)?;
    let psi0 = CursorState::initial(spec, &unit_register(), control)?;
    let times = time_grid(config.t_max, config.dt)?;
    evolve_const(&h, &psi0, &times)
}

fn evolve_pulsed(
    spec: &ProgramLineSpec,
    control: ControlInit,
    config: &ExperimentConfig,
) -> Result<EvolutionResult> {
    let h = build(spec)?;
    let schedule = make_pi_pulse_schedule(&h, config.t0, config.t_max)?;
    let psi0 = CursorState::initial(spec, &unit_register(), control)?;
    let times = time_grid(config.t_max, config.dt)?;
    evolve_schedule(&schedule, &psi0, &times)
}

/// Constant trapped value after the pulse window, with its residual wander.
fn settled(series: &TimeSeries, cut: f64) -> (f64, f64) {
    let mut min = f64::MAX;
    let mut max = f64::MIN;
    for &(t, v) in series.samples() {
        if t >= cut {
            min = min.min(v);
            max = max.max(v);
        }
    }
    (min, max - min)
}

pub fn run(config: &ExperimentConfig) -> Result<()> {
    let path = config.output_path.display();
    match config.experiment {
        ExperimentKind::Cursor => {
            // Minus control: the crossing is blocked and the cursor stays on
            // the program sites, whatever the telomere length.
            let spec = ProgramLineSpec::telomeric(config.s, config.delta)?;
            let result = evolve_line(&spec, ControlInit::Minus, config)?;
            let completion = completion_probability(&result, &spec)?;
            write_series(config, &[&completion])?;
            let (t_peak, peak) = completion.peak().expect("nonempty grid");
            println!(
                "cursor: p_completion max {peak:.6} at t = {t_peak:.2}; spreading cap 8/s^(2/3) = {:.6}; wrote {path}",
                confined_completion_bound(config.s)
            );
        }
        ExperimentKind::Telomere => {
            let spec = ProgramLineSpec::telomeric(config.s, config.delta)?;
            let result = evolve_line(&spec, ControlInit::Plus, config)?;
            let completion = completion_probability(&result, &spec)?;
            let telomere = site_probability(
                &result,
                config.s + 1..=config.s + config.delta,
                None,
                "p_telomere",
            )?;
            write_series(config, &[&completion, &telomere])?;
            let (t_peak, peak) = completion.peak().expect("nonempty grid");
            let occupation = telomere.peak().expect("nonempty grid").1;
            println!(
                "telomere: p_completion max {peak:.6} at t = {t_peak:.2}; trapping cap {:.6} caps the telomere occupation (peak {occupation:.6}); wrote {path}",
                telomeric_completion_bound(config.s, config.delta)
            );
        }
        ExperimentKind::Pipulse => {
            let spec = ProgramLineSpec::telomeric(config.s, config.delta)?;
            let result = evolve_pulsed(&spec, ControlInit::Plus, config)?;
            let completion = completion_probability(&result, &spec)?;
            let trapped = control_resolved_probability(
                &result,
                &spec,
                Control::Plus,
                config.s + 1..=config.s + config.delta,
            )?
            .renamed("p_trapped_plus");
            write_series(config, &[&completion, &trapped])?;
            let (t_peak, peak) = completion.peak().expect("nonempty grid");
            let (mass, wander) = settled(&trapped, config.t0 + 0.5);
            println!(
                "pipulse: p_completion max {peak:.6} at t = {t_peak:.2}; trapped plus mass {mass:.6} after the pulse (wander {wander:.1e}); trapping cap {:.6}; wrote {path}",
                telomeric_completion_bound(config.s, config.delta)
            );
        }
        ExperimentKind::DoubleTrap => {
            let spec = ProgramLineSpec::double_trap(config.s, config.delta)?;
            let half = Complex64::new(FRAC_1_SQRT_2, 0.0);
            let result =
                evolve_pulsed(&spec, ControlInit::Superposition(half, half), config)?;
            let completion = completion_probability(&result, &spec)?;
            let first = control_resolved_probability(
                &result,
                &spec,
                Control::Plus,
                config.s + 1..=config.s + config.delta,
            )?
            .renamed("p_trapped_plus");
            let second = control_resolved_probability(
                &result,
                &spec,
                Control::Minus,
                config.s + config.delta + 1..=config.s + 2 * config.delta,
            )?
            .renamed("p_trapped_minus");
            write_series(config, &[&completion, &first, &second])?;
            let (t_peak, peak) = completion.peak().expect("nonempty grid");
            let (mass1, _) = settled(&first, config.t0 + 0.5);
            let (mass2, _) = settled(&second, config.t0 + 0.5);
            println!(
                "double-trap: trapped mass {mass1:.6} + {mass2:.6} = {:.6} after the pulse; p_completion max {peak:.6} at t = {t_peak:.2}; trapping cap {:.6}; wrote {path}",
                mass1 + mass2,
                telomeric_completion_bound(config.s, config.delta)
            );
        }
        ExperimentKind::Grover => {
            let spec = GroverSpec::new(config.mu, vec![true; config.mu], config.s)?;
            let times = time_grid(config.t_max, config.dt)?;
            let damped = damped_overlap_series(&spec, &times)?;
            write_series(config, &[&damped])?;
            let (t_peak, peak) = damped.peak().expect("nonempty grid");
            let ideal = (0..=spec.optimal_iterations().ceil() as usize)
                .map(|n| {
                    let angle = (2 * n + 1) as f64 * spec.theta();
                    angle.sin().powi(2)
                })
                .fold(0.0_f64, f64::max);
            println!(
                "grover: p_target max {peak:.6} at t = {t_peak:.2}; undamped peak {ideal:.6}; wrote {path}"
            );
        }
        ExperimentKind::Bounds => {
            // Tabulate both caps against the telomere length; the t column
            // carries delta.
            let confined = confined_completion_bound(config.s);
            let sweep: Vec<usize> = (0..=2 * config.s).collect();
            let confined_series = TimeSeries::new(
                "confined_completion_bound",
                sweep.iter().map(|&d| (d as f64, confined)).collect(),
            )?;
            let telomeric_series = TimeSeries::new(
                "telomeric_completion_bound",
                sweep
                    .iter()
                    .map(|&d| (d as f64, telomeric_completion_bound(config.s, d)))
                    .collect(),
            )?;
            write_series(config, &[&confined_series, &telomeric_series])?;
            println!(
                "bounds: spreading cap {confined:.6} at s = {}; trapping cap {:.6} at delta = {} (tabulated for delta = 0..{}); wrote {path}",
                config.s,
                telomeric_completion_bound(config.s, config.delta),
                config.delta,
                2 * config.s
            );
        }
    }
    Ok(())
}
