use crate::experiments::{ExperimentConfig, ExperimentKind};
use cursorchain::grover::{
    build_grover_line, damped_overlap_series, grover_operators, machine_time_overlap,
    target_overlap_series,
};
use cursorchain::hamiltonian::{build, full_spin_oracle};
use cursorchain::observables::{
    completion_probability, confined_completion_bound, control_resolved_probability,
    site_probability, telomeric_completion_bound,
};
use cursorchain::propagator::{evolve_const, evolve_schedule, make_pi_pulse_schedule, time_grid};
use cursorchain::{
    Control, ControlInit, CursorState, EvolutionResult, GroverSpec, HermitianOperator,
    ProgramLineSpec, Result, TimeSeries,
};
use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_1_SQRT_2;

const NORM_DRIFT_TOL: f64 = 1e-9;
const RANGE_TOL: f64 = 1e-12;
/// Sites above which the full-spin oracle comparison is skipped.
const ORACLE_SITE_CAP: usize = 12;

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct Report {
    experiment: &'static str,
    parameters: serde_json::Value,
    checks: Vec<Check>,
    passed: bool,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn new() -> Self {
        Suite { checks: Vec::new() }
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }

    fn hermitian(&mut self, name: &'static str, operator: &HermitianOperator) {
        let dense = operator.to_dense();
        let mut residual = 0.0_f64;
        for i in 0..dense.nrows() {
            for j in 0..dense.ncols() {
                residual = residual.max((dense[(i, j)] - dense[(j, i)].conj()).norm());
            }
        }
        self.push(
            name,
            residual == 0.0,
            format!("hermiticity residual {residual:.1e}"),
        );
    }

    fn norm(&mut self, result: &EvolutionResult) {
        let drift = result.max_norm_drift();
        self.push(
            "state_norm",
            drift <= NORM_DRIFT_TOL,
            format!("max norm drift {drift:.1e}"),
        );
    }

    fn range(&mut self, series: &[&TimeSeries]) {
        let mut worst: f64 = 0.0;
        for s in series {
            for &(_, v) in s.samples() {
                worst = worst.max((-v).max(v - 1.0));
            }
        }
        self.push(
            "probability_range",
            worst <= RANGE_TOL,
            format!("max excursion outside [0, 1]: {worst:.1e}"),
        );
    }

    fn oracle(&mut self, spec: &ProgramLineSpec) {
        if spec.n_sites() > ORACLE_SITE_CAP {
            return;
        }
        match full_spin_oracle(spec) {
            Ok(oracle) => {
                let commutator = oracle.excitation_commutator_max();
                let equal = build(spec)
                    .map(|h| oracle.restricted() == *h.matrix())
                    .unwrap_or(false);
                self.push(
                    "oracle_equivalence",
                    commutator == 0.0 && equal,
                    format!(
                        "excitation commutator {commutator:.1e}; sector restriction {} the builder",
                        if equal { "matches" } else { "DIFFERS from" }
                    ),
                );
            }
            Err(e) => self.push("oracle_equivalence", false, e.to_string()),
        }
    }
}

fn unit_register() -> DVector<Complex64> {
    DVector::from_element(1, Complex64::new(1.0, 0.0))
}

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

fn cursor_checks(config: &ExperimentConfig, suite: &mut Suite) -> Result<()> {
    let spec = ProgramLineSpec::telomeric(config.s, config.delta)?;
    let h = build(&spec)?;
    suite.hermitian("hermitian_generator", &h);
    let psi0 = CursorState::initial(&spec, &unit_register(), ControlInit::Minus)?;
    let times = time_grid(20.0 * config.s as f64, config.dt)?;
    let result = evolve_const(&h, &psi0, &times)?;
    suite.norm(&result);
    let completion = completion_probability(&result, &spec)?;
    suite.range(&[&completion]);

    let bound = confined_completion_bound(config.s);
    let peak = completion.peak().expect("nonempty grid").1;
    suite.push(
        "spreading_cap",
        peak <= bound,
        format!("completion peak {peak:.6} vs cap {bound:.6} over [0, 20s]"),
    );

    let mut leak: f64 = 0.0;
    for (_, state) in result.iter() {
        leak = leak.max(1.0 - state.probability(1..=config.s, None)?);
    }
    suite.push(
        "confinement",
        leak <= NORM_DRIFT_TOL,
        format!("max probability past site s: {leak:.1e}"),
    );
    suite.oracle(&spec);
    Ok(())
}

fn telomere_checks(config: &ExperimentConfig, suite: &mut Suite) -> Result<()> {
    let spec = ProgramLineSpec::telomeric(config.s, config.delta)?;
    let h = build(&spec)?;
    suite.hermitian("hermitian_generator", &h);
    let psi0 = CursorState::initial(&spec, &unit_register(), ControlInit::Plus)?;
    let times = time_grid(config.t_max, config.dt)?;
    let result = evolve_const(&h, &psi0, &times)?;
    suite.norm(&result);
    let completion = completion_probability(&result, &spec)?;
    let telomere = site_probability(
        &result,
        config.s + 1..=config.s + config.delta,
        None,
        "p_telomere",
    )?;
    suite.range(&[&completion, &telomere]);

    let bound = telomeric_completion_bound(config.s, config.delta);
    let occupation = telomere.peak().expect("nonempty grid").1;
    suite.push(
        "telomere_occupation_cap",
        occupation <= bound + 1e-9,
        format!(
            "telomere occupation peak {occupation:.6} vs cap {bound:.6} \
             (asymptotic cap; the completion region adds the last program site \
             on top and may exceed it at small sizes)"
        ),
    );
    // Completion is the telomere occupation plus the last program site; check
    // the accounting exactly rather than holding the wider region to the
    // asymptotic cap, which it legitimately overshoots on short chains.
    let last_site = site_probability(&result, config.s..=config.s, None, "p_last_site")?;
    let worst = completion
        .samples()
        .iter()
        .zip(telomere.samples())
        .zip(last_site.samples())
        .map(|((c, tel), last)| (c.1 - tel.1 - last.1).abs())
        .fold(0.0_f64, f64::max);
    suite.push(
        "completion_decomposition",
        worst <= RANGE_TOL,
        format!("completion minus telomere minus last program site: {worst:.1e}"),
    );
    suite.oracle(&spec);
    Ok(())
}

fn pipulse_checks(config: &ExperimentConfig, suite: &mut Suite) -> Result<()> {
    let spec = ProgramLineSpec::telomeric(config.s, config.delta)?;
    let h = build(&spec)?;
    let schedule = make_pi_pulse_schedule(&h, config.t0, config.t_max)?;
    suite.hermitian("hermitian_generator", &h);
    let pulsed_index = schedule.segments().len() - 2;
    suite.hermitian(
        "hermitian_pulsed_generator",
        schedule.segments()[pulsed_index].operator(),
    );
    let psi0 = CursorState::initial(&spec, &unit_register(), ControlInit::Plus)?;
    let times = time_grid(config.t_max, config.dt)?;
    let result = evolve_schedule(&schedule, &psi0, &times)?;
    suite.norm(&result);
    let trapped = control_resolved_probability(
        &result,
        &spec,
        Control::Plus,
        config.s + 1..=config.s + config.delta,
    )?;
    let completion = completion_probability(&result, &spec)?;
    suite.range(&[&completion, &trapped]);

    let (mass, wander) = settled(&trapped, config.t0 + 0.5);
    suite.push(
        "trap_constancy",
        wander <= 1e-9,
        format!("trapped plus mass {mass:.6} wanders {wander:.1e} after the pulse"),
    );
    suite.oracle(&spec);
    Ok(())
}

fn double_trap_checks(config: &ExperimentConfig, suite: &mut Suite) -> Result<()> {
    let spec = ProgramLineSpec::double_trap(config.s, config.delta)?;
    let h = build(&spec)?;
    let schedule = make_pi_pulse_schedule(&h, config.t0, config.t_max)?;
    suite.hermitian("hermitian_generator", &h);
    let half = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let psi0 = CursorState::initial(
        &spec,
        &unit_register(),
        ControlInit::Superposition(half, half),
    )?;
    let times = time_grid(config.t_max, config.dt)?;
    let result = evolve_schedule(&schedule, &psi0, &times)?;
    suite.norm(&result);
    let first = control_resolved_probability(
        &result,
        &spec,
        Control::Plus,
        config.s + 1..=config.s + config.delta,
    )?;
    let second = control_resolved_probability(
        &result,
        &spec,
        Control::Minus,
        config.s + config.delta + 1..=config.s + 2 * config.delta,
    )?;
    suite.range(&[&first, &second]);

    let (mass1, wander1) = settled(&first, config.t0 + 0.5);
    let (mass2, wander2) = settled(&second, config.t0 + 0.5);
    suite.push(
        "trap_constancy",
        wander1 <= 1e-9 && wander2 <= 1e-9,
        format!(
            "trapped masses {mass1:.6} / {mass2:.6} wander {wander1:.1e} / {wander2:.1e} after the pulse"
        ),
    );

    // A pure plus start must never populate the second branch.
    let pure = CursorState::initial(&spec, &unit_register(), ControlInit::Plus)?;
    let free = evolve_const(&h, &pure, &time_grid(config.t0, 0.5)?)?;
    let mut spill: f64 = 0.0;
    for (_, state) in free.iter() {
        spill = spill.max(state.probability(
            config.s + config.delta + 1..=config.s + 2 * config.delta,
            None,
        )?);
    }
    suite.push(
        "branch_isolation",
        spill <= RANGE_TOL,
        format!("second-branch probability from a pure plus start: {spill:.1e}"),
    );
    suite.oracle(&spec);
    Ok(())
}

fn grover_checks(config: &ExperimentConfig, suite: &mut Suite) -> Result<()> {
    let spec = GroverSpec::new(config.mu, vec![true; config.mu], config.s)?;
    let span = 3.0 * config.s as f64;

    if let Ok((a, b)) = grover_operators(&spec) {
        let step = &b * &a;
        let mut state = spec.uniform_register();
        let mut worst: f64 = 0.0;
        for n in 0..=6 {
            let overlap = state[spec.target_index()].norm_sqr();
            worst = worst.max((overlap - machine_time_overlap(&spec, n)).abs());
            state = &step * state;
        }
        suite.push(
            "iteration_overlap_identity",
            worst <= 1e-12,
            format!("max deviation from sin^2((2n+1) theta): {worst:.1e}"),
        );
    }

    let times = time_grid(span, config.dt)?;
    let damped = damped_overlap_series(&spec, &times)?;
    suite.range(&[&damped]);
    let ideal = (0..=spec.optimal_iterations().ceil() as usize)
        .map(|n| machine_time_overlap(&spec, n))
        .fold(0.0_f64, f64::max);
    let peak = damped.peak().expect("nonempty grid").1;
    suite.push(
        "damping_cap",
        peak <= ideal + RANGE_TOL,
        format!("damped overlap peak {peak:.6} vs undamped peak {ideal:.6}"),
    );

    if let Ok(line) = build_grover_line(&spec) {
        let h = build(&line)?;
        suite.hermitian("hermitian_generator", &h);
        let psi0 = CursorState::initial(&line, &spec.uniform_register(), ControlInit::None)?;
        let grid = time_grid(span, 0.1)?;
        let result = evolve_const(&h, &psi0, &grid)?;
        suite.norm(&result);
        let simulated = target_overlap_series(&result, &spec)?;
        let predicted = damped_overlap_series(&spec, &grid)?;
        let worst = simulated
            .samples()
            .iter()
            .zip(predicted.samples())
            .map(|(sim, pre)| (sim.1 - pre.1).abs())
            .fold(0.0_f64, f64::max);
        suite.push(
            "line_matches_closed_form",
            worst <= 1e-8,
            format!("simulated overlap vs closed form within {worst:.1e} on a 0.1 grid"),
        );
    }
    Ok(())
}

fn bounds_checks(config: &ExperimentConfig, suite: &mut Suite) {
    let spot = (confined_completion_bound(8) - 2.0).abs() <= 1e-12
        && (confined_completion_bound(64) - 0.5).abs() <= 1e-12
        && telomeric_completion_bound(config.s, 0).abs() <= 1e-12;
    suite.push(
        "cap_spot_values",
        spot,
        "8/s^(2/3) at s = 8 and 64; trapping cap at delta = 0".to_string(),
    );

    let mut monotone = true;
    let mut previous = -1.0;
    for delta in 0..=2 * config.s {
        let value = telomeric_completion_bound(config.s, delta);
        monotone &= value >= previous;
        previous = value;
    }
    let saturates = telomeric_completion_bound(config.s, 100_000 * config.s) > 0.999;
    suite.push(
        "cap_monotone_in_delta",
        monotone && saturates,
        format!(
            "nondecreasing over delta = 0..{}, approaching 1 for huge telomeres",
            2 * config.s
        ),
    );
}

pub fn run(config: &ExperimentConfig) -> Result<bool> {
    let mut suite = Suite::new();
    let parameters = match config.experiment {
        ExperimentKind::Cursor | ExperimentKind::Telomere => serde_json::json!({
            "s": config.s, "delta": config.delta, "dt": config.dt, "t_max": config.t_max,
        }),
        ExperimentKind::Pipulse | ExperimentKind::DoubleTrap => serde_json::json!({
            "s": config.s, "delta": config.delta, "t0": config.t0,
            "dt": config.dt, "t_max": config.t_max,
        }),
        ExperimentKind::Grover => serde_json::json!({
            "mu": config.mu, "s": config.s, "dt": config.dt,
        }),
        ExperimentKind::Bounds => serde_json::json!({
            "s": config.s, "delta": config.delta,
        }),
    };

    match config.experiment {
        ExperimentKind::Cursor => cursor_checks(config, &mut suite)?,
        ExperimentKind::Telomere => telomere_checks(config, &mut suite)?,
        ExperimentKind::Pipulse => pipulse_checks(config, &mut suite)?,
        ExperimentKind::DoubleTrap => double_trap_checks(config, &mut suite)?,
        ExperimentKind::Grover => grover_checks(config, &mut suite)?,
        ExperimentKind::Bounds => bounds_checks(config, &mut suite),
    }

    let passed = suite.checks.iter().all(|check| check.passed);
    let report = Report {
        experiment: config.experiment.name(),
        parameters,
        checks: suite.checks,
        passed,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(passed)
}
