//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them all).
//!
//! Criterion 4 is red on purpose: the asymptotic trapping cap it asserts is
//! exceeded by ~0.9% at the finite size it names. The FAIL line and the
//! README carry the analysis; the other eight criteria pass.

use cursorchain::amplitudes::{amplitude_profile, closed_form_amplitude};
use cursorchain::grover::{
    build_grover_line, damped_overlap_series, grover_operators, machine_time_overlap,
    target_overlap_series,
};
use cursorchain::hamiltonian::{build, build_telomeric, full_spin_oracle};
use cursorchain::observables::{
    completion_probability, confined_completion_bound, control_resolved_probability,
    site_probability, telomeric_completion_bound,
};
use cursorchain::propagator::{evolve_const, evolve_schedule, make_pi_pulse_schedule, time_grid};
use cursorchain::{
    BasisLabel, Control, ControlInit, CursorState, EvolutionResult, GroverSpec, HermitianOperator,
    ProgramLineSpec, TimeSeries,
};
use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

fn report(number: u8, name: &str, pass: bool, detail: &str) {
    println!(
        "{}  {number}  {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn unit_register() -> DVector<Complex64> {
    DVector::from_element(1, Complex64::new(1.0, 0.0))
}

fn post_pulse(series: &TimeSeries, cut: f64) -> Vec<f64> {
    series
        .samples()
        .iter()
        .filter(|&&(t, _)| t >= cut)
        .map(|&(_, v)| v)
        .collect()
}

fn spread(values: &[f64]) -> (f64, f64, f64) {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    (min, max, max - min)
}

#[test]
fn closed_form_matches_propagator() {
    let start = Instant::now();
    let times = [0.1, 1.0, 10.0, 100.0];
    let mut worst = 0.0_f64;
    for s in [2usize, 5, 20, 64] {
        let spec = ProgramLineSpec::sequential(s).unwrap();
        let h = build(&spec).unwrap();
        let psi0 = CursorState::initial(&spec, &unit_register(), ControlInit::None).unwrap();
        let result = evolve_const(&h, &psi0, &times).unwrap();
        for (t, state) in result.iter() {
            for k in 1..=s {
                let predicted = closed_form_amplitude(t, k, s).unwrap();
                let simulated = state.amplitude(&BasisLabel::site(k)).unwrap();
                worst = worst.max((predicted - simulated).norm());
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-8 && elapsed < Duration::from_secs(5);
    report(
        1,
        "closed form vs propagator",
        pass,
        &format!("max amplitude error {worst:.2e} (s up to 64, t up to 100), {elapsed:.2?}"),
    );
    assert!(pass, "max error {worst:.3e}, elapsed {elapsed:.2?}");
}

#[test]
fn sector_restriction_matches_full_spin() {
    let start = Instant::now();
    let mut specs: Vec<ProgramLineSpec> = (1..=4)
        .map(|s| ProgramLineSpec::sequential(s).unwrap())
        .collect();
    specs.push(ProgramLineSpec::telomeric(3, 2).unwrap());
    let mut worst_commutator = 0.0_f64;
    let mut all_equal = true;
    for spec in &specs {
        let oracle = full_spin_oracle(spec).unwrap();
        worst_commutator = worst_commutator.max(oracle.excitation_commutator_max());
        all_equal &= oracle.restricted() == *build(spec).unwrap().matrix();
    }
    let elapsed = start.elapsed();
    let pass = worst_commutator == 0.0 && all_equal && elapsed < Duration::from_secs(10);
    report(
        2,
        "full-spin oracle",
        pass,
        &format!(
            "excitation commutator {worst_commutator:.1e}, restrictions {} the sector builders, {elapsed:.2?}",
            if all_equal { "identical to" } else { "DIFFER from" }
        ),
    );
    assert!(pass);
}

#[test]
fn confined_completion_stays_bounded() {
    let mut pass = true;
    let mut details = Vec::new();
    for s in [10usize, 20, 50] {
        let spec = ProgramLineSpec::telomeric(s, s / 2).unwrap();
        let h = build(&spec).unwrap();
        let psi0 = CursorState::initial(&spec, &unit_register(), ControlInit::Minus).unwrap();
        let times = time_grid(20.0 * s as f64, 0.05).unwrap();
        let result = evolve_const(&h, &psi0, &times).unwrap();
        let completion = completion_probability(&result, &spec).unwrap();
        let (_, peak) = completion.peak().unwrap();
        let bound = confined_completion_bound(s);
        pass &= peak <= bound;
        if s == 50 {
            pass &= peak >= 0.1;
        }
        details.push(format!("s={s}: peak {peak:.4} <= {bound:.4}"));
    }
    report(3, "confined spreading cap", pass, &details.join("; "));
    assert!(pass, "{details:?}");
}

#[test]
fn telomeric_peak_within_trapping_bound() {
    let (s, delta) = (20usize, 10usize);
    let spec = ProgramLineSpec::telomeric(s, delta).unwrap();
    let h = build(&spec).unwrap();
    let psi0 = CursorState::initial(&spec, &unit_register(), ControlInit::Plus).unwrap();
    let times = time_grid(60.0, 0.05).unwrap();
    let result = evolve_const(&h, &psi0, &times).unwrap();
    let completion = completion_probability(&result, &spec).unwrap();
    let (t_peak, peak) = completion.peak().unwrap();

    // Independent route: the same quantity from the closed-form amplitudes
    // of the equivalent free 30-site chain.
    let closed_peak = times
        .iter()
        .map(|&t| {
            let profile = amplitude_profile(t, s + delta).unwrap();
            (s..=s + delta).map(|k| profile[k - 1].norm_sqr()).sum()
        })
        .fold(0.0_f64, f64::max);
    let route_gap = (peak - closed_peak).abs();

    let occupation = site_probability(&result, s + 1..=s + delta, None, "p_telomere")
        .unwrap()
        .peak()
        .unwrap()
        .1;

    let bound = telomeric_completion_bound(s, delta);
    let upper = peak <= bound + 1e-6;
    let lower = peak >= 0.75;
    report(
        4,
        "telomeric trapping cap",
        upper && lower,
        &format!(
            "completion peak {peak:.9} at t = {t_peak:.2} vs cap {bound:.9} \
             (closed-form route agrees within {route_gap:.1e}; telomere-only occupation peaks \
             at {occupation:.6} <= cap). The cap is an asymptotic statement approached from \
             above: at this size the completion peak exceeds it by {:.2e} through the last \
             program site's own mass, so the <= assertion cannot hold and is left red; \
             see README, Acceptance status.",
            peak - bound
        ),
    );
    assert!(route_gap <= 1e-9);
    assert!(occupation <= bound + 1e-9);
    assert!(lower, "completion peak {peak:.6} below 0.75");
    assert!(
        upper,
        "completion peak {peak:.9} exceeds the asymptotic cap {bound:.9} by {:.2e} at (s, delta) = (20, 10); \
         known finite-size effect, documented in the README",
        peak - bound
    );
}

#[test]
fn pi_pulse_traps_telomere_mass() {
    let start = Instant::now();
    let (s, delta, t0, t_final) = (20usize, 10usize, 40.0, 120.0);
    let spec = ProgramLineSpec::telomeric(s, delta).unwrap();
    let h = build_telomeric(&spec).unwrap();
    let schedule = make_pi_pulse_schedule(&h, t0, t_final).unwrap();
    let psi0 = CursorState::initial(&spec, &unit_register(), ControlInit::Plus).unwrap();
    let times = time_grid(t_final, 0.05).unwrap();
    let result = evolve_schedule(&schedule, &psi0, &times).unwrap();
    let trapped =
        control_resolved_probability(&result, &spec, Control::Plus, s + 1..=s + delta).unwrap();
    let (min, _, wander) = spread(&post_pulse(&trapped, t0 + 0.5));
    let elapsed = start.elapsed();
    let pass = wander <= 1e-9 && min > 0.6 && elapsed < Duration::from_secs(30);
    report(
        5,
        "pulse-frozen telomere mass",
        pass,
        &format!("trapped mass {min:.6}, wander {wander:.1e} over [40.5, 120], {elapsed:.2?}"),
    );
    assert!(pass, "mass {min}, wander {wander:.2e}, {elapsed:.2?}");
}

#[test]
fn double_trap_traps_both_components() {
    let (s, delta, t0, t_final) = (20usize, 10usize, 40.0, 120.0);
    let spec = ProgramLineSpec::double_trap(s, delta).unwrap();
    let h = build(&spec).unwrap();
    let schedule = make_pi_pulse_schedule(&h, t0, t_final).unwrap();
    let half = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let psi0 = CursorState::initial(
        &spec,
        &unit_register(),
        ControlInit::Superposition(half, half),
    )
    .unwrap();
    let times = time_grid(t_final, 0.05).unwrap();
    let result = evolve_schedule(&schedule, &psi0, &times).unwrap();
    let first =
        control_resolved_probability(&result, &spec, Control::Plus, s + 1..=s + delta).unwrap();
    let second = control_resolved_probability(
        &result,
        &spec,
        Control::Minus,
        s + delta + 1..=s + 2 * delta,
    )
    .unwrap();
    let (min1, _, wander1) = spread(&post_pulse(&first, t0 + 0.5));
    let (min2, _, wander2) = spread(&post_pulse(&second, t0 + 0.5));
    let total = min1 + min2;
    let pass = wander1 <= 1e-9 && wander2 <= 1e-9 && total > 0.5;
    report(
        6,
        "double trap",
        pass,
        &format!(
            "branch masses {min1:.6} + {min2:.6} = {total:.6}, wander {wander1:.1e} / {wander2:.1e}"
        ),
    );
    assert!(pass, "wander {wander1:.2e}/{wander2:.2e}, total {total}");
}

#[test]
fn grover_iteration_overlap_identity() {
    let mut worst = 0.0_f64;
    for mu in 1usize..=3 {
        let spec = GroverSpec::with_default_length(mu, vec![true; mu]).unwrap();
        let (a, b) = grover_operators(&spec).unwrap();
        let step = &b * &a;
        let mut state = spec.uniform_register();
        for n in 0..=6 {
            let overlap = state[spec.target_index()].norm_sqr();
            worst = worst.max((overlap - machine_time_overlap(&spec, n)).abs());
            state = &step * state;
        }
    }
    let pass = worst <= 1e-12;
    report(
        7,
        "iteration overlap identity",
        pass,
        &format!("max |matrix-power overlap - sin^2((2n+1) theta)| = {worst:.2e}"),
    );
    assert!(pass, "worst deviation {worst:.3e}");
}

#[test]
fn grover_damping_identity_and_effect() {
    let start = Instant::now();

    let spec3 = GroverSpec::with_default_length(3, vec![true; 3]).unwrap();
    assert_eq!(spec3.s(), 17);
    let line = build_grover_line(&spec3).unwrap();
    let h = build(&line).unwrap();
    let psi0 = CursorState::initial(&line, &spec3.uniform_register(), ControlInit::None).unwrap();
    let times = time_grid(51.0, 0.1).unwrap();
    let result = evolve_const(&h, &psi0, &times).unwrap();
    let simulated = target_overlap_series(&result, &spec3).unwrap();
    let predicted = damped_overlap_series(&spec3, &times).unwrap();
    let worst = simulated
        .samples()
        .iter()
        .zip(predicted.samples())
        .map(|(sim, pre)| (sim.1 - pre.1).abs())
        .fold(0.0_f64, f64::max);

    let spec5 = GroverSpec::with_default_length(5, vec![true; 5]).unwrap();
    assert_eq!(spec5.s(), 65);
    let grid = time_grid(650.0, 0.05).unwrap();
    let damped = damped_overlap_series(&spec5, &grid).unwrap();
    let (t_max, damped_max) = damped.peak().unwrap();
    let ideal_peak = (0..=spec5.optimal_iterations().ceil() as usize)
        .map(|n| machine_time_overlap(&spec5, n))
        .fold(0.0_f64, f64::max);

    let elapsed = start.elapsed();
    let pass = worst <= 1e-8 && damped_max < ideal_peak && elapsed < Duration::from_secs(60);
    report(
        8,
        "clock-damped search",
        pass,
        &format!(
            "simulation vs closed form within {worst:.2e} (mu=3); damped max {damped_max:.6} \
             at t = {t_max:.2} < ideal peak {ideal_peak:.6} (mu=5), {elapsed:.2?}"
        ),
    );
    assert!(pass, "worst {worst:.3e}, damped {damped_max} vs {ideal_peak}, {elapsed:.2?}");
}

#[test]
fn universal_invariants() {
    let mut max_drift = 0.0_f64;
    let mut max_residual = 0.0_f64;
    let mut series_ok = true;

    let hermiticity = |h: &HermitianOperator| -> f64 {
        let dense = h.to_dense();
        let mut worst = 0.0_f64;
        for i in 0..dense.nrows() {
            for j in 0..dense.ncols() {
                worst = worst.max((dense[(i, j)] - dense[(j, i)].conj()).norm());
            }
        }
        worst
    };
    let mut check_series = |series: &TimeSeries| {
        series_ok &= series
            .samples()
            .iter()
            .all(|&(_, v)| (-1e-12..=1.0 + 1e-12).contains(&v));
    };

    // Free line with a working register.
    let grover = GroverSpec::with_default_length(2, vec![true, false]).unwrap();
    let line = build_grover_line(&grover).unwrap();
    let h = build(&line).unwrap();
    max_residual = max_residual.max(hermiticity(&h));
    let psi0 = CursorState::initial(&line, &grover.uniform_register(), ControlInit::None).unwrap();
    let times = time_grid(3.0 * line.s() as f64, 0.1).unwrap();
    let result = evolve_const(&h, &psi0, &times).unwrap();
    max_drift = max_drift.max(result.max_norm_drift());
    check_series(&target_overlap_series(&result, &grover).unwrap());

    // Telomeric line, both control components.
    let spec = ProgramLineSpec::telomeric(12, 6).unwrap();
    let h = build(&spec).unwrap();
    max_residual = max_residual.max(hermiticity(&h));
    for control in [ControlInit::Plus, ControlInit::Minus] {
        let psi0 = CursorState::initial(&spec, &unit_register(), control).unwrap();
        let result = evolve_const(&h, &psi0, &time_grid(48.0, 0.1).unwrap()).unwrap();
        max_drift = max_drift.max(result.max_norm_drift());
        check_series(&completion_probability(&result, &spec).unwrap());
        check_series(&site_probability(&result, 1..=12, None, "p_program").unwrap());
    }

    // Pulsed double trap from a control superposition.
    let spec = ProgramLineSpec::double_trap(8, 4).unwrap();
    let h = build(&spec).unwrap();
    let schedule = make_pi_pulse_schedule(&h, 16.0, 40.0).unwrap();
    max_residual = max_residual.max(hermiticity(&h));
    max_residual = max_residual.max(hermiticity(schedule.segments()[1].operator()));
    let half = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let psi0 = CursorState::initial(
        &spec,
        &unit_register(),
        ControlInit::Superposition(half, half),
    )
    .unwrap();
    let result: EvolutionResult =
        evolve_schedule(&schedule, &psi0, &time_grid(40.0, 0.1).unwrap()).unwrap();
    max_drift = max_drift.max(result.max_norm_drift());
    check_series(&control_resolved_probability(&result, &spec, Control::Plus, 9..=12).unwrap());
    check_series(&control_resolved_probability(&result, &spec, Control::Minus, 13..=16).unwrap());

    let pass = max_drift <= 1e-10 && max_residual == 0.0 && series_ok;
    report(
        9,
        "universal invariants",
        pass,
        &format!(
            "max norm drift {max_drift:.1e}, hermiticity residual {max_residual:.1e}, \
             all probability series within [-1e-12, 1+1e-12]: {series_ok}"
        ),
    );
    assert!(pass);
}
