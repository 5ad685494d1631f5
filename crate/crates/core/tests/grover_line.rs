//! The cursor-clocked Grover machine: line simulation against the closed
//! form, and the conditional register states it transports.

use cursorchain::grover::{
    build_grover_line, damped_overlap, damped_overlap_series, grover_operators,
    machine_time_overlap, target_overlap_series,
};
use cursorchain::hamiltonian::build;
use cursorchain::propagator::{evolve_const, time_grid};
use cursorchain::{BasisLabel, ControlInit, CursorState, GroverSpec};
use nalgebra::DVector;
use num_complex::Complex64;

fn evolved_line(spec: &GroverSpec, times: &[f64]) -> cursorchain::EvolutionResult {
    let line = build_grover_line(spec).unwrap();
    let h = build(&line).unwrap();
    let psi0 = CursorState::initial(&line, &spec.uniform_register(), ControlInit::None).unwrap();
    evolve_const(&h, &psi0, times).unwrap()
}

#[test]
fn simulated_overlap_matches_closed_form() {
    for mu in [1usize, 2] {
        let spec = GroverSpec::with_default_length(mu, vec![true; mu]).unwrap();
        let times = time_grid(3.0 * spec.s() as f64, 0.1).unwrap();
        let result = evolved_line(&spec, &times);
        let simulated = target_overlap_series(&result, &spec).unwrap();
        let predicted = damped_overlap_series(&spec, &times).unwrap();
        for (sim, pre) in simulated.samples().iter().zip(predicted.samples()) {
            assert!(
                (sim.1 - pre.1).abs() <= 1e-8,
                "mu = {mu}, t = {}: simulated {} vs closed form {}",
                sim.0,
                sim.1,
                pre.1
            );
        }
    }
}

#[test]
fn register_rides_the_cursor_through_iterations() {
    // Conditioned on the cursor sitting at site 2n+1, the register is the
    // ideal machine's state after n iterations, up to a global phase, and
    // its overlap with the marked state is sin^2((2n+1) theta).
    let t = 7.3;
    for mu in [1usize, 2] {
        let spec = GroverSpec::with_default_length(mu, vec![true; mu]).unwrap();
        let result = evolved_line(&spec, &[t]);
        let state = &result.states()[0];
        let d = spec.register_dimension();
        let (a, b) = grover_operators(&spec).unwrap();
        let step = &b * &a;

        let mut ideal = spec.uniform_register();
        let mut site = 1;
        let mut n = 0;
        while site <= spec.s() {
            let mut conditional = DVector::<Complex64>::zeros(d);
            for r in 0..d {
                conditional[r] = state
                    .amplitude(&BasisLabel {
                        register_index: r,
                        control: None,
                        site,
                    })
                    .unwrap();
            }
            let mass = conditional.norm_squared();
            if mass > 1e-8 {
                let conditional = conditional / Complex64::new(mass.sqrt(), 0.0);
                let fidelity = ideal.dotc(&conditional).norm();
                assert!(
                    (fidelity - 1.0).abs() <= 1e-10,
                    "mu = {mu}, site {site}: fidelity {fidelity}"
                );
                let overlap = conditional[spec.target_index()].norm_sqr();
                assert!(
                    (overlap - machine_time_overlap(&spec, n)).abs() <= 1e-10,
                    "mu = {mu}, site {site}: overlap {overlap}"
                );
            }
            ideal = &step * ideal;
            site += 2;
            n += 1;
        }
    }
}

#[test]
fn damping_never_exceeds_ideal_peak() {
    let spec = GroverSpec::with_default_length(5, vec![true; 5]).unwrap();
    let cap = (0..=spec.optimal_iterations().ceil() as usize)
        .map(|n| machine_time_overlap(&spec, n))
        .fold(0.0, f64::max);
    for t in time_grid(3.0 * spec.s() as f64, 0.1).unwrap() {
        let value = damped_overlap(&spec, t);
        assert!(value <= cap + 1e-12, "t = {t}: {value} above ideal {cap}");
    }
}

#[test]
fn round_trip_maxima_decrease() {
    // Each cursor round trip (period 2(s+1)) returns a weaker echo of the
    // search peak.
    let spec = GroverSpec::with_default_length(5, vec![true; 5]).unwrap();
    let period = 2.0 * (spec.s() + 1) as f64;
    let t_max = 3.0 * spec.s() as f64;
    let times = time_grid(t_max, 0.1).unwrap();
    let mut window_max = vec![0.0_f64; (t_max / period).ceil() as usize];
    for t in times {
        let window = ((t / period).floor() as usize).min(window_max.len() - 1);
        window_max[window] = window_max[window].max(damped_overlap(&spec, t));
    }
    for pair in window_max.windows(2) {
        assert!(
            pair[1] < pair[0],
            "window maxima do not decrease: {window_max:?}"
        );
    }
}
