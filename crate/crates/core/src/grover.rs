//! Grover search driven by the cursor, and its damping by the clock.
//!
//! The register alternates the two Grover reflections as the cursor hops,
//! so cursor position doubles as the iteration counter ("machine time").
//! Because the cursor is a spreading wave packet rather than a classical
//! counter, the observed target overlap is a mixture of iteration counts:
//!
//! ```text
//! P_target(t) = sum_{x=1}^{s} |c(t, x; s)|^2 sin^2(theta * x_odd)
//! ```
//!
//! with `theta = arcsin(2^(-mu/2))` and `x_odd` the largest odd number not
//! larger than `x`. The mixture damps the oscillation that an ideal Grover
//! machine would show.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::amplitudes::amplitude_profile;
use crate::basis::{BasisLabel, ProgramLineSpec};
use crate::error::{Error, Result};
use crate::observables::TimeSeries;
use crate::propagator::EvolutionResult;

/// Largest register (in q-bits) for which the dense reflections are built.
pub const MAX_DENSE_MU: usize = 10;
/// Largest register accepted when building a full program line.
pub const MAX_LINE_MU: usize = 8;
/// Cap keeping `2^(mu+1)` comfortably inside integer range.
const MAX_MU: usize = 60;

/// A Grover instance: `mu` register q-bits, the marked axis-3 state, and
/// the (odd) length of the program line clocking the iterations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroverSpec {
    mu: usize,
    /// Marked spin pattern along axis 3; `true` is spin +1. Entry `i` maps
    /// to bit `i` of the register index, with +1 as bit value 0.
    target: Vec<bool>,
    s: usize,
}

impl GroverSpec {
    pub fn new(mu: usize, target: Vec<bool>, s: usize) -> Result<Self> {
        if !(1..=MAX_MU).contains(&mu) {
            return Err(Error::InvalidQBitCount { mu, max: MAX_MU });
        }
        if target.len() != mu {
            return Err(Error::TargetLength {
                expected: mu,
                found: target.len(),
            });
        }
        if s < 1 {
            return Err(Error::InvalidChainLength { s });
        }
        if s.is_multiple_of(2) {
            return Err(Error::EvenChainLength { s });
        }
        Ok(GroverSpec { mu, target, s })
    }

    /// Instance with the line length `s = 2^(mu+1) + 1` used throughout:
    /// long enough for the cursor to pass the optimal iteration count.
    pub fn with_default_length(mu: usize, target: Vec<bool>) -> Result<Self> {
        if !(1..=MAX_MU).contains(&mu) {
            return Err(Error::InvalidQBitCount { mu, max: MAX_MU });
        }
        let s = (1usize << (mu + 1)) + 1;
        GroverSpec::new(mu, target, s)
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn target(&self) -> &[bool] {
        &self.target
    }

    pub fn register_dimension(&self) -> usize {
        1usize << self.mu
    }

    /// Index of the marked state in the axis-3 register basis.
    pub fn target_index(&self) -> usize {
        self.target
            .iter()
            .enumerate()
            .filter(|(_, &up)| !up)
            .map(|(i, _)| 1usize << i)
            .sum()
    }

    /// Grover rotation angle `arcsin(2^(-mu/2))`.
    pub fn theta(&self) -> f64 {
        (self.register_dimension() as f64).sqrt().recip().asin()
    }

    /// Iteration count bringing an ideal machine closest to the target,
    /// `(pi/4) 2^(mu/2)`.
    pub fn optimal_iterations(&self) -> f64 {
        std::f64::consts::FRAC_PI_4 * (self.register_dimension() as f64).sqrt()
    }

    /// The uniform register state (all spins +1 along axis 1).
    pub fn uniform_register(&self) -> DVector<Complex64> {
        let dim = self.register_dimension();
        let amplitude = (dim as f64).sqrt().recip();
        DVector::from_element(dim, Complex64::new(amplitude, 0.0))
    }
}

/// The two Grover reflections on the dense register: `A = I - 2|a><a|`
/// about the marked state and `B = I - 2|u><u|` about the uniform state.
pub fn grover_operators(spec: &GroverSpec) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    if spec.mu > MAX_DENSE_MU {
        return Err(Error::RegisterTooLarge {
            mu: spec.mu,
            max: MAX_DENSE_MU,
        });
    }
    let dim = spec.register_dimension();
    let mut a: DMatrix<Complex64> = DMatrix::identity(dim, dim);
    let marked = spec.target_index();
    a[(marked, marked)] = Complex64::new(-1.0, 0.0);
    let correction = -2.0 / dim as f64;
    let b = DMatrix::from_fn(dim, dim, |x, y| {
        let diagonal = if x == y { 1.0 } else { 0.0 };
        Complex64::new(diagonal + correction, 0.0)
    });
    Ok((a, b))
}

/// Target overlap of an ideal Grover machine after `n` iterations:
/// `sin^2((2n+1) theta)`.
pub fn machine_time_overlap(spec: &GroverSpec, n: usize) -> f64 {
    let angle = (2 * n + 1) as f64 * spec.theta();
    angle.sin().powi(2)
}

/// Largest odd number not larger than `x` (requires `x >= 1`).
fn largest_odd_not_above(x: usize) -> usize {
    if x % 2 == 1 {
        x
    } else {
        x - 1
    }
}

/// Target overlap of the cursor-clocked machine at time `t`: the ideal
/// overlaps mixed by the cursor's position distribution.
pub fn damped_overlap(spec: &GroverSpec, t: f64) -> f64 {
    let profile = amplitude_profile(t, spec.s).expect("spec guarantees s >= 1");
    let theta = spec.theta();
    let mut total = 0.0;
    for x in 1..=spec.s {
        let oscillation = (theta * largest_odd_not_above(x) as f64).sin().powi(2);
        total += profile[x - 1].norm_sqr() * oscillation;
    }
    total
}

/// [`damped_overlap`] sampled over `times`, as a probability series.
pub fn damped_overlap_series(spec: &GroverSpec, times: &[f64]) -> Result<TimeSeries> {
    let samples = times
        .iter()
        .map(|&t| (t, damped_overlap(spec, t)))
        .collect();
    TimeSeries::probability("p_target", samples)
}

/// The program line executing this Grover instance: a sequential chain
/// whose instructions alternate the reflections, `A` on odd hops and `B`
/// on even hops.
pub fn build_grover_line(spec: &GroverSpec) -> Result<ProgramLineSpec> {
    if spec.mu > MAX_LINE_MU {
        return Err(Error::RegisterTooLarge {
            mu: spec.mu,
            max: MAX_LINE_MU,
        });
    }
    let (a, b) = grover_operators(spec)?;
    let unitaries = (1..spec.s)
        .map(|j| if j % 2 == 1 { a.clone() } else { b.clone() })
        .collect();
    ProgramLineSpec::sequential(spec.s)?.with_register(spec.register_dimension(), unitaries)
}

/// Probability of finding the register in the marked state, cursor traced
/// out, at every sampled time of a full line simulation.
pub fn target_overlap_series(result: &EvolutionResult, spec: &GroverSpec) -> Result<TimeSeries> {
    let samples = result
        .iter()
        .map(|(t, state)| {
            let basis = state.basis();
            if basis.d_reg() != spec.register_dimension() || basis.has_control() {
                return Err(Error::BasisMismatch);
            }
            let mut value = 0.0;
            for site in 1..=basis.n_sites() {
                let label = BasisLabel {
                    register_index: spec.target_index(),
                    control: None,
                    site,
                };
                value += state.amplitude(&label)?.norm_sqr();
            }
            Ok((t, value))
        })
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::probability("p_target", samples)
}
