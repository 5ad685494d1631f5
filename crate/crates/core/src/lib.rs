//! Simulator for the clocking cursor of a spin-chain quantum computer.
//!
//! A program line is a chain of sites visited by a single excitation (the
//! cursor) whose hops drive instruction unitaries on an attached register.
//! The crate builds the corresponding single-excitation Hamiltonians,
//! evolves states under them (including windowed control pulses), and
//! evaluates the observables used to study how chain topology shapes the
//! completion probability: free chains, telomeric tails, double traps, and
//! a Grover search damped by its own clock.
//!
//! Typical flow: describe a line with [`ProgramLineSpec`], build its
//! generator with [`hamiltonian::build`], prepare a [`CursorState`], evolve
//! with [`propagator::evolve_const`] or a [`PulseSchedule`], then reduce to
//! [`TimeSeries`] with the `observables` functions.

pub mod amplitudes;
pub mod basis;
mod error;
pub mod grover;
pub mod hamiltonian;
pub mod observables;
pub mod propagator;

pub use basis::{Basis, BasisLabel, Control, ControlInit, CursorState, ProgramLineSpec, Topology};
pub use error::{Error, Result};
pub use grover::GroverSpec;
pub use hamiltonian::{FullSpinOracle, HermitianMatrix, HermitianOperator};
pub use observables::TimeSeries;
pub use propagator::{EvolutionResult, PulseSchedule};

/// Format a float with 17 significant digits, enough to round-trip f64.
pub(crate) fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}
