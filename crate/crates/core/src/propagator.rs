//! Time evolution under piecewise-constant Hermitian generators.
//!
//! Each generator is eigendecomposed once (dense, Hermitian) and states are
//! advanced as `V exp(-i Λ t) V† ψ`, which is exact up to the
//! eigendecomposition itself; there is no step-size error. Schedules of
//! several generators, such as a pulse window inside otherwise constant
//! evolution, reuse one decomposition per distinct operator.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{Basis, CursorState};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_control_flip, HermitianOperator};

/// Largest dimension accepted by the dense eigendecomposition.
pub const MAX_DENSE_DIMENSION: usize = 4096;

/// How states were propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dense Hermitian eigendecomposition, exact in time.
    Eigendecomposition,
}

/// States sampled along an evolution, with the largest deviation of any
/// sampled state's norm from 1.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    times: Vec<f64>,
    states: Vec<CursorState>,
    method: Method,
    max_norm_drift: f64,
}

impl EvolutionResult {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[CursorState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.max_norm_drift
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &CursorState)> + '_ {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// One stretch of evolution under a fixed generator.
#[derive(Debug, Clone)]
pub struct Segment {
    t_start: f64,
    t_end: f64,
    operator: Arc<HermitianOperator>,
}

impl Segment {
    pub fn new(t_start: f64, t_end: f64, operator: Arc<HermitianOperator>) -> Self {
        Segment {
            t_start,
            t_end,
            operator,
        }
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn operator(&self) -> &Arc<HermitianOperator> {
        &self.operator
    }
}

/// Piecewise-constant generator: contiguous segments sharing one basis.
/// Segments must touch exactly, so build adjacent segments from the same
/// boundary value rather than recomputing it.
#[derive(Debug, Clone)]
pub struct PulseSchedule {
    segments: Vec<Segment>,
}

impl PulseSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptySchedule);
        }
        let basis = segments[0].operator.basis();
        for (index, segment) in segments.iter().enumerate() {
            if !segment.t_start.is_finite()
                || !segment.t_end.is_finite()
                || segment.t_end <= segment.t_start
            {
                return Err(Error::EmptySegment { index });
            }
            if segment.operator.basis() != basis {
                return Err(Error::BasisMismatch);
            }
            if index > 0 && segment.t_start != segments[index - 1].t_end {
                return Err(Error::ScheduleGap { index });
            }
        }
        Ok(PulseSchedule { segments })
    }

    /// Single-segment schedule with a constant generator.
    pub fn constant(operator: Arc<HermitianOperator>, t_start: f64, t_end: f64) -> Result<Self> {
        PulseSchedule::new(vec![Segment::new(t_start, t_end, operator)])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn basis(&self) -> Basis {
        self.segments[0].operator.basis()
    }

    pub fn start(&self) -> f64 {
        self.segments[0].t_start
    }

    pub fn end(&self) -> f64 {
        self.segments[self.segments.len() - 1].t_end
    }
}

struct Spectral {
    values: DVector<f64>,
    vectors: DMatrix<Complex64>,
}

impl Spectral {
    fn decompose(operator: &HermitianOperator) -> Result<Spectral> {
        let dim = operator.dimension();
        if dim > MAX_DENSE_DIMENSION {
            return Err(Error::DimensionTooLarge {
                dim,
                max: MAX_DENSE_DIMENSION,
            });
        }
        let eigen = operator.to_dense().symmetric_eigen();
        Ok(Spectral {
            values: eigen.eigenvalues,
            vectors: eigen.eigenvectors,
        })
    }

    fn coefficients(&self, amplitudes: &DVector<Complex64>) -> DVector<Complex64> {
        self.vectors.adjoint() * amplitudes
    }

    /// `V exp(-i Λ dt) c` for mode coefficients `c`.
    fn advanced(&self, coefficients: &DVector<Complex64>, dt: f64) -> DVector<Complex64> {
        let phased = DVector::from_iterator(
            coefficients.len(),
            coefficients
                .iter()
                .zip(self.values.iter())
                .map(|(c, &value)| c * Complex64::from_polar(1.0, -value * dt)),
        );
        &self.vectors * phased
    }
}

fn check_sorted(times: &[f64]) -> Result<()> {
    if times.windows(2).any(|pair| pair[0] > pair[1]) {
        return Err(Error::UnsortedTimes);
    }
    Ok(())
}

/// Evolve `psi0` under a constant generator, sampling at `times` (sorted,
/// nonnegative, measured from the initial state).
pub fn evolve_const(
    operator: &HermitianOperator,
    psi0: &CursorState,
    times: &[f64],
) -> Result<EvolutionResult> {
    if operator.basis() != psi0.basis() {
        return Err(Error::BasisMismatch);
    }
    check_sorted(times)?;
    if let Some(&t) = times.first() {
        if t < 0.0 {
            return Err(Error::NegativeTime { t });
        }
    }
    let spectral = Spectral::decompose(operator)?;
    let coefficients = spectral.coefficients(psi0.amplitudes());
    let mut states = Vec::with_capacity(times.len());
    let mut max_norm_drift = 0.0_f64;
    for &t in times {
        let amplitudes = spectral.advanced(&coefficients, t);
        max_norm_drift = max_norm_drift.max((amplitudes.norm() - 1.0).abs());
        states.push(CursorState::new(psi0.basis(), amplitudes)?);
    }
    Ok(EvolutionResult {
        times: times.to_vec(),
        states,
        method: Method::Eigendecomposition,
        max_norm_drift,
    })
}

/// Evolve `psi0` from the schedule's start, sampling at `times` (sorted,
/// inside the schedule's span). `psi0` is the state at the start of the
/// first segment.
pub fn evolve_schedule(
    schedule: &PulseSchedule,
    psi0: &CursorState,
    times: &[f64],
) -> Result<EvolutionResult> {
    if schedule.basis() != psi0.basis() {
        return Err(Error::BasisMismatch);
    }
    check_sorted(times)?;
    for &t in times {
        if t < schedule.start() || t > schedule.end() {
            return Err(Error::TimeOutsideSchedule {
                t,
                start: schedule.start(),
                end: schedule.end(),
            });
        }
    }

    // One decomposition per distinct operator, shared across segments.
    let mut decomposed: Vec<(*const HermitianOperator, Arc<Spectral>)> = Vec::new();
    let mut spectral_for = |operator: &Arc<HermitianOperator>| -> Result<Arc<Spectral>> {
        let key = Arc::as_ptr(operator);
        if let Some((_, spectral)) = decomposed.iter().find(|(ptr, _)| *ptr == key) {
            return Ok(spectral.clone());
        }
        let spectral = Arc::new(Spectral::decompose(operator)?);
        decomposed.push((key, spectral.clone()));
        Ok(spectral)
    };

    let mut current = psi0.amplitudes().clone();
    let mut states = Vec::with_capacity(times.len());
    let mut max_norm_drift = 0.0_f64;
    let mut sample_index = 0;
    let last_segment = schedule.segments().len() - 1;
    for (index, segment) in schedule.segments().iter().enumerate() {
        let spectral = spectral_for(&segment.operator)?;
        let coefficients = spectral.coefficients(&current);
        while sample_index < times.len() {
            let t = times[sample_index];
            let owned = t < segment.t_end || (index == last_segment && t <= segment.t_end);
            if !owned {
                break;
            }
            let amplitudes = spectral.advanced(&coefficients, t - segment.t_start);
            max_norm_drift = max_norm_drift.max((amplitudes.norm() - 1.0).abs());
            states.push(CursorState::new(psi0.basis(), amplitudes)?);
            sample_index += 1;
        }
        if index != last_segment {
            current = spectral.advanced(&coefficients, segment.t_end - segment.t_start);
        }
    }
    Ok(EvolutionResult {
        times: times.to_vec(),
        states,
        method: Method::Eigendecomposition,
        max_norm_drift,
    })
}

/// Schedule for a control-exchange pulse: the line's generator runs from 0
/// to `t_final`, and over the unit window `[t0 - 1/2, t0 + 1/2]` the term
/// `(pi/2) * control_flip` is added, integrating to a full plus/minus
/// exchange. The base generator stays active during the window.
pub fn make_pi_pulse_schedule(
    base: &HermitianOperator,
    t0: f64,
    t_final: f64,
) -> Result<PulseSchedule> {
    let window_start = t0 - 0.5;
    let window_end = t0 + 0.5;
    if window_start < 0.0 {
        return Err(Error::PulseTooEarly { t0 });
    }
    if t_final <= window_end {
        return Err(Error::ScheduleTooShort { t_final, window_end });
    }
    let flip = build_control_flip(base.basis())?;
    let pulsed = base.sum(&flip.scaled(std::f64::consts::FRAC_PI_2))?;
    let base = Arc::new(base.clone());
    let mut segments = Vec::with_capacity(3);
    if window_start > 0.0 {
        segments.push(Segment::new(0.0, window_start, base.clone()));
    }
    segments.push(Segment::new(window_start, window_end, Arc::new(pulsed)));
    segments.push(Segment::new(window_end, t_final, base));
    PulseSchedule::new(segments)
}

/// Uniform sampling grid `0, dt, 2 dt, ..` up to and including `t_max`
/// (the last point is clamped onto `t_max` against rounding overshoot).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidTimeStep { dt });
    }
    if !t_max.is_finite() || t_max < 0.0 {
        return Err(Error::InvalidTimeSpan { t_max });
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|i| (i as f64 * dt).min(t_max)).collect())
}
