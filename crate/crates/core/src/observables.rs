//! Probability traces over an evolution and the analytic completion bounds.

use std::io::Write;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::basis::{Control, ProgramLineSpec};
use crate::error::{Error, Result};
use crate::fmt_g17;
use crate::propagator::EvolutionResult;

/// Slack allowed on probability values before they are rejected.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// Labeled scalar samples over strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    label: String,
    samples: Vec<(f64, f64)>,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, samples: Vec<(f64, f64)>) -> Result<Self> {
        let label = label.into();
        if samples.windows(2).any(|pair| pair[0].0 >= pair[1].0) {
            return Err(Error::NonMonotonicTimes { label });
        }
        Ok(TimeSeries { label, samples })
    }

    /// As [`TimeSeries::new`], additionally requiring every value to be a
    /// probability within [`PROBABILITY_TOL`] of the unit interval.
    pub fn probability(label: impl Into<String>, samples: Vec<(f64, f64)>) -> Result<Self> {
        let series = TimeSeries::new(label, samples)?;
        if let Some(&(t, value)) = series
            .samples
            .iter()
            .find(|(_, v)| !(-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(v))
        {
            return Err(Error::ProbabilityOutOfRange {
                label: series.label,
                t,
                value,
            });
        }
        Ok(series)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample with the largest value, `(t, value)`.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.samples
            .iter()
            .copied()
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Largest absolute difference between any two values.
    pub fn spread(&self) -> f64 {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &(_, value) in &self.samples {
            min = min.min(value);
            max = max.max(value);
        }
        if max >= min {
            max - min
        } else {
            0.0
        }
    }

    pub fn renamed(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Probability of finding the cursor on `sites` (register traced out,
/// optionally restricted to one control value) at every sampled time.
pub fn site_probability(
    result: &EvolutionResult,
    sites: RangeInclusive<usize>,
    control: Option<Control>,
    label: impl Into<String>,
) -> Result<TimeSeries> {
    let samples = result
        .iter()
        .map(|(t, state)| Ok((t, state.probability(sites.clone(), control)?)))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::probability(label, samples)
}

/// Probability that the computation looks completed: cursor on the last
/// program site or beyond it in the first telomere branch, summed over
/// control and register.
pub fn completion_probability(
    result: &EvolutionResult,
    spec: &ProgramLineSpec,
) -> Result<TimeSeries> {
    if result
        .states()
        .first()
        .is_some_and(|state| state.basis() != spec.basis())
    {
        return Err(Error::BasisMismatch);
    }
    let range = spec.s()..=spec.s() + spec.delta();
    site_probability(result, range, None, "p_completion")
}

/// As [`completion_probability`] restricted to `sites` and one control value.
pub fn control_resolved_probability(
    result: &EvolutionResult,
    spec: &ProgramLineSpec,
    control: Control,
    sites: RangeInclusive<usize>,
) -> Result<TimeSeries> {
    if !spec.has_control() {
        return Err(Error::NoControl);
    }
    if result
        .states()
        .first()
        .is_some_and(|state| state.basis() != spec.basis())
    {
        return Err(Error::BasisMismatch);
    }
    let label = format!(
        "p_{}_{}_{}",
        match control {
            Control::Plus => "plus",
            Control::Minus => "minus",
        },
        sites.start(),
        sites.end()
    );
    site_probability(result, sites, Some(control), label)
}

/// Upper bound on the completion probability of a cursor confined to `s`
/// program sites: `8 / s^(2/3)`. Vacuous below s = 23, binding above.
pub fn confined_completion_bound(s: usize) -> f64 {
    assert!(s >= 1, "chain length must be at least 1");
    8.0 / (s as f64).powf(2.0 / 3.0)
}

/// Upper bound on the completion probability with a telomere of `delta`
/// sites: `1 - (2/pi)(arcsin u - u sqrt(1 - u^2))` at `u = s / (s + 2 delta)`.
/// Approaches 1 as the telomere grows.
pub fn telomeric_completion_bound(s: usize, delta: usize) -> f64 {
    assert!(s >= 1, "chain length must be at least 1");
    let u = s as f64 / (s + 2 * delta) as f64;
    1.0 - std::f64::consts::FRAC_2_PI * (u.asin() - u * (1.0 - u * u).sqrt())
}

fn check_csv_label(label: &str) -> Result<()> {
    if label.is_empty() || label.contains(',') || label.contains('\n') || label.contains('\r') {
        return Err(Error::InvalidLabel {
            label: label.to_string(),
        });
    }
    Ok(())
}

/// Write series sharing one time grid as CSV: header `t,<label>,..`, one
/// row per sample, every float carrying 17 significant digits.
pub fn write_csv<W: Write>(mut writer: W, series: &[&TimeSeries]) -> Result<()> {
    let first = series.first().ok_or(Error::NoSeries)?;
    for s in series {
        check_csv_label(s.label())?;
        if s.len() != first.len()
            || s.samples()
                .iter()
                .zip(first.samples())
                .any(|(a, b)| a.0 != b.0)
        {
            return Err(Error::GridMismatch);
        }
    }
    let mut header = String::from("t");
    for s in series {
        header.push(',');
        header.push_str(s.label());
    }
    writeln!(writer, "{header}")?;
    for row in 0..first.len() {
        let mut line = fmt_g17(first.samples()[row].0);
        for s in series {
            line.push(',');
            line.push_str(&fmt_g17(s.samples()[row].1));
        }
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

/// Write one series as a JSON object `{label, samples: [[t, v], ..]}`, or
/// several as an array of such objects.
pub fn write_json<W: Write>(mut writer: W, series: &[&TimeSeries]) -> Result<()> {
    if series.is_empty() {
        return Err(Error::NoSeries);
    }
    if series.len() == 1 {
        serde_json::to_writer_pretty(&mut writer, series[0]).map_err(std::io::Error::from)?;
    } else {
        serde_json::to_writer_pretty(&mut writer, &series).map_err(std::io::Error::from)?;
    }
    writeln!(writer)?;
    Ok(())
}
