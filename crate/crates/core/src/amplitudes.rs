//! Closed-form cursor amplitudes on a free chain of `s` sites.
//!
//! The excitation starts on site 1 and hops with amplitude -1/2 between
//! neighbors. Expanding over the chain's standing-wave modes gives the
//! amplitude on site `k` at time `t`:
//!
//! ```text
//! c(t, k; s) = 2/(s+1) * sum_{n=1..s} exp(i t cos(theta_n)) sin(theta_n) sin(k theta_n)
//! ```
//!
//! with `theta_n = n pi / (s+1)`. All trigonometric factors are evaluated
//! from the reduced rational multiple of pi, never by accumulating phases,
//! so profiles stay accurate at large `t` and `s`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// One standing-wave mode of the open chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainMode {
    /// Mode index, `1..=s`.
    pub n: usize,
    /// Wave number `n pi / (s+1)`.
    pub theta: f64,
    /// Phase frequency `cos(theta)`: the mode's amplitude carries
    /// `exp(i t cos theta)`, matching the chain eigenvalue `-cos(theta)`.
    pub energy: f64,
}

/// `sin(pi * num / den)` with the argument reduced exactly in integers.
pub(crate) fn sin_pi_frac(num: usize, den: usize) -> f64 {
    debug_assert!(den > 0);
    let m = num % (2 * den);
    let (m, sign) = if m >= den { (m - den, -1.0) } else { (m, 1.0) };
    let m = m.min(den - m);
    sign * (std::f64::consts::PI * m as f64 / den as f64).sin()
}

/// `cos(pi * num / den)` with the argument reduced exactly in integers.
pub(crate) fn cos_pi_frac(num: usize, den: usize) -> f64 {
    debug_assert!(den > 0);
    let m = num % (2 * den);
    let m = if m > den { 2 * den - m } else { m };
    if 2 * m == den {
        return 0.0;
    }
    let (m, sign) = if 2 * m > den { (den - m, -1.0) } else { (m, 1.0) };
    sign * (std::f64::consts::PI * m as f64 / den as f64).cos()
}

/// Wave number of mode `n` on a chain of `s` sites.
pub fn theta(n: usize, s: usize) -> Result<f64> {
    if s < 1 {
        return Err(Error::InvalidChainLength { s });
    }
    if n < 1 || n > s {
        return Err(Error::InvalidModeIndex { n, s });
    }
    Ok(n as f64 * std::f64::consts::PI / (s + 1) as f64)
}

/// All `s` modes of a chain of `s` sites, in index order.
pub fn modes(s: usize) -> Result<Vec<ChainMode>> {
    if s < 1 {
        return Err(Error::InvalidChainLength { s });
    }
    Ok((1..=s)
        .map(|n| ChainMode {
            n,
            theta: n as f64 * std::f64::consts::PI / (s + 1) as f64,
            energy: cos_pi_frac(n, s + 1),
        })
        .collect())
}

/// Amplitude on site `k` at time `t` for an excitation started on site 1.
pub fn closed_form_amplitude(t: f64, k: usize, s: usize) -> Result<Complex64> {
    if s < 1 {
        return Err(Error::InvalidChainLength { s });
    }
    if k < 1 || k > s {
        return Err(Error::InvalidSiteIndex { k, s });
    }
    let den = s + 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=s {
        let phase = Complex64::from_polar(1.0, t * cos_pi_frac(n, den));
        acc += phase * (sin_pi_frac(n, den) * sin_pi_frac(k * n, den));
    }
    Ok(acc * (2.0 / den as f64))
}

/// Amplitudes on all sites at time `t`, index `k-1` holding site `k`.
pub fn amplitude_profile(t: f64, s: usize) -> Result<DVector<Complex64>> {
    if s < 1 {
        return Err(Error::InvalidChainLength { s });
    }
    let den = s + 1;
    let mut profile = DVector::from_element(s, Complex64::new(0.0, 0.0));
    for n in 1..=s {
        let weight = Complex64::from_polar(1.0, t * cos_pi_frac(n, den)) * sin_pi_frac(n, den);
        for k in 1..=s {
            profile[k - 1] += weight * sin_pi_frac(k * n, den);
        }
    }
    profile *= Complex64::new(2.0 / den as f64, 0.0);
    Ok(profile)
}
