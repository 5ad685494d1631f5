//! Shared test oracle: dense matrix exponential by scaling and squaring.
//!
//! Deliberately independent of the propagator's eigendecomposition route,
//! so the two can check each other.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(-i t H) psi` for Hermitian `h`, via a Taylor series on the scaled
/// matrix followed by repeated squaring.
pub fn evolve_expm(h: &DMatrix<Complex64>, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
    let dim = h.nrows();
    assert_eq!(dim, h.ncols());
    assert_eq!(dim, psi.len());
    let generator = h.map(|v| v * Complex64::new(0.0, -t));
    let scale_power = inf_norm(&generator).max(1e-300).log2().ceil().max(0.0) as i32 + 1;
    let scaled = generator / Complex64::new(2f64.powi(scale_power), 0.0);

    let identity: DMatrix<Complex64> = DMatrix::identity(dim, dim);
    let mut term = identity.clone();
    let mut sum = identity;
    for order in 1..=40u32 {
        term = (&term * &scaled) / Complex64::new(f64::from(order), 0.0);
        sum += &term;
        if inf_norm(&term) < 1e-20 {
            break;
        }
    }
    let mut propagator = sum;
    for _ in 0..scale_power {
        propagator = &propagator * &propagator;
    }
    &propagator * psi
}

#[allow(dead_code)]
pub fn max_abs_diff(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
