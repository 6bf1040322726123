//! Heat semigroup and Mittag-Leffler propagators through the cached
//! eigendecomposition of the Laplacian.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_alpha, Error, Result};
use crate::par;
use crate::special::{mittag_leffler_two, ml_unchecked};
use crate::spectral::SpectralLaplacian;

#[derive(Debug, Clone)]
pub struct OperatorSnapshot {
    pub alpha: f64,
    pub t: f64,
    pub matrix: DMatrix<f64>,
}

fn check_time(t: f64, name: &str) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} = {t} must be finite and non-negative")))
    }
}

fn check_len(spec: &SpectralLaplacian, u0: &DVector<f64>) -> Result<()> {
    if u0.len() == spec.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: u0.len(),
        })
    }
}

/// `E_α(-t^α λ_k)` for every eigenvalue.
pub fn ml_mode_values(alpha: f64, t: f64, spec: &SpectralLaplacian) -> Vec<f64> {
    let ta = t.powf(alpha);
    let lams: Vec<f64> = spec.eigenvalues().iter().copied().collect();
    par::map(&lams, |&l| ml_unchecked(alpha, -ta * l))
}

pub fn heat_operator(s: f64, spec: &SpectralLaplacian) -> Result<OperatorSnapshot> {
    check_time(s, "s")?;
    Ok(OperatorSnapshot {
        alpha: 1.0,
        t: s,
        matrix: spec.map(|l| (-s * l).exp()),
    })
}

pub fn ml_operator(alpha: f64, t: f64, spec: &SpectralLaplacian) -> Result<OperatorSnapshot> {
    check_alpha(alpha, true)?;
    check_time(t, "t")?;
    if alpha == 1.0 {
        return heat_operator(t, spec);
    }
    let vals = ml_mode_values(alpha, t, spec);
    Ok(OperatorSnapshot {
        alpha,
        t,
        matrix: spec.eig.with_values(&vals),
    })
}

/// `u(t) = E_α(-t^α L) u0`.
pub fn solve_fde(alpha: f64, t: f64, spec: &SpectralLaplacian, u0: &DVector<f64>) -> Result<DVector<f64>> {
    check_alpha(alpha, true)?;
    check_time(t, "t")?;
    check_len(spec, u0)?;
    let vals = ml_mode_values(alpha, t, spec);
    Ok(spec.eig.apply_values(&vals, u0))
}

/// Per-mode `d/dt E_α(-t^α λ) = -λ t^{α-1} E_{α,α}(-t^α λ)`.
pub fn ml_mode_derivatives(alpha: f64, t: f64, spec: &SpectralLaplacian) -> Result<Vec<f64>> {
    check_alpha(alpha, true)?;
    check_time(t, "t")?;
    if t == 0.0 && alpha < 1.0 {
        return Err(Error::SingularDerivative);
    }
    let lams: Vec<f64> = spec.eigenvalues().iter().copied().collect();
    if alpha == 1.0 {
        return Ok(lams.iter().map(|&l| -l * (-t * l).exp()).collect());
    }
    let ta = t.powf(alpha);
    let scale = t.powf(alpha - 1.0);
    par::map(&lams, |&l| {
        if l == 0.0 {
            Ok(0.0)
        } else {
            mittag_leffler_two(alpha, alpha, -ta * l).map(|e| -l * scale * e)
        }
    })
    .into_iter()
    .collect()
}

pub fn fde_time_derivative(alpha: f64, t: f64, spec: &SpectralLaplacian, u0: &DVector<f64>) -> Result<DVector<f64>> {
    check_len(spec, u0)?;
    let vals = ml_mode_derivatives(alpha, t, spec)?;
    Ok(spec.eig.apply_values(&vals, u0))
}
