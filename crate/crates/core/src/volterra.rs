//! Laplace-domain memory kernels, resolvent identities and the multiplex
//! (supra-Laplacian) reading of a sum of exponentials.
//!
//! Frequencies are real and positive throughout.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_alpha, Error, Result};
use crate::spectral::{SpectralLaplacian, SymEig};

/// Largest condition number accepted when inverting a symbol.
pub const MAX_CONDITION: f64 = 1e12;
pub const MAX_VANDERMONDE: usize = 8;
pub const DEFAULT_FREQUENCIES: [f64; 5] = [0.1, 0.5, 1.0, 5.0, 10.0];

#[derive(Debug, Clone)]
pub struct LaplaceSymbol {
    pub s: f64,
    pub matrix: DMatrix<f64>,
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("frequency s = {s} must be positive")))
    }
}

fn check_coeffs(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::param("need at least one SOE term"));
    }
    Ok(())
}

/// Per-mode fractional resolvent `s^{α-1}/(s^α + λ)`.
pub fn fractional_mode(alpha: f64, s: f64, lambda: f64) -> f64 {
    s.powf(alpha - 1.0) / (s.powf(alpha) + lambda)
}

/// Per-mode SOE resolvent `Σ a_j/(s + b_j λ)`.
pub fn soe_mode(a: &[f64], b: &[f64], s: f64, lambda: f64) -> f64 {
    a.iter().zip(b).map(|(a, b)| a / (s + b * lambda)).sum()
}

/// `s^{α-1}(s^α I + L)^{-1}`.
pub fn g_hat_fractional(alpha: f64, s: f64, spec: &SpectralLaplacian) -> Result<LaplaceSymbol> {
    check_alpha(alpha, true)?;
    check_s(s)?;
    Ok(LaplaceSymbol {
        s,
        matrix: spec.map(|l| fractional_mode(alpha, s, l)),
    })
}

/// `Σ a_j (sI + b_j L)^{-1}`.
pub fn g_hat_soe(a: &[f64], b: &[f64], s: f64, spec: &SpectralLaplacian) -> Result<LaplaceSymbol> {
    check_coeffs(a, b)?;
    check_s(s)?;
    Ok(LaplaceSymbol {
        s,
        matrix: spec.map(|l| soe_mode(a, b, s, l)),
    })
}

/// Moore-Penrose inverse of `L` from its clamped spectrum.
pub fn laplacian_pinv(spec: &SpectralLaplacian) -> DMatrix<f64> {
    spec.map(|l| if l > 0.0 { 1.0 / l } else { 0.0 })
}

/// `I - 𝟙𝟙ᵀ/n`.
pub fn mean_zero_projector(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64)
}

/// Spectral norm of a symmetric matrix.
pub fn sym_norm(m: &DMatrix<f64>) -> f64 {
    SymEig::new(m).eigenvalues.amax()
}

/// Spectral norm of a general square matrix.
pub fn op_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

/// Memory symbol `K̂ = (Ĝ^{-1} - sI) L†` for any resolvent `Ĝ`.
///
/// Returns the symbol and the 2-norm condition number of `Ĝ`.
pub fn k_hat_from(g: &LaplaceSymbol, spec: &SpectralLaplacian) -> Result<(LaplaceSymbol, f64)> {
    let n = spec.n();
    if g.matrix.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.matrix.nrows(),
        });
    }
    let ev = SymEig::new(&g.matrix).eigenvalues;
    let (lo, hi) = (ev.iter().fold(f64::INFINITY, |m, x| m.min(x.abs())), ev.amax());
    let cond = hi / lo;
    if !(cond <= MAX_CONDITION) {
        return Err(Error::Conditioning(format!("resolvent condition number {cond:.3e}")));
    }
    let inv = g
        .matrix
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Conditioning("resolvent is singular".into()))?;
    let shifted = inv - DMatrix::identity(n, n) * g.s;
    Ok((
        LaplaceSymbol {
            s: g.s,
            matrix: shifted * laplacian_pinv(spec),
        },
        cond,
    ))
}

pub fn k_hat_soe(a: &[f64], b: &[f64], s: f64, spec: &SpectralLaplacian) -> Result<(LaplaceSymbol, f64)> {
    k_hat_from(&g_hat_soe(a, b, s, spec)?, spec)
}

/// `‖P((sI + K̂L)^{-1} - Ĝ)P‖₂` on the mean-zero subspace.
pub fn resolvent_identity_residual(g: &LaplaceSymbol, k: &LaplaceSymbol, spec: &SpectralLaplacian) -> Result<f64> {
    let n = spec.n();
    let m = DMatrix::identity(n, n) * g.s + &k.matrix * &spec.laplacian;
    let inv = m
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Conditioning("sI + KL is singular".into()))?;
    let p = mean_zero_projector(n);
    Ok(op_norm(&(&p * (inv - &g.matrix) * &p)))
}

/// `‖Ĝ^{(J)}(s) - Ĝ_S(s)‖₂`.
pub fn resolvent_gap(alpha: f64, a: &[f64], b: &[f64], s: f64, spec: &SpectralLaplacian) -> Result<f64> {
    let gj = g_hat_soe(a, b, s, spec)?;
    let gs = g_hat_fractional(alpha, s, spec)?;
    Ok(sym_norm(&(gj.matrix - gs.matrix)))
}

/// `|(s + s^{1-α}λ) û - 1|` with `û = s^{α-1}/(s^α + λ)`.
pub fn caputo_volterra_check(alpha: f64, lambda: f64, s: f64) -> Result<f64> {
    check_alpha(alpha, true)?;
    check_s(s)?;
    let u = fractional_mode(alpha, s, lambda);
    Ok(((s + s.powf(1.0 - alpha) * lambda) * u - 1.0).abs())
}

/// `(lhs, rhs)` of `‖B⁻¹ - A⁻¹‖ ≤ M²/(1 - δM) ‖B - A‖` with `M = ‖A⁻¹‖`,
/// `δ = ‖B - A‖`; `None` when `δM ≥ 1` and the bound says nothing.
pub fn inverse_stability(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Option<(f64, f64)>> {
    let inv = |m: &DMatrix<f64>| {
        m.clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Conditioning("matrix is singular".into()))
    };
    let (ai, bi) = (inv(a)?, inv(b)?);
    let m = op_norm(&ai);
    let delta = op_norm(&(b - a));
    if delta * m >= 1.0 {
        return Ok(None);
    }
    Ok(Some((op_norm(&(bi - ai)), m * m / (1.0 - delta * m) * delta)))
}

fn check_distinct(betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(Error::param("need at least one rate"));
    }
    if let Some(b) = betas.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
        return Err(Error::param(format!("rate {b} must be positive")));
    }
    for (i, x) in betas.iter().enumerate() {
        if betas[i + 1..].contains(x) {
            return Err(Error::param(format!("rate {x} is repeated")));
        }
    }
    Ok(())
}

/// Coefficients `c_k` of `∏_m (D + r_m) = Σ c_k D^k`, lowest degree first.
fn factor_polynomial(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k] += r * ck;
            next[k + 1] += ck;
        }
        c = next;
    }
    c
}

/// Relative size of `∏_m (d/dt + β_m λ) y(t)` for `y = Σ γ_j e^{-β_j λ t}`.
pub fn multiplicative_residual(betas: &[f64], gammas: &[f64], lambda: f64, t: f64) -> Result<f64> {
    check_distinct(betas)?;
    if gammas.len() != betas.len() {
        return Err(Error::DimensionMismatch {
            expected: betas.len(),
            got: gammas.len(),
        });
    }
    let roots: Vec<f64> = betas.iter().map(|b| b * lambda).collect();
    let c = factor_polynomial(&roots);
    let value: f64 = roots
        .iter()
        .zip(gammas)
        .map(|(&r, &g)| {
            // D^k e^{-rt} = (-r)^k e^{-rt}
            let p = c.iter().rev().fold(0.0, |acc, &ck| acc * -r + ck);
            g * p * (-r * t).exp()
        })
        .sum();
    let rmax = roots.iter().fold(0.0f64, |m, &r| m.max(r));
    let rmin = roots.iter().fold(f64::INFINITY, |m, &r| m.min(r));
    let scale = gammas.iter().map(|g| g.abs()).sum::<f64>() * rmax.powi(betas.len() as i32) * (-rmin * t).exp();
    Ok(if scale > 0.0 { value.abs() / scale } else { value.abs() })
}

/// `y^{(k)}(0) = Σ_j (-β_j λ)^k ψ_j` for `k = 0..J-1`.
pub fn initial_derivatives(betas: &[f64], psi: &[f64], lambda: f64) -> Vec<f64> {
    (0..betas.len())
        .map(|k| {
            betas
                .iter()
                .zip(psi)
                .map(|(b, p)| (-b * lambda).powi(k as i32) * p)
                .sum()
        })
        .collect()
}

/// Recovers `ψ` from initial derivative data by an LU solve (partial
/// pivoting) of the Vandermonde system.
pub fn recover_psi(betas: &[f64], lambda: f64, data: &[f64]) -> Result<Vec<f64>> {
    check_distinct(betas)?;
    let j = betas.len();
    if j > MAX_VANDERMONDE {
        return Err(Error::param(format!(
            "Vandermonde recovery is capped at {MAX_VANDERMONDE} rates, got {j}"
        )));
    }
    if data.len() != j {
        return Err(Error::DimensionMismatch {
            expected: j,
            got: data.len(),
        });
    }
    if lambda <= 0.0 {
        return Err(Error::param("mode must have lambda > 0"));
    }
    let v = DMatrix::from_fn(j, j, |k, m| (-betas[m] * lambda).powi(k as i32));
    let rhs = DVector::from_column_slice(data);
    v.lu()
        .solve(&rhs)
        .map(|x| x.iter().copied().collect())
        .ok_or_else(|| Error::Conditioning("Vandermonde system is singular".into()))
}

#[derive(Debug, Clone)]
pub struct SupraLaplacian {
    pub layers: usize,
    pub n: usize,
    pub betas: Vec<f64>,
    pub omega: f64,
    pub matrix: DMatrix<f64>,
}

/// `⊕ β_j L + ω (𝟙𝟙ᵀ - I) ⊗ I`, layer-major indexing `layer * n + vertex`.
pub fn build_supra_laplacian(spec: &SpectralLaplacian, betas: &[f64], omega: f64) -> Result<SupraLaplacian> {
    if betas.is_empty() {
        return Err(Error::param("need at least one layer"));
    }
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::param(format!("coupling omega = {omega} must be non-negative")));
    }
    let (layers, n) = (betas.len(), spec.n());
    let mut m = DMatrix::zeros(layers * n, layers * n);
    for (p, &b) in betas.iter().enumerate() {
        m.view_mut((p * n, p * n), (n, n)).copy_from(&(&spec.laplacian * b));
        for q in (0..layers).filter(|&q| q != p) {
            for v in 0..n {
                m[(p * n + v, q * n + v)] = omega;
            }
        }
    }
    Ok(SupraLaplacian {
        layers,
        n,
        betas: betas.to_vec(),
        omega,
        matrix: m,
    })
}

#[derive(Debug, Clone)]
pub struct MultiplexState {
    pub layers: Vec<DVector<f64>>,
    pub aggregate: DVector<f64>,
}

/// `u(t) = e^{-t𝔏}(γ ⊗ φ)` and its per-vertex sum over layers.
pub fn multiplex_diffuse(supra: &SupraLaplacian, gammas: &[f64], phi: &DVector<f64>, t: f64) -> Result<MultiplexState> {
    if gammas.len() != supra.layers {
        return Err(Error::DimensionMismatch {
            expected: supra.layers,
            got: gammas.len(),
        });
    }
    if phi.len() != supra.n {
        return Err(Error::DimensionMismatch {
            expected: supra.n,
            got: phi.len(),
        });
    }
    let n = supra.n;
    let mut u0 = DVector::zeros(supra.layers * n);
    for (p, &g) in gammas.iter().enumerate() {
        u0.rows_mut(p * n, n).copy_from(&(phi * g));
    }
    let eig = SymEig::new(&supra.matrix);
    let vals: Vec<f64> = eig.eigenvalues.iter().map(|&l| (-t * l).exp()).collect();
    let u = eig.apply_values(&vals, &u0);
    let layers: Vec<DVector<f64>> = (0..supra.layers).map(|p| u.rows(p * n, n).into_owned()).collect();
    let aggregate = layers.iter().fold(DVector::zeros(n), |acc, x| acc + x);
    Ok(MultiplexState { layers, aggregate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::spectral::laplacian;

    #[test]
    fn polynomial_expansion() {
        // (D + 1)(D + 2) = D^2 + 3D + 2
        assert_eq!(factor_polynomial(&[1.0, 2.0]), vec![2.0, 3.0, 1.0]);
    }

    #[test]
    fn repeated_rates_rejected() {
        assert!(multiplicative_residual(&[1.0, 1.0], &[1.0, 1.0], 1.0, 0.5).is_err());
        assert!(recover_psi(&[1.0; 9], 1.0, &[0.0; 9]).is_err());
    }

    #[test]
    fn single_vertex_two_layers() {
        let spec = laplacian(&Graph::new(1, []).unwrap()).unwrap();
        let s = build_supra_laplacian(&spec, &[1.0, 2.0], 0.3).unwrap();
        assert_eq!(s.matrix, DMatrix::from_row_slice(2, 2, &[0.0, 0.3, 0.3, 0.0]));
    }

    #[test]
    fn edgeless_resolvent() {
        let spec = laplacian(&Graph::new(3, []).unwrap()).unwrap();
        let g = g_hat_fractional(0.4, 2.0, &spec).unwrap();
        assert!((g.matrix - DMatrix::identity(3, 3) * 0.5).amax() < 1e-15);
    }
}
