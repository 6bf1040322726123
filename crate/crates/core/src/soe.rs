//! Sum-of-exponentials (SOE) approximation of the Mittag-Leffler operator.
//!
//! The subordination integral `E_α(-t^α λ) = ∫ M_α(θ) e^{-θ t^α λ} dθ` is
//! truncated to a window `[θ_min, θ_max]` and discretized by the trapezoidal
//! rule in `y = ln θ`. Nodes and weights never depend on `t` or on `L`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_alpha, Error, Result};
use crate::fractional::{heat_operator, ml_operator, solve_fde, OperatorSnapshot};
use crate::par;
use crate::special::{gamma, ml_unchecked, mwright_unchecked, tail_constants};
use crate::spectral::SpectralLaplacian;

pub const DEFAULT_EPSILON: f64 = 1e-12;
pub const DEFAULT_GRID: usize = 2000;
pub const DEFAULT_PROBES: usize = 8;
pub const POWER_ITERS: usize = 200;
pub const POWER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowMode {
    /// Controls every mode, including the zero eigenvalue.
    General,
    /// Controls only `λ ≥ λ2` on the mean-zero subspace, for all `t ≥ t_min`.
    MeanZero { lambda2: f64, t_min: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub theta_min: f64,
    pub theta_max: f64,
    pub epsilon: f64,
    pub mode: WindowMode,
}

impl Window {
    pub fn y_min(&self) -> f64 {
        self.theta_min.ln()
    }

    pub fn y_max(&self) -> f64 {
        self.theta_max.ln()
    }

    /// A window given directly by its endpoints.
    pub fn explicit(theta_min: f64, theta_max: f64) -> Result<Self> {
        if !(theta_min > 0.0 && theta_max > theta_min && theta_max.is_finite()) {
            return Err(Error::param(format!(
                "window [{theta_min}, {theta_max}] must satisfy 0 < min < max < inf"
            )));
        }
        Ok(Self {
            theta_min,
            theta_max,
            epsilon: f64::NAN,
            mode: WindowMode::General,
        })
    }
}

pub fn select_window(alpha: f64, epsilon: f64, mode: WindowMode) -> Result<Window> {
    check_alpha(alpha, false)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    let theta_min = 0.5 * epsilon * gamma(1.0 - alpha);
    let log_term = (2.0 / epsilon).ln();
    let theta_max = match mode {
        WindowMode::General => {
            let tc = tail_constants(alpha)?;
            (log_term / tc.c_alpha).powf(1.0 / tc.q_alpha)
        }
        WindowMode::MeanZero { lambda2, t_min } => {
            if !(lambda2 > 0.0 && t_min > 0.0) {
                return Err(Error::param("mean-zero window needs lambda2 > 0 and t_min > 0"));
            }
            log_term / (t_min * lambda2)
        }
    };
    if theta_max <= theta_min {
        return Err(Error::param(format!(
            "degenerate window: theta_max {theta_max} <= theta_min {theta_min}"
        )));
    }
    Ok(Window {
        theta_min,
        theta_max,
        epsilon,
        mode,
    })
}

/// Smallest `C` with `M_α(θ) ≤ C θ^{p} exp(-c_α θ^{q_α})` on the sampled
/// tail, where `p = (α - 1/2)/(1 - α)` is the sharp prefactor power.
pub fn tail_envelope_constant(alpha: f64) -> Result<f64> {
    let tc = tail_constants(alpha)?;
    let p = (alpha - 0.5) / (1.0 - alpha);
    let lo = (1.0 / tc.c_alpha).powf(1.0 / tc.q_alpha).max(1.0);
    let hi = (700.0 / tc.c_alpha).powf(1.0 / tc.q_alpha);
    let steps = 400;
    let mut worst: f64 = 0.0;
    for i in 0..=steps {
        let th = lo * (hi / lo).powf(i as f64 / steps as f64);
        let env = th.powf(p) * (-tc.c_alpha * th.powf(tc.q_alpha)).exp();
        if env > 0.0 {
            worst = worst.max(mwright_unchecked(alpha, th) / env);
        }
    }
    Ok(worst * (1.0 + 1e-6))
}

/// Analytic bounds `(T_L, T_R)` on the two truncated tails of the
/// subordination integral at spectral value `λ`.
pub fn tail_bounds(alpha: f64, window: &Window, t: f64, lambda: f64) -> Result<(f64, f64)> {
    check_alpha(alpha, false)?;
    let g = gamma(1.0 - alpha);
    let x = t.powf(alpha) * lambda;
    let left = if x > 0.0 {
        -(-x * window.theta_min).exp_m1() / x / g
    } else {
        window.theta_min / g
    };
    let tc = tail_constants(alpha)?;
    let p = (alpha - 0.5) / (1.0 - alpha);
    let big_c = tail_envelope_constant(alpha)?;
    let th = window.theta_max;
    let mass_tail =
        (big_c / (tc.q_alpha * tc.c_alpha) * th.powf(p + 1.0 - tc.q_alpha) * (-tc.c_alpha * th.powf(tc.q_alpha)).exp())
            .min(1.0);
    let right = mass_tail * (-x * th).exp();
    Ok((left, right))
}

#[derive(Debug, Clone)]
pub struct SoeScheme {
    pub alpha: f64,
    pub window: Window,
    pub j: usize,
    pub h_y: f64,
    pub nodes: Vec<f64>,
    pub raw_weights: Vec<f64>,
    pub weights: Vec<f64>,
    pub mass_win: f64,
}

/// Log-trapezoidal nodes `b_j = e^{y_j}` and weights `w_j = h M_α(b_j) b_j`.
///
/// `J = 1` puts the single node at `θ_min` with the whole window as its step.
pub fn build_soe(alpha: f64, j: usize, window: &Window) -> Result<SoeScheme> {
    check_alpha(alpha, false)?;
    if j == 0 {
        return Err(Error::param("J must be at least 1"));
    }
    let (y0, y1) = (window.y_min(), window.y_max());
    let h_y = if j == 1 { y1 - y0 } else { (y1 - y0) / (j - 1) as f64 };
    let nodes: Vec<f64> = (0..j).map(|k| (y0 + k as f64 * h_y).exp()).collect();
    let raw_weights = par::map(&nodes, |&b| h_y * mwright_unchecked(alpha, b) * b);
    let mass_win: f64 = raw_weights.iter().sum();
    if !(mass_win > 0.0) {
        return Err(Error::param("window carries no M-Wright mass"));
    }
    let weights = raw_weights.iter().map(|w| w / mass_win).collect();
    Ok(SoeScheme {
        alpha,
        window: *window,
        j,
        h_y,
        nodes,
        raw_weights,
        weights,
        mass_win,
    })
}

impl SoeScheme {
    /// Convenience: certified general window at `epsilon` plus `J` nodes.
    pub fn certified(alpha: f64, epsilon: f64, j: usize) -> Result<Self> {
        let w = select_window(alpha, epsilon, WindowMode::General)?;
        build_soe(alpha, j, &w)
    }

    /// Index pairs `(a_j, b_j)` sorted by weight, largest first.
    pub fn largest(&self, count: usize) -> Vec<(f64, f64)> {
        let mut idx: Vec<usize> = (0..self.j).collect();
        idx.sort_by(|&a, &b| self.weights[b].total_cmp(&self.weights[a]));
        idx.into_iter()
            .take(count)
            .map(|i| (self.weights[i], self.nodes[i]))
            .collect()
    }
}

/// `Σ a_j e^{-b_j t^α λ}`.
pub fn soe_scalar(scheme: &SoeScheme, t: f64, lambda: f64) -> f64 {
    let x = t.powf(scheme.alpha) * lambda;
    scheme
        .weights
        .iter()
        .zip(&scheme.nodes)
        .map(|(a, b)| a * (-b * x).exp())
        .sum()
}

pub fn soe_operator(scheme: &SoeScheme, t: f64, spec: &SpectralLaplacian) -> Result<OperatorSnapshot> {
    if !(t >= 0.0) {
        return Err(Error::param(format!("t = {t} must be non-negative")));
    }
    let vals: Vec<f64> = spec.eigenvalues().iter().map(|&l| soe_scalar(scheme, t, l)).collect();
    Ok(OperatorSnapshot {
        alpha: scheme.alpha,
        t,
        matrix: spec.eig.with_values(&vals),
    })
}

/// Literal superposition `Σ a_j e^{-t^α b_j L}` of heat operators; slower
/// than [`soe_operator`] and kept as its cross-check.
pub fn soe_operator_superposed(scheme: &SoeScheme, t: f64, spec: &SpectralLaplacian) -> Result<DMatrix<f64>> {
    let ta = t.powf(scheme.alpha);
    let n = spec.n();
    let mut acc = DMatrix::zeros(n, n);
    for (a, b) in scheme.weights.iter().zip(&scheme.nodes) {
        acc += heat_operator(ta * b, spec)?.matrix * *a;
    }
    Ok(acc)
}

/// Uniform grid on `[0, λ_max]` merged with any supplied eigenvalues.
pub fn spectral_grid(lambda_max: f64, grid_size: usize, extra: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = if grid_size <= 1 {
        vec![0.0]
    } else {
        (0..grid_size)
            .map(|i| lambda_max * i as f64 / (grid_size - 1) as f64)
            .collect()
    };
    g.extend_from_slice(extra);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Exact `E_α(-t^α λ)` on every grid point.
pub fn exact_on_grid(alpha: f64, t: f64, grid: &[f64]) -> Vec<f64> {
    let ta = t.powf(alpha);
    par::map(grid, |&l| ml_unchecked(alpha, -ta * l))
}

/// `max |E_α - SOE|` given precomputed exact values on `grid`.
pub fn scalar_error_on(scheme: &SoeScheme, t: f64, grid: &[f64], exact: &[f64]) -> f64 {
    grid.iter()
        .zip(exact)
        .map(|(&l, &e)| (e - soe_scalar(scheme, t, l)).abs())
        .fold(0.0, f64::max)
}

pub fn scalar_error(scheme: &SoeScheme, t: f64, lambda_max: f64, grid_size: usize, eigenvalues: &[f64]) -> f64 {
    let grid = spectral_grid(lambda_max, grid_size, eigenvalues);
    let exact = exact_on_grid(scheme.alpha, t, &grid);
    scalar_error_on(scheme, t, &grid, &exact)
}

/// Standard-normal probe vectors scaled to unit norm.
pub fn random_probes(n: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v = DVector::from_iterator(n, (0..n).map(|_| -> f64 { StandardNormal.sample(&mut rng) }));
            let norm = v.norm();
            v / norm
        })
        .collect()
}

/// `(relerr, masserr)` of the SOE propagation of `u0` against the exact one.
pub fn probe_errors(scheme: &SoeScheme, t: f64, spec: &SpectralLaplacian, u0: &DVector<f64>) -> Result<(f64, f64)> {
    let exact = solve_fde(scheme.alpha, t, spec, u0)?;
    let vals: Vec<f64> = spec.eigenvalues().iter().map(|&l| soe_scalar(scheme, t, l)).collect();
    let approx = spec.eig.apply_values(&vals, u0);
    let en = exact.norm();
    let rel = if en > 0.0 { (&exact - &approx).norm() / en } else { 0.0 };
    let mass = (exact.sum() - approx.sum()).abs();
    Ok((rel, mass))
}

#[derive(Debug, Clone, Copy)]
pub struct PowerEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Spectral norm of a symmetric matrix by power iteration from a
/// fixed-seed start vector.
pub fn power_norm(m: &DMatrix<f64>, iters: usize, tol: f64, seed: u64) -> PowerEstimate {
    let n = m.nrows();
    let mut v = random_probes(n, 1, seed).remove(0);
    let mut est = 0.0;
    for k in 1..=iters {
        let w = m * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return PowerEstimate {
                value: 0.0,
                iterations: k,
                converged: true,
            };
        }
        let done = (norm - est).abs() <= tol * norm;
        est = norm;
        v = w / norm;
        if done {
            return PowerEstimate {
                value: est,
                iterations: k,
                converged: true,
            };
        }
    }
    PowerEstimate {
        value: est,
        iterations: iters,
        converged: false,
    }
}

/// `‖E_α(-t^α L) - F_J(t, L)‖₂` estimated on the assembled difference matrix.
pub fn operator_error(
    scheme: &SoeScheme,
    t: f64,
    spec: &SpectralLaplacian,
    iters: usize,
    tol: f64,
) -> Result<PowerEstimate> {
    let exact = ml_operator(scheme.alpha, t, spec)?.matrix;
    let approx = soe_operator(scheme, t, spec)?.matrix;
    Ok(power_norm(&(exact - approx), iters, tol, 0x5eed))
}

/// `t_j = (b_j / b_p)^{1/α} t` with `b_p = max_j b_j`.
pub fn effective_times(scheme: &SoeScheme, t: f64) -> Vec<f64> {
    let bp = scheme.nodes.iter().copied().fold(f64::MIN, f64::max);
    scheme
        .nodes
        .iter()
        .map(|b| (b / bp).powf(1.0 / scheme.alpha) * t)
        .collect()
}

/// Fastest rate among the `count` heaviest terms. Reading a scheme as one
/// diffusion sampled at past instants only makes sense for terms that carry
/// weight; the extreme window nodes carry almost none.
pub fn dominant_rate(scheme: &SoeScheme, count: usize) -> f64 {
    scheme
        .largest(count)
        .into_iter()
        .map(|(_, b)| b)
        .fold(f64::MIN, f64::max)
}
