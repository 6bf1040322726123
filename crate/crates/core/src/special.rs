//! Scalar special functions on the negative real axis.
//!
//! Mittag-Leffler values for small arguments come from the power series;
//! everywhere else they come from the spectral (Bernstein) integral written
//! in a log variable so that neither `x^{1/α}` nor the weights overflow.

use std::f64::consts::PI;

use crate::error::{check_alpha, Error, Result};
use crate::quad::{integrate, QuadOptions};

const SERIES_CAP: usize = 500;
const SERIES_X_MAX: f64 = 2.0;

/// Constants of the stretched-exponential right tail of the M-Wright density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailConstants {
    pub alpha: f64,
    pub c_alpha: f64,
    pub q_alpha: f64,
    pub p_alpha: f64,
}

pub fn tail_constants(alpha: f64) -> Result<TailConstants> {
    check_alpha(alpha, false)?;
    let one_m = 1.0 - alpha;
    Ok(TailConstants {
        alpha,
        c_alpha: one_m * alpha.powf(alpha / one_m),
        q_alpha: 1.0 / one_m,
        p_alpha: (alpha - 2.0) / (2.0 * one_m),
    })
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `1/Γ(x)`, exactly zero at the poles `x = 0, -1, -2, ...`.
pub fn gamma_recip(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 171.0 {
        let (lg, _) = libm::lgamma_r(x);
        return (-lg).exp();
    }
    1.0 / libm::tgamma(x)
}

/// Sign and log-magnitude of the series term `x^k / Γ(αk+β)` for `x > 0`.
fn series_term_ln(x: f64, k: usize, alpha: f64, beta: f64) -> (f64, f64) {
    let arg = alpha * k as f64 + beta;
    let (lg, sign) = libm::lgamma_r(arg);
    (k as f64 * x.ln() - lg, sign as f64)
}

/// Sums `Σ (-x)^k / Γ(αk+β)`. Returns `None` when the series either does not
/// settle within the term cap or cancels too heavily to trust.
fn ml_series(alpha: f64, beta: f64, x: f64) -> Option<f64> {
    let mut sum = gamma_recip(beta);
    let mut max_term = sum.abs();
    let mut comp = 0.0;
    for k in 1..SERIES_CAP {
        let (ln_mag, sign) = series_term_ln(x, k, alpha, beta);
        let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = parity * sign * ln_mag.exp();
        // Kahan summation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        max_term = max_term.max(term.abs());
        if term.abs() < 1e-17 * sum.abs() && k as f64 * alpha > 2.0 {
            return (max_term <= 100.0 * sum.abs()).then_some(sum);
        }
    }
    None
}

fn ml_quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 4000,
    }
}

/// Breakpoints for the log-variable spectral integrals: the resonance of the
/// kernel at `e^{αw} = x`, the scale of `exp(-e^w)`, and its cut-off.
fn ml_breaks(alpha: f64, x: f64) -> Vec<f64> {
    let w_peak = x.ln() / alpha;
    let w_hi = 745f64.ln();
    let w_lo = w_peak.min(0.0) - 46.0 / alpha;
    let mut pts = vec![w_lo, 0.0, w_hi];
    if w_peak > w_lo && w_peak < w_hi {
        pts.push(w_peak);
        // the resonance narrows like sin(απ) as α → 1
        let width = (PI * alpha).sin().max(1e-6) / alpha;
        for d in [-width, width] {
            let p = w_peak + d;
            if p > w_lo && p < w_hi {
                pts.push(p);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Two-parameter integral for `β ≤ 1`, `0 < α < 1`, `x > 0`:
/// `E_{α,β}(-x) = (1/π) ∫ e^{w(1-β+α)} e^{-e^w}
///   [e^{αw} sin(π(1-β)) + x sin(π(1-β+α))] / (e^{2αw} + 2x e^{αw} cos απ + x²) dw`.
fn ml_integral(alpha: f64, beta: f64, x: f64) -> f64 {
    let s1 = (PI * (1.0 - beta)).sin();
    let s2 = (PI * (1.0 - beta + alpha)).sin();
    let ca = (PI * alpha).cos();
    let f = |w: f64| {
        let ew = w.exp();
        if ew > 745.0 {
            return 0.0;
        }
        // scale by x to keep the rational factor O(1)
        let v = (alpha * w).exp() / x;
        let num = v * s1 + s2;
        let den = x * (v * v + 2.0 * v * ca + 1.0);
        (w * (1.0 - beta + alpha) - ew).exp() * num / den
    };
    let pts = ml_breaks(alpha, x);
    integrate(f, &pts, ml_quad_opts()).value / PI
}

/// `E_{1,β}(-x)` for `β > 1` via `(1/Γ(β)) ∫_0^1 exp(-x (1 - u^{1/(β-1)})) du`.
fn ml_alpha_one(beta: f64, x: f64) -> f64 {
    if beta == 1.0 {
        return (-x).exp();
    }
    if beta < 1.0 {
        return gamma_recip(beta) - x * ml_alpha_one(beta + 1.0, x);
    }
    let p = 1.0 / (beta - 1.0);
    let f = |u: f64| (-x * (1.0 - u.powf(p))).exp();
    // the integrand is concentrated near u = 1 for large x
    let mut pts = vec![0.0];
    let mut edge = 1.0 - 1.0 / (1.0 + x);
    while edge > 1e-3 && pts.len() < 40 {
        pts.push(edge);
        edge = 1.0 - (1.0 - edge) * 8.0;
        if edge <= *pts.last().unwrap_or(&0.0) {
            break;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.retain(|&p| p < 1.0);
    pts.push(1.0);
    gamma_recip(beta) * integrate(f, &pts, ml_quad_opts()).value
}

/// One-parameter Mittag-Leffler function `E_α(x)` for `x ≤ 0`.
pub fn mittag_leffler(alpha: f64, x: f64) -> Result<f64> {
    mittag_leffler_two(alpha, 1.0, x)
}

/// Two-parameter Mittag-Leffler function `E_{α,β}(x) = Σ x^k / Γ(αk+β)` for `x ≤ 0`.
pub fn mittag_leffler_two(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_alpha(alpha, true)?;
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::param(format!("beta = {beta} must be positive")));
    }
    if !(x <= 0.0) {
        return Err(Error::param(format!(
            "Mittag-Leffler argument {x} must be non-positive"
        )));
    }
    let x = -x;
    if x == 0.0 {
        return Ok(gamma_recip(beta));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if alpha == 1.0 {
        return Ok(ml_alpha_one(beta, x));
    }
    Ok(ml_neg(alpha, beta, x))
}

fn ml_neg(alpha: f64, beta: f64, x: f64) -> f64 {
    if x <= SERIES_X_MAX {
        if let Some(v) = ml_series(alpha, beta, x) {
            return v;
        }
    }
    if beta <= 1.0 {
        return ml_integral(alpha, beta, x);
    }
    // E_{α,β}(-x) = (1/Γ(β-α) - E_{α,β-α}(-x)) / x
    (gamma_recip(beta - alpha) - ml_neg(alpha, beta - alpha, x)) / x
}

/// Unchecked fast path used in hot loops once parameters are validated.
pub(crate) fn ml_unchecked(alpha: f64, x_nonpos: f64) -> f64 {
    let x = -x_nonpos;
    if x <= 0.0 {
        1.0
    } else if alpha == 1.0 {
        (-x).exp()
    } else if x.is_infinite() {
        0.0
    } else {
        ml_neg(alpha, 1.0, x)
    }
}

const MWRIGHT_SERIES_MAX: f64 = 1.0;

/// M-Wright (Mainardi) density `M_α(θ)` for `θ ≥ 0`.
pub fn mwright(alpha: f64, theta: f64) -> Result<f64> {
    check_alpha(alpha, false)?;
    if !(theta >= 0.0) {
        return Err(Error::param(format!("theta = {theta} must be non-negative")));
    }
    Ok(mwright_unchecked(alpha, theta))
}

pub(crate) fn mwright_unchecked(alpha: f64, theta: f64) -> f64 {
    if theta <= MWRIGHT_SERIES_MAX {
        mwright_series(alpha, theta)
    } else {
        mwright_integral(alpha, theta)
    }
}

/// `Σ_k (-θ)^k / (k! Γ(1 - α(k+1)))`, using the reflection formula
/// `1/Γ(1-z) = Γ(z) sin(πz)/π` so that only positive gamma arguments appear.
pub fn mwright_series(alpha: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        return gamma_recip(1.0 - alpha);
    }
    let ln_theta = theta.ln();
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..SERIES_CAP {
        let z = alpha * (k as f64 + 1.0);
        let s = (PI * z).sin();
        let ln_mag = k as f64 * ln_theta + libm::lgamma(z) - libm::lgamma(k as f64 + 1.0);
        let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = parity * s * ln_mag.exp() / PI;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if k > 2 && ln_mag.exp() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum.max(0.0)
}

/// `ln A(φ)` for the Zolotarev kernel
/// `A(φ) = [sin αφ / sin φ]^{1/(1-α)} sin((1-α)φ) / sin αφ`.
fn zolotarev_ln_a(alpha: f64, phi: f64) -> f64 {
    let one_m = 1.0 - alpha;
    let sa = (alpha * phi).sin();
    ((sa.ln() - phi.sin().ln()) / one_m) + (one_m * phi).sin().ln() - sa.ln()
}

/// Zolotarev integral:
/// `M_α(θ) = θ^{α/(1-α)} / (π(1-α)) ∫_0^π A(φ) exp(-θ^{1/(1-α)} A(φ)) dφ`.
pub fn mwright_integral(alpha: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        return gamma_recip(1.0 - alpha);
    }
    let one_m = 1.0 - alpha;
    let ln_theta = theta.ln();
    let big_x = (ln_theta / one_m).exp();
    let c = one_m * alpha.powf(alpha / one_m);
    if big_x * c > 745.0 {
        return 0.0;
    }
    let ln_pref = alpha / one_m * ln_theta - (PI * one_m).ln();
    let f = |phi: f64| {
        let ln_a = zolotarev_ln_a(alpha, phi);
        let a = ln_a.exp();
        if !a.is_finite() || big_x * a > 745.0 + ln_a.max(0.0) {
            return 0.0;
        }
        (ln_pref + ln_a - big_x * a).exp()
    };
    let mut pts = vec![0.0, PI];
    let floor = 0.01 / (big_x * c).sqrt();
    let mut p = PI / 2.0;
    while p > floor {
        pts.push(p);
        p *= 0.5;
    }
    pts.sort_by(f64::total_cmp);
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_intervals: 2000,
    };
    integrate(f, &pts, opts).value.max(0.0)
}

/// Leading-order asymptotic `A θ^{(α-1/2)/(1-α)} exp(-c_α θ^{q_α})` with
/// `A = (2π(1-α))^{-1/2} α^{(2α-1)/(2(1-α))}`.
pub fn mwright_asymptotic(alpha: f64, theta: f64) -> f64 {
    let one_m = 1.0 - alpha;
    let c = one_m * alpha.powf(alpha / one_m);
    let amp = (2.0 * PI * one_m).powf(-0.5) * alpha.powf((2.0 * alpha - 1.0) / (2.0 * one_m));
    amp * theta.powf((alpha - 0.5) / one_m) * (-c * theta.powf(1.0 / one_m)).exp()
}
