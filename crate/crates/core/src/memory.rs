//! Odibat splitting of the Caputo derivative into remote, late-past,
//! early-past and present blocks, plus memory-bias and convexity diagnostics.
//!
//! On the grid `t_j = j h`, `h = t/k` with `k` odd, the trapezoidal product
//! rule reads `c Σ_j w_{k-j} x'(t_j)` with `c = h^{1-α}/Γ(3-α)` and second
//! differences `w_m = (m+1)^{2-α} - 2m^{2-α} + (m-1)^{2-α}`.

use nalgebra::DVector;

use crate::error::{check_alpha, Error, Result};
use crate::fractional::fde_time_derivative;
use crate::special::gamma;
use crate::spectral::SpectralLaplacian;

const BIAS_TOL: f64 = 1e-12;
const MIN_DIFF_TIME: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryDecomposition {
    pub alpha: f64,
    pub t: f64,
    pub k: usize,
    pub h: f64,
    pub r: f64,
    pub lr: f64,
    pub lp: f64,
    pub p: f64,
}

impl MemoryDecomposition {
    pub fn total(&self) -> f64 {
        self.r + self.lr + self.lp + self.p
    }
}

fn check_grid(t: f64, k: usize) -> Result<()> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::param(format!("k = {k} must be odd and at least 3")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param(format!("t = {t} must be positive")));
    }
    Ok(())
}

fn pow_diff2(m: f64, e: f64) -> f64 {
    (m + 1.0).powf(e) - 2.0 * m.powf(e) + (m - 1.0).powf(e)
}

pub fn caputo_decompose<F: Fn(f64) -> f64>(alpha: f64, t: f64, k: usize, deriv: F) -> Result<MemoryDecomposition> {
    check_alpha(alpha, false)?;
    check_grid(t, k)?;
    let h = t / k as f64;
    let e = 2.0 - alpha;
    let c = h.powf(1.0 - alpha) / gamma(3.0 - alpha);
    let kf = k as f64;
    let half = (k - 1) / 2;
    let block = |js: std::ops::RangeInclusive<usize>| -> f64 {
        js.map(|j| pow_diff2((k - j) as f64, e) * deriv(j as f64 * h))
            .sum::<f64>()
    };
    Ok(MemoryDecomposition {
        alpha,
        t,
        k,
        h,
        r: c * ((kf - 1.0).powf(e) - (kf + alpha - 2.0) * kf.powf(1.0 - alpha)) * deriv(0.0),
        lr: c * block(1..=half),
        lp: c * block(half + 1..=k - 1),
        p: c * deriv(t),
    })
}

/// The same four blocks in the `α → 0` limit.
pub fn limit_alpha0<F: Fn(f64) -> f64>(t: f64, k: usize, deriv: F) -> Result<MemoryDecomposition> {
    check_grid(t, k)?;
    let h = t / k as f64;
    let half = (k - 1) / 2;
    let sum = |js: std::ops::RangeInclusive<usize>| js.map(|j| deriv(j as f64 * h)).sum::<f64>();
    Ok(MemoryDecomposition {
        alpha: 0.0,
        t,
        k,
        h,
        r: 0.5 * h * deriv(0.0),
        lr: h * sum(1..=half),
        lp: h * sum(half + 1..=k - 1),
        p: 0.5 * h * deriv(t),
    })
}

/// Piecewise-linear (L1) Caputo derivative at the last sample of a uniform
/// grid with spacing `h`.
pub fn caputo_l1(alpha: f64, samples: &[f64], h: f64) -> Result<f64> {
    check_alpha(alpha, false)?;
    if samples.len() < 2 || !(h > 0.0) {
        return Err(Error::param("need at least two samples and h > 0"));
    }
    let k = samples.len() - 1;
    let e = 1.0 - alpha;
    let acc: f64 = (0..k)
        .map(|j| {
            let b = (j as f64 + 1.0).powf(e) - (j as f64).powf(e);
            b * (samples[k - j] - samples[k - j - 1])
        })
        .sum();
    Ok(acc * h.powf(-alpha) / gamma(2.0 - alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bias {
    Remote,
    Recent,
    Neutral,
}

impl std::fmt::Display for Bias {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Bias::Remote => "remote",
            Bias::Recent => "recent",
            Bias::Neutral => "neutral",
        })
    }
}

pub fn classify(lr: f64, lp: f64) -> Bias {
    let tol = BIAS_TOL * lr.abs().max(lp.abs()).max(1.0);
    if lr > lp + tol {
        Bias::Remote
    } else if lr < lp - tol {
        Bias::Recent
    } else {
        Bias::Neutral
    }
}

/// Late past against early past on `[0, t]`, in the `α → 0` form.
pub fn memory_bias<F: Fn(f64) -> f64>(t: f64, k: usize, deriv: F) -> Result<Bias> {
    let m = limit_alpha0(t, k, deriv)?;
    Ok(classify(m.lr, m.lp))
}

/// `(R + LR, LP + P)` in the `α → 0` form.
pub fn past_present_split<F: Fn(f64) -> f64>(t: f64, k: usize, deriv: F) -> Result<(f64, f64)> {
    let m = limit_alpha0(t, k, deriv)?;
    Ok((m.r + m.lr, m.lp + m.p))
}

/// Bias of one trajectory on `[t1, t2]` and on `[t3, t4]`.
pub fn two_window_bias<F: Fn(f64) -> f64>(windows: [(f64, f64); 2], k: usize, deriv: F) -> Result<(Bias, Bias)> {
    let one = |(a, b): (f64, f64)| -> Result<Bias> {
        if !(b > a) {
            return Err(Error::param(format!("window [{a}, {b}] is empty")));
        }
        memory_bias(b - a, k, |s| deriv(a + s))
    };
    Ok((one(windows[0])?, one(windows[1])?))
}

/// Bias of two trajectories on the same window `[0, t]`.
pub fn two_vertex_bias<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(
    t: f64,
    k: usize,
    deriv_i: F,
    deriv_j: G,
) -> Result<(Bias, Bias)> {
    Ok((memory_bias(t, k, deriv_i)?, memory_bias(t, k, deriv_j)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Neighbor,
}

#[derive(Debug, Clone, Copy)]
pub struct ConvexityRecord {
    pub t: f64,
    pub vertex: usize,
    pub role: Role,
    pub d1: f64,
    pub d2: f64,
}

impl ConvexityRecord {
    /// Sign pattern predicted at small times.
    pub fn matches_prediction(&self) -> bool {
        match self.role {
            Role::Source => self.d1 < 0.0 && self.d2 > 0.0,
            Role::Neighbor => self.d1 > 0.0 && self.d2 < 0.0,
        }
    }
}

/// First and second time derivatives of `u(t) = E_α(-t^α L) e_source` at
/// the source and its neighbours. The second derivative is a Richardson
/// corrected central difference of the analytic first derivative.
pub fn convexity_profile(
    alpha: f64,
    spec: &SpectralLaplacian,
    source: usize,
    t_grid: &[f64],
) -> Result<Vec<ConvexityRecord>> {
    let n = spec.n();
    if source >= n {
        return Err(Error::param(format!("vertex {source} out of range for n = {n}")));
    }
    let neighbors: Vec<usize> = (0..n)
        .filter(|&v| v != source && spec.laplacian[(source, v)] < 0.0)
        .collect();
    let mut u0 = DVector::zeros(n);
    u0[source] = 1.0;
    let d1 = |t: f64| fde_time_derivative(alpha, t, spec, &u0);
    let mut out = Vec::new();
    for &t in t_grid {
        if !(t >= MIN_DIFF_TIME) {
            return Err(Error::param(format!(
                "t = {t} is below {MIN_DIFF_TIME}, too small for stable differencing"
            )));
        }
        let h = 1e-4 * t;
        let central = |h: f64| -> Result<DVector<f64>> { Ok((d1(t + h)? - d1(t - h)?) / (2.0 * h)) };
        let d2 = (central(0.5 * h)? * 4.0 - central(h)?) / 3.0;
        let first = d1(t)?;
        let mut push = |v: usize, role: Role| {
            out.push(ConvexityRecord {
                t,
                vertex: v,
                role,
                d1: first[v],
                d2: d2[v],
            })
        };
        push(source, Role::Source);
        for &v in &neighbors {
            push(v, Role::Neighbor);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_k_rejected() {
        assert!(caputo_decompose(0.5, 1.0, 4, |_| 1.0).is_err());
        assert!(caputo_decompose(0.5, 1.0, 1, |_| 1.0).is_err());
        assert!(limit_alpha0(1.0, 6, |_| 1.0).is_err());
    }

    #[test]
    fn constant_derivative_limit() {
        let t = 1.0;
        let m = limit_alpha0(t, 5, |_| 1.0).unwrap();
        let h = t / 5.0;
        assert!((m.r - h / 2.0).abs() < 1e-15);
        assert!((m.lr - 2.0 * h).abs() < 1e-15);
        assert!((m.lp - 2.0 * h).abs() < 1e-15);
        assert!((m.total() - t).abs() < 1e-15);
    }

    #[test]
    fn neutral_band() {
        assert_eq!(classify(1.0, 1.0 + 1e-14), Bias::Neutral);
        assert_eq!(classify(1.0, 0.9), Bias::Remote);
        assert_eq!(classify(0.9, 1.0), Bias::Recent);
    }
}
