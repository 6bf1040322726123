//! Vertex waiting-time laws of the time-changed walk.
//!
//! A vertex of degree `d` holds the walker for a time `T` with
//! `P(T > t) = E_α(-d t^α)`. The SOE forms below use the raw quadrature
//! weights, since survival is a scalar Laplace integral against `M_α`.

use crate::error::{check_alpha, Error, Result};
use crate::soe::SoeScheme;
use crate::special::{gamma, ml_unchecked};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitingLaw {
    pub alpha: f64,
    pub degree: f64,
}

impl WaitingLaw {
    pub fn new(alpha: f64, degree: usize) -> Result<Self> {
        check_alpha(alpha, true)?;
        if degree == 0 {
            return Err(Error::param("waiting-time law needs degree >= 1"));
        }
        Ok(Self {
            alpha,
            degree: degree as f64,
        })
    }
}

/// Which clock sits inside the SOE exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeForm {
    /// `e^{-d t^α b_j}`, consistent with the exact survival.
    #[default]
    Fractional,
    /// `e^{-d t b_j}`, the subordination-in-time reading.
    Linear,
}

impl TimeForm {
    fn clock(self, alpha: f64, t: f64) -> f64 {
        match self {
            TimeForm::Fractional => t.powf(alpha),
            TimeForm::Linear => t,
        }
    }

    /// `d/dt` of the clock.
    fn clock_rate(self, alpha: f64, t: f64) -> f64 {
        match self {
            TimeForm::Fractional => alpha * t.powf(alpha - 1.0),
            TimeForm::Linear => 1.0,
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("t = {t} must be finite and non-negative")))
    }
}

fn check_match(scheme: &SoeScheme, law: &WaitingLaw) -> Result<()> {
    if scheme.alpha == law.alpha {
        Ok(())
    } else {
        Err(Error::param(format!(
            "scheme order {} does not match law order {}",
            scheme.alpha, law.alpha
        )))
    }
}

pub fn survival_exact(law: &WaitingLaw, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(ml_unchecked(law.alpha, -law.degree * t.powf(law.alpha)))
}

/// `(Σ w_j e^{-d τ b_j}, Σ w_j b_j e^{-d τ b_j})` for clock value `τ`.
fn raw_sums(scheme: &SoeScheme, d: f64, tau: f64) -> (f64, f64) {
    scheme
        .raw_weights
        .iter()
        .zip(&scheme.nodes)
        .fold((0.0, 0.0), |(s0, s1), (w, b)| {
            let e = w * (-d * tau * b).exp();
            (s0 + e, s1 + b * e)
        })
}

pub fn survival_soe(scheme: &SoeScheme, law: &WaitingLaw, t: f64, form: TimeForm) -> Result<f64> {
    check_match(scheme, law)?;
    check_time(t)?;
    Ok(raw_sums(scheme, law.degree, form.clock(law.alpha, t)).0)
}

/// `f(t) = -dS/dt`; in the linear form this is `d Σ w_j b_j e^{-d t b_j}`.
pub fn pdf_soe(scheme: &SoeScheme, law: &WaitingLaw, t: f64, form: TimeForm) -> Result<f64> {
    check_match(scheme, law)?;
    check_time(t)?;
    let (_, s1) = raw_sums(scheme, law.degree, form.clock(law.alpha, t));
    Ok(law.degree * form.clock_rate(law.alpha, t) * s1)
}

/// `h(t) = f(t)/S(t)`; decreasing in `t` for any positive mixture.
pub fn hazard_soe(scheme: &SoeScheme, law: &WaitingLaw, t: f64, form: TimeForm) -> Result<f64> {
    check_match(scheme, law)?;
    check_time(t)?;
    let (s0, s1) = raw_sums(scheme, law.degree, form.clock(law.alpha, t));
    Ok(law.degree * form.clock_rate(law.alpha, t) * s1 / s0)
}

/// `S(t) d Γ(1-α) t^α`, which tends to 1 along the heavy tail.
pub fn survival_tail_check(law: &WaitingLaw, t_big: f64) -> Result<f64> {
    if law.alpha >= 1.0 {
        return Err(Error::param("the power-law tail needs alpha < 1"));
    }
    let s = survival_exact(law, t_big)?;
    Ok(s * law.degree * gamma(1.0 - law.alpha) * t_big.powf(law.alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_validation() {
        assert!(WaitingLaw::new(0.5, 0).is_err());
        assert!(WaitingLaw::new(0.0, 1).is_err());
        assert!(WaitingLaw::new(1.0, 3).is_ok());
    }

    #[test]
    fn survival_at_zero() {
        let law = WaitingLaw::new(0.4, 2).unwrap();
        assert_eq!(survival_exact(&law, 0.0).unwrap(), 1.0);
        let s = SoeScheme::certified(0.4, 1e-10, 50).unwrap();
        let v = survival_soe(&s, &law, 0.0, TimeForm::Fractional).unwrap();
        assert!((v - s.mass_win).abs() < 1e-15);
    }

    #[test]
    fn mismatched_orders() {
        let law = WaitingLaw::new(0.4, 2).unwrap();
        let s = SoeScheme::certified(0.5, 1e-10, 20).unwrap();
        assert!(survival_soe(&s, &law, 1.0, TimeForm::Fractional).is_err());
    }

    #[test]
    fn alpha_one_has_no_power_tail() {
        let law = WaitingLaw::new(1.0, 1).unwrap();
        assert!(survival_tail_check(&law, 10.0).is_err());
    }
}
