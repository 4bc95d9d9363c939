//! p-exponent arithmetic: the conjugate pair (p, q), the odd power map φ_p,
//! and the constant π_p.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad;

/// A validated exponent p > 1 together with its conjugate q = p/(p−1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PExponent {
    p: f64,
    q: f64,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::Domain(format!("exponent p must be finite and > 1, got {p}")));
        }
        Ok(Self { p, q: p / (p - 1.0) })
    }

    pub fn p(self) -> f64 {
        self.p
    }

    /// Conjugate exponent, 1/p + 1/q = 1.
    pub fn q(self) -> f64 {
        self.q
    }
}

/// The odd power map φ_p(s) = |s|^{p−2}·s, extended by continuity with
/// φ_p(0) = 0 (also for p < 2, where the derivative blows up at 0 — callers
/// must not difference through the origin).
pub fn phi_p(s: f64, p: f64) -> f64 {
    if p == 2.0 {
        return s;
    }
    if s == 0.0 {
        return 0.0;
    }
    s.signum() * s.abs().powf(p - 1.0)
}

/// π_p = 2(p−1)^{1/p} ∫₀¹ (1−s^p)^{−1/p} ds, by tanh–sinh quadrature of the
/// defining integral (the integrand has an integrable singularity at s = 1).
/// Absolute accuracy ≤ 1e−10.
pub fn pi_p(p: f64) -> Result<f64> {
    let exps = PExponent::new(p)?;
    let p = exps.p();
    let integral = quad::tanh_sinh_01(
        &|_x, one_minus_x: f64| {
            // 1 − s^p = −expm1(p·ln1p(−δ)) with δ = 1 − s stays fully accurate
            // as δ → 0, where the direct form loses all precision.
            let one_minus_sp = -f64::exp_m1(p * f64::ln_1p(-one_minus_x));
            one_minus_sp.powf(-1.0 / p)
        },
        1e-13,
    )?;
    Ok(2.0 * (p - 1.0).powf(1.0 / p) * integral)
}
