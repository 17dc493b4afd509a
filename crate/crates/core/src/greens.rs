//! Clamped two-point Green function of `d^4/dx^4` on [-1, 1].
//!
//! `G(x, tau)` satisfies `G_xxxx = delta(x - tau)` with `G = G_x = 0` at
//! `x = ±1`. It is symmetric, `C^2` on the square, and its third derivative
//! jumps by one across the diagonal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadrature::GaussRule;

/// Green function value and first two partials at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenEval {
    pub x: f64,
    pub tau: f64,
    pub g: f64,
    pub g_x: f64,
    pub g_xx: f64,
    pub g_tau: f64,
    pub g_tautau: f64,
}

fn check(name: &'static str, value: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}

/// Evaluates `G` and its partials. On the diagonal the `tau <= x` branch is used.
pub fn green_eval(x: f64, tau: f64) -> Result<GreenEval> {
    check("x", x)?;
    check("tau", tau)?;
    Ok(green_eval_unchecked(x, tau))
}

pub(crate) fn green_eval_unchecked(x: f64, t: f64) -> GreenEval {
    let (g, g_x, g_xx, g_tau, g_tautau) = if t <= x {
        let xm = x - 1.0;
        let tp = t + 1.0;
        (
            xm * xm * tp * tp * (1.0 + 2.0 * x - 2.0 * t - x * t) / 24.0,
            -tp * tp * xm * (t * x + t - 2.0 * x) / 8.0,
            -tp * tp * (t * x - 2.0 * x + 1.0) / 4.0,
            -tp * xm * xm * (t * x + 2.0 * t - x) / 8.0,
            -xm * xm * (t * x + 2.0 * t + 1.0) / 4.0,
        )
    } else {
        let xp = x + 1.0;
        let tm = t - 1.0;
        (
            tm * tm * xp * xp * (1.0 + 2.0 * t - 2.0 * x - x * t) / 24.0,
            -tm * tm * xp * (t * x - t + 2.0 * x) / 8.0,
            -tm * tm * (t * x + 2.0 * x + 1.0) / 4.0,
            -tm * xp * xp * (t * x - 2.0 * t + x) / 8.0,
            -xp * xp * (t * x - 2.0 * t + 1.0) / 4.0,
        )
    };
    GreenEval {
        x,
        tau: t,
        g,
        g_x,
        g_xx,
        g_tau,
        g_tautau,
    }
}

/// `G(x, tau)`.
pub fn green(x: f64, tau: f64) -> Result<f64> {
    green_eval(x, tau).map(|e| e.g)
}

pub(crate) fn green_dss_unchecked(x: f64, s: f64) -> f64 {
    if s <= x {
        -0.25 * (x - 1.0).powi(2) * (2.0 * s + x * s + 1.0)
    } else {
        -0.25 * (x + 1.0).powi(2) * (-2.0 * s + x * s + 1.0)
    }
}

/// `G_ss(x, s)`, the second derivative in the second argument.
pub fn green_dss(x: f64, s: f64) -> Result<f64> {
    check("x", x)?;
    check("s", s)?;
    Ok(green_dss_unchecked(x, s))
}

/// `int_{-1}^{1} G(x, tau) dtau = (1 - x^2)^2 / 24`.
pub fn green_row_integral(x: f64) -> f64 {
    let q = 1.0 - x * x;
    q * q / 24.0
}

/// Residual `|int G_tautau(x, tau) f''(tau) dtau - f(x)|` of the reproducing
/// identity for a polynomial profile that vanishes with its slope at ±1.
///
/// Uses 64-point Gauss–Legendre on each side of the kink at `tau = x`.
pub fn green_identity_check(f: &Poly, x: f64) -> Result<f64> {
    check("x", x)?;
    debug_assert!(f.eval(1.0).abs() < 1e-12 && f.eval(-1.0).abs() < 1e-12);
    let f2 = f.nth_derivative(2);
    let integral = GaussRule::g64().integrate_pieces(&[-1.0, x, 1.0], |t| {
        green_eval_unchecked(x, t).g_tautau * f2.eval(t)
    });
    Ok((integral - f.eval(x)).abs())
}
