//! Crack-opening solver.
//!
//! The opening profile `f` on [-1, 1] solves
//! `beta f'''' - alpha f'' + H f' = gamma` with `f = f' = 0` at the tips.
//! Inverting the fourth-order part with the clamped Green function turns this
//! into a Fredholm equation of the second kind, discretised here by the
//! Nyström method on the trapezoidal rule. A Galerkin minimiser of the
//! quadratic energy serves as an independent oracle.

mod galerkin;
pub mod linalg;
mod nystrom;
mod study;

use serde::Serialize;

use crate::diff;
use crate::error::{Error, Result};
use crate::hilbert::{hilbert_of_derivative, GridFunction};
use crate::poly::Poly;
use crate::quadrature::{trapezoid_weights, GaussRule};

pub use galerkin::{solve_galerkin_oracle, GalerkinSolution};
pub use nystrom::{assemble_fredholm, solve_nystrom, solve_nystrom_with, FredholmSystem, SolveOptions};
pub use study::{
    convergence_study, solve_with_convergence, tip_behavior_study, tip_slope_max, ConvergenceRow,
    TipRow,
};

/// Smallest Nyström grid accepted by the solver.
pub const MIN_SOLVER_NODES: usize = 33;

/// Number of polynomial test functions in the weak residual.
pub const WEAK_TEST_COUNT: usize = 10;

/// Dimensional material and loading data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalInputs {
    /// Bulk shear modulus.
    pub mu: f64,
    /// Surface shear modulus.
    pub mu_s: f64,
    pub zeta: f64,
    pub eta: f64,
    /// Crack half-length.
    pub ell: f64,
    /// Remote anti-plane shear stress.
    pub sigma: f64,
}

/// Dimensionless problem parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrackParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub physical: Option<PhysicalInputs>,
}

impl CrackParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            gamma,
            physical: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Parameter {
                name: "alpha",
                value: self.alpha,
                reason: "must be positive and finite",
            });
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Parameter {
                name: "beta",
                value: self.beta,
                reason: "must be positive and finite",
            });
        }
        if !self.gamma.is_finite() {
            return Err(Error::Parameter {
                name: "gamma",
                value: self.gamma,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Same material with the load multiplied by `c`.
    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self {
            gamma,
            physical: None,
            ..*self
        }
    }
}

/// `alpha = mu_s / (mu ell)`, `beta = (zeta + 2 eta) / (mu ell^3)`, `gamma = sigma / mu`.
pub fn nondimensionalize(p: &PhysicalInputs) -> Result<CrackParams> {
    if !(p.mu > 0.0) {
        return Err(Error::Parameter {
            name: "mu",
            value: p.mu,
            reason: "bulk shear modulus must be positive",
        });
    }
    if !(p.ell > 0.0) {
        return Err(Error::Parameter {
            name: "ell",
            value: p.ell,
            reason: "crack half-length must be positive",
        });
    }
    let mut params = CrackParams::new(
        p.mu_s / (p.mu * p.ell),
        (p.zeta + 2.0 * p.eta) / (p.mu * p.ell.powi(3)),
        p.sigma / p.mu,
    )?;
    params.physical = Some(*p);
    Ok(params)
}

/// A solved opening profile with derivative and residual diagnostics.
#[derive(Debug, Clone)]
pub struct BoundaryProfile {
    pub f: GridFunction,
    pub df: Vec<f64>,
    pub d2f: Vec<f64>,
    /// NaN at the two nodes next to each tip where no stencil fits. On fine
    /// grids the stencil spans every [`fourth_stride`]-th node.
    pub d4f: Vec<f64>,
    /// `H f'` at the nodes.
    pub hilbert: Vec<f64>,
    pub n: usize,
    /// 1-norm condition estimate of the Nyström matrix, when one was solved.
    pub condition: Option<f64>,
    /// `beta f'''' - alpha f'' + H f' - gamma`, NaN where `d4f` is.
    pub strong_residual: Vec<f64>,
    /// `int f (beta g'''' - alpha g'' + H g') - gamma int g` for `g_k = (1 - x^2)^2 x^k`.
    pub weak_residual: Vec<f64>,
    weak_scale: Vec<f64>,
    params: CrackParams,
}

/// Cells across [-1, 1] above which the `f''''` stencil is widened.
pub const FOURTH_STENCIL_CELLS: usize = 512;

/// Stride keeping the `f''''` stencil spacing at `2 / 512` or wider, where
/// double-precision roundoff in `f` stays far below solver error.
pub fn fourth_stride(n: usize) -> usize {
    ((n - 1) / FOURTH_STENCIL_CELLS).max(1)
}

fn weak_test_function(k: usize) -> Poly {
    Poly::bump(2).mul(&Poly::monomial(k))
}

impl BoundaryProfile {
    /// Computes all diagnostics of `f` for the problem `params`.
    pub fn from_grid(f: GridFunction, params: &CrackParams, condition: Option<f64>) -> Self {
        let n = f.len();
        let h = f.spacing();
        let nodes = f.nodes();
        let df = diff::first(f.values(), h);
        let d2f = diff::second(f.values(), h);
        let d4f = diff::fourth_strided(f.values(), h, fourth_stride(n));
        let hilbert = hilbert_of_derivative(&f);
        let (alpha, beta, gamma) = (params.alpha, params.beta, params.gamma);
        let strong_residual = (0..n)
            .map(|i| beta * d4f[i] - alpha * d2f[i] + hilbert[i] - gamma)
            .collect();

        let w = trapezoid_weights(n, h);
        let mut weak_residual = Vec::with_capacity(WEAK_TEST_COUNT);
        let mut weak_scale = Vec::with_capacity(WEAK_TEST_COUNT);
        for k in 0..WEAK_TEST_COUNT {
            let g = weak_test_function(k);
            let g4 = g.nth_derivative(4);
            let g2 = g.nth_derivative(2);
            let g1 = g.derivative();
            let lhs: f64 = nodes
                .iter()
                .zip(f.values())
                .zip(&w)
                .map(|((&x, &fx), &wx)| {
                    wx * fx * (beta * g4.eval(x) - alpha * g2.eval(x) + g1.hilbert_on_interval(x))
                })
                .sum();
            weak_residual.push(lhs - gamma * g.integral());
            let abs_g = GaussRule::g64().integrate(-1.0, 1.0, |x| g.eval(x).abs());
            weak_scale.push(gamma.abs() * abs_g);
        }

        Self {
            f,
            df,
            d2f,
            d4f,
            hilbert,
            n,
            condition,
            strong_residual,
            weak_residual,
            weak_scale,
            params: *params,
        }
    }

    pub fn params(&self) -> &CrackParams {
        &self.params
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.f.nodes()
    }

    pub fn values(&self) -> &[f64] {
        self.f.values()
    }

    /// Largest strong-form residual over nodes with `|x| < window`, divided
    /// by `|gamma|` (absolute when `gamma = 0`).
    pub fn strong_residual_max(&self, window: f64) -> f64 {
        let scale = if self.params.gamma == 0.0 { 1.0 } else { self.params.gamma.abs() };
        self.nodes()
            .iter()
            .zip(&self.strong_residual)
            .filter(|(x, r)| x.abs() < window && r.is_finite())
            .map(|(_, r)| r.abs() / scale)
            .fold(0.0, f64::max)
    }

    /// Largest weak residual relative to `|gamma| int |g_k|`.
    pub fn weak_residual_max(&self) -> f64 {
        self.weak_residual
            .iter()
            .zip(&self.weak_scale)
            .map(|(r, s)| if *s > 0.0 { r.abs() / s } else { r.abs() })
            .fold(0.0, f64::max)
    }

    /// `A_L[f] = 1/2 (beta int f''^2 + alpha int f'^2 + int f H f') - gamma int f`.
    pub fn energy(&self) -> f64 {
        let w = trapezoid_weights(self.n, self.f.spacing());
        let p = &self.params;
        let mut quad = 0.0;
        let mut load = 0.0;
        for i in 0..self.n {
            let fi = self.f.values()[i];
            quad += w[i]
                * (p.beta * self.d2f[i] * self.d2f[i] + p.alpha * self.df[i] * self.df[i] + fi * self.hilbert[i]);
            load += w[i] * fi;
        }
        0.5 * quad - p.gamma * load
    }

    pub fn max_abs(&self) -> f64 {
        self.f.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.df.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(f'(-1), f'(1))` from the one-sided stencils.
    pub fn tip_slopes(&self) -> [f64; 2] {
        [self.df[0], self.df[self.n - 1]]
    }
}

/// Wall-clock seconds spent in each solver phase.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Timings {
    pub assembly: f64,
    pub solve: f64,
    pub diagnostics: f64,
}

/// Everything a solve produces.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub profile: BoundaryProfile,
    pub max_f: f64,
    pub max_df: f64,
    pub tip_slopes: [f64; 2],
    /// Raw solution values at `x = -1, 1` before the support constraint is applied.
    pub tip_values: [f64; 2],
    pub energy: f64,
    pub strong_residual_max: f64,
    pub weak_residual_max: f64,
    pub timings: Timings,
    pub convergence: Vec<ConvergenceRow>,
    pub warnings: Vec<String>,
    /// Set when the strong residual exceeds the configured tolerance.
    pub flagged: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs() -> PhysicalInputs {
        PhysicalInputs {
            mu: 1.0,
            mu_s: 1.0,
            zeta: 1.0,
            eta: 0.0,
            ell: 1.0,
            sigma: 1.0,
        }
    }

    #[test]
    fn unit_inputs_give_unit_params() {
        let p = nondimensionalize(&inputs()).unwrap();
        assert_eq!((p.alpha, p.beta, p.gamma), (1.0, 1.0, 1.0));
        assert!(p.physical.is_some());
    }

    #[test]
    fn doubling_length_scales_alpha_and_beta() {
        let base = nondimensionalize(&inputs()).unwrap();
        let long = nondimensionalize(&PhysicalInputs { ell: 2.0, ..inputs() }).unwrap();
        assert_eq!(long.alpha, base.alpha / 2.0);
        assert_eq!(long.beta, base.beta / 8.0);
    }

    #[test]
    fn bending_pair_combines() {
        let p = nondimensionalize(&PhysicalInputs {
            zeta: 2.0,
            eta: 1.5,
            ..inputs()
        })
        .unwrap();
        assert_eq!(p.beta, 5.0);
    }

    #[test]
    fn nonpositive_mu_or_ell_rejected() {
        assert!(nondimensionalize(&PhysicalInputs { mu: 0.0, ..inputs() }).is_err());
        assert!(nondimensionalize(&PhysicalInputs { ell: -1.0, ..inputs() }).is_err());
        assert!(CrackParams::new(0.0, 1.0, 1.0).is_err());
        assert!(CrackParams::new(1.0, -1.0, 1.0).is_err());
        assert!(CrackParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn limit_profile_has_small_residuals_for_dominant_bending() {
        // f = gamma/(24 beta) (1-x^2)^2 solves beta f'''' = gamma exactly;
        // the remaining terms are O(1/beta).
        let params = CrackParams::new(1.0, 1e6, 1e6).unwrap();
        let f = GridFunction::from_fn(257, |x| (1.0 - x * x).powi(2) / 24.0).unwrap();
        let prof = BoundaryProfile::from_grid(f, &params, None);
        assert!(prof.strong_residual_max(0.9) < 1e-5);
        assert!(prof.weak_residual_max() < 1e-4, "{}", prof.weak_residual_max());
        assert!(prof.strong_residual[0].is_nan());
    }
}
