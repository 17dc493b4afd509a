use std::time::Instant;

use rayon::prelude::*;

use super::linalg::{condition_estimate, DenseMatrix, LuFactors};
use super::{BoundaryProfile, CrackParams, SolveReport, Timings, MIN_SOLVER_NODES};
use crate::error::{Error, Result};
use crate::greens::{green_dss_unchecked, green_row_integral};
use crate::hilbert::{kernel_hilbert_part, node, spacing, GridFunction};
use crate::quadrature::trapezoid_weights;

/// Tunables for [`solve_nystrom_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Strong residual (relative to `|gamma|`) above which a report is flagged.
    pub residual_tol: f64,
    /// Residual is measured on `|x| < residual_window`.
    pub residual_window: f64,
    /// Condition estimate above which a warning is attached.
    pub condition_limit: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-3,
            residual_window: 0.9,
            condition_limit: 1e12,
        }
    }
}

/// Discretised Fredholm system `A f = r`.
#[derive(Debug, Clone)]
pub struct FredholmSystem {
    pub params: CrackParams,
    pub n: usize,
    pub nodes: Vec<f64>,
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
}

/// Full kernel `-alpha G_ss(x, s) + (1/pi) p.v. int G_tau(x, tau) / (s - tau) dtau`.
fn kernel(alpha: f64, x: f64, s: f64) -> f64 {
    -alpha * green_dss_unchecked(x, s) + kernel_hilbert_part(x, s)
}

/// Builds `A = beta I + K W` and `r_i = gamma (1 - x_i^2)^2 / 24`.
pub fn assemble_fredholm(params: &CrackParams, n: usize) -> Result<FredholmSystem> {
    params.validate()?;
    if n < MIN_SOLVER_NODES || n % 2 == 0 {
        return Err(Error::Resolution {
            n,
            min: MIN_SOLVER_NODES,
        });
    }
    let nodes: Vec<f64> = (0..n).map(|i| node(n, i)).collect();
    let w = trapezoid_weights(n, spacing(n));
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let x = nodes[i];
        for (j, a) in row.iter_mut().enumerate() {
            *a = w[j] * kernel(params.alpha, x, nodes[j]);
        }
        row[i] += params.beta;
    });
    let rhs = nodes.iter().map(|&x| params.gamma * green_row_integral(x)).collect();
    Ok(FredholmSystem {
        params: *params,
        n,
        nodes,
        matrix: DenseMatrix::from_rows(n, data),
        rhs,
    })
}

/// Nyström solve with default options.
pub fn solve_nystrom(params: &CrackParams, n: usize) -> Result<SolveReport> {
    solve_nystrom_with(params, n, &SolveOptions::default())
}

pub fn solve_nystrom_with(params: &CrackParams, n: usize, opts: &SolveOptions) -> Result<SolveReport> {
    let t0 = Instant::now();
    let system = assemble_fredholm(params, n)?;
    let t1 = Instant::now();
    let lu = LuFactors::factor(&system.matrix)?;
    let mut values = lu.solve(&system.rhs);
    let cond = condition_estimate(&system.matrix, &lu);
    let t2 = Instant::now();

    let mut warnings = Vec::new();
    if !cond.is_finite() || cond > opts.condition_limit {
        let msg = format!("condition estimate {cond:.3e} exceeds {:.1e}", opts.condition_limit);
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let tip_values = [values[0], values[n - 1]];
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if tip_values.iter().any(|t| t.abs() > 1e-10 * scale.max(1.0)) {
        let msg = format!("tip values {tip_values:?} are not negligible");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    values[0] = 0.0;
    values[n - 1] = 0.0;
    let f = GridFunction::new(values)?;
    let profile = BoundaryProfile::from_grid(f, params, Some(cond));

    let strong = profile.strong_residual_max(opts.residual_window);
    let weak = profile.weak_residual_max();
    let flagged = !(strong <= opts.residual_tol);
    if flagged {
        let msg = format!(
            "strong residual {strong:.3e} on |x| < {} exceeds {:.1e}",
            opts.residual_window, opts.residual_tol
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let report = SolveReport {
        max_f: profile.max_abs(),
        max_df: profile.max_abs_slope(),
        tip_slopes: profile.tip_slopes(),
        tip_values,
        energy: profile.energy(),
        strong_residual_max: strong,
        weak_residual_max: weak,
        timings: Timings {
            assembly: (t1 - t0).as_secs_f64(),
            solve: (t2 - t1).as_secs_f64(),
            diagnostics: t2.elapsed().as_secs_f64(),
        },
        convergence: Vec::new(),
        warnings,
        flagged,
        profile,
    };
    Ok(report)
}
