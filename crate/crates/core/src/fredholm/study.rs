use serde::Serialize;

use super::{solve_nystrom, BoundaryProfile, CrackParams, SolveReport};
use crate::error::{Error, Result};

/// One row of a grid-doubling study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub center_value: f64,
    /// `max |f_n - f_next|` on the shared nodes.
    pub diff_to_next: Option<f64>,
    /// `log2` of the ratio of successive differences.
    pub observed_order: Option<f64>,
}

/// One row of the tip-slope study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TipRow {
    pub beta: f64,
    /// `max |f'|` on `[0.9, 1]` at the requested grid.
    pub slope: f64,
    /// Same quantity after one grid doubling.
    pub slope_refined: f64,
    pub relative_change: f64,
}

/// `max |f'|` over nodes with `x >= from`.
pub fn tip_slope_max(profile: &BoundaryProfile, from: f64) -> f64 {
    profile
        .nodes()
        .iter()
        .zip(&profile.df)
        .filter(|(x, _)| **x >= from)
        .fold(0.0, |m, (_, d)| m.max(d.abs()))
}

fn check_doubling(ns: &[usize]) -> Result<()> {
    if ns.len() < 2 {
        return Err(Error::Grid("need at least two grid sizes".into()));
    }
    for w in ns.windows(2) {
        if w[1] != 2 * w[0] - 1 {
            return Err(Error::Grid(format!("{} does not refine {} by doubling", w[1], w[0])));
        }
    }
    Ok(())
}

fn table_from(reports: &[SolveReport]) -> Vec<ConvergenceRow> {
    let diffs: Vec<f64> = reports
        .windows(2)
        .map(|w| {
            let (c, f) = (w[0].profile.values(), w[1].profile.values());
            c.iter()
                .enumerate()
                .map(|(i, v)| (v - f[2 * i]).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    reports
        .iter()
        .enumerate()
        .map(|(k, r)| ConvergenceRow {
            n: r.profile.n,
            center_value: r.profile.values()[r.profile.n / 2],
            diff_to_next: diffs.get(k).copied(),
            observed_order: (k >= 1 && k < diffs.len()).then(|| (diffs[k - 1] / diffs[k]).log2()),
        })
        .collect()
}

/// Solves on each size in `ns` (successive doublings) and tabulates the
/// self-convergence of `f`.
pub fn convergence_study(params: &CrackParams, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    check_doubling(ns)?;
    let reports = ns
        .iter()
        .map(|&n| solve_nystrom(params, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(table_from(&reports))
}

/// Report at the finest size in `ns` with the convergence table attached.
pub fn solve_with_convergence(params: &CrackParams, ns: &[usize]) -> Result<SolveReport> {
    check_doubling(ns)?;
    let mut reports = ns
        .iter()
        .map(|&n| solve_nystrom(params, n))
        .collect::<Result<Vec<_>>>()?;
    let table = table_from(&reports);
    let mut finest = reports.pop().expect("at least two sizes");
    finest.convergence = table;
    Ok(finest)
}

/// Tip slope `max |f'|` on `[0.9, 1]` for `gamma = 1`, fixed `alpha` and a
/// decreasing `beta` sequence, at `n` and `2n - 1` nodes.
pub fn tip_behavior_study(alpha: f64, betas: &[f64], n: usize) -> Result<Vec<TipRow>> {
    for w in betas.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::Parameter {
                name: "beta",
                value: w[1],
                reason: "sequence must be strictly decreasing",
            });
        }
    }
    betas
        .iter()
        .map(|&beta| {
            let params = CrackParams::new(alpha, beta, 1.0)?;
            let slope = tip_slope_max(&solve_nystrom(&params, n)?.profile, 0.9);
            let slope_refined = tip_slope_max(&solve_nystrom(&params, 2 * n - 1)?.profile, 0.9);
            Ok(TipRow {
                beta,
                slope,
                slope_refined,
                relative_change: (slope_refined - slope).abs() / slope_refined.abs().max(f64::MIN_POSITIVE),
            })
        })
        .collect()
}
