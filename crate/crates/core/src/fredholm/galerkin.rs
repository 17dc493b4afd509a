//! Ritz–Galerkin minimiser of the quadratic opening energy over C¹ cubic
//! Hermite elements on a uniform mesh of [-1, 1].
//!
//! The nonlocal term `int g H f'` is translation invariant, so its Gram
//! matrix only depends on node offsets. It is tabulated once per shape-function
//! pair from the Fourier symbol `2 pi |xi|` applied to finely sampled, heavily
//! zero-padded shape functions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::{BoundaryProfile, CrackParams};
use crate::error::{Error, Result};
use crate::hilbert::{node, GridFunction, MIN_NODES};
use crate::quadrature::GaussRule;

/// Smallest admissible element count.
pub const MIN_ELEMENTS: usize = 8;

// Fine samples per element for the spectral Gram table.
const SAMPLES_PER_ELEMENT: usize = 32;
// Fine grid period, in units of the support length 2.
const PAD: usize = 256;

/// Minimiser sampled on a Nyström grid, plus the raw Ritz data.
#[derive(Debug, Clone)]
pub struct GalerkinSolution {
    pub profile: BoundaryProfile,
    pub elements: usize,
    /// Interior node values and slopes, interleaved.
    pub coefficients: Vec<f64>,
    /// Discrete energy `1/2 c^T K c - c^T F` at the minimiser.
    pub energy: f64,
}

/// Hermite shape functions and derivatives on `[0, h]` at local `t`.
fn hermite(t: f64, h: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
    let (t2, t3) = (t * t, t * t * t);
    let v = [
        1.0 - 3.0 * t2 + 2.0 * t3,
        h * (t - 2.0 * t2 + t3),
        3.0 * t2 - 2.0 * t3,
        h * (t3 - t2),
    ];
    let d1 = [
        (-6.0 * t + 6.0 * t2) / h,
        1.0 - 4.0 * t + 3.0 * t2,
        (6.0 * t - 6.0 * t2) / h,
        3.0 * t2 - 2.0 * t,
    ];
    let d2 = [
        (-6.0 + 12.0 * t) / (h * h),
        (-4.0 + 6.0 * t) / h,
        (6.0 - 12.0 * t) / (h * h),
        (6.0 * t - 2.0) / h,
    ];
    (v, d1, d2)
}

/// Element matrices for `int u'' v''` and `int u' v'`, and load `int v`.
fn element_matrices(h: f64) -> ([[f64; 4]; 4], [[f64; 4]; 4], [f64; 4]) {
    let rule = GaussRule::new(4);
    let mut bend = [[0.0; 4]; 4];
    let mut tens = [[0.0; 4]; 4];
    let mut load = [0.0; 4];
    for (x, w) in rule.mapped(0.0, h) {
        let (v, d1, d2) = hermite(x / h, h);
        for a in 0..4 {
            load[a] += w * v[a];
            for b in 0..4 {
                bend[a][b] += w * d2[a] * d2[b];
                tens[a][b] += w * d1[a] * d1[b];
            }
        }
    }
    (bend, tens, load)
}

/// `c[p][q][k] = int (H A_p')(u) A_q(u - k h) du` for shape pair `(p, q)`
/// (0 = value, 1 = slope) and offsets `k = 0..=max_offset` (negative offsets
/// follow from symmetry).
fn hilbert_gram_table(h: f64, max_offset: usize) -> [[Vec<f64>; 2]; 2] {
    let r = SAMPLES_PER_ELEMENT;
    let delta = h / r as f64;
    let len = ((PAD as f64 * 2.0 / delta).ceil() as usize).next_power_of_two();
    let period = len as f64 * delta;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    let shapes: [Box<dyn Fn(f64) -> f64>; 2] = [
        Box::new(move |t: f64| {
            let s = t.abs() / h;
            1.0 - 3.0 * s * s + 2.0 * s * s * s
        }),
        Box::new(move |t: f64| {
            let s = t.abs() / h;
            t * (1.0 - s) * (1.0 - s)
        }),
    ];
    let spectra: Vec<Vec<Complex64>> = shapes
        .iter()
        .map(|shape| {
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for k in -(r as i64)..=(r as i64) {
                let idx = k.rem_euclid(len as i64) as usize;
                buf[idx].re = shape(k as f64 * delta);
            }
            fwd.process(&mut buf);
            buf
        })
        .collect();

    let mut table: [[Vec<f64>; 2]; 2] = Default::default();
    for p in 0..2 {
        for q in 0..2 {
            let mut buf: Vec<Complex64> = (0..len)
                .map(|k| {
                    let kk = if k <= len / 2 { k as f64 } else { k as f64 - len as f64 };
                    let xi = kk / period;
                    spectra[p][k] * spectra[q][k].conj() * (2.0 * PI * xi.abs())
                })
                .collect();
            inv.process(&mut buf);
            // c(m delta) = (delta / len) * sum_k (...) e^{2 pi i k m / len}
            table[p][q] = (0..=max_offset)
                .map(|k| buf[(k * r) % len].re * delta / len as f64)
                .collect();
        }
    }
    table
}

/// Minimises the discrete energy over `m` elements and samples the result
/// on the `n`-node grid.
pub fn solve_galerkin_oracle(params: &CrackParams, m: usize, n: usize) -> Result<GalerkinSolution> {
    params.validate()?;
    if m < MIN_ELEMENTS {
        return Err(Error::Grid(format!("{m} elements, need at least {MIN_ELEMENTS}")));
    }
    if n < MIN_NODES || n % 2 == 0 {
        return Err(Error::Resolution { n, min: MIN_NODES });
    }
    let h = 2.0 / m as f64;
    let dofs = 2 * (m - 1);
    // global index of local dof a on the element starting at node e
    let index = |e: usize, a: usize| -> Option<usize> {
        let nd = e + a / 2;
        (nd >= 1 && nd < m).then(|| 2 * (nd - 1) + a % 2)
    };

    let (bend, tens, load) = element_matrices(h);
    let mut k = DMatrix::<f64>::zeros(dofs, dofs);
    let mut f = DVector::<f64>::zeros(dofs);
    for e in 0..m {
        for a in 0..4 {
            let Some(i) = index(e, a) else { continue };
            f[i] += params.gamma * load[a];
            for b in 0..4 {
                if let Some(j) = index(e, b) {
                    k[(i, j)] += params.beta * bend[a][b] + params.alpha * tens[a][b];
                }
            }
        }
    }

    let table = hilbert_gram_table(h, m);
    for i in 0..dofs {
        for j in 0..dofs {
            let (ni, pi) = (i / 2, i % 2);
            let (nj, pj) = (j / 2, j % 2);
            // offset d = x_j - x_i; c_{pq}(-d) = c_{qp}(d)
            let v = if nj >= ni {
                table[pi][pj][nj - ni]
            } else {
                table[pj][pi][ni - nj]
            };
            k[(j, i)] += v;
        }
    }
    let k = 0.5 * (&k + k.transpose());

    let chol = k.clone().cholesky().ok_or(Error::Indefinite)?;
    let c = chol.solve(&f);
    let energy = 0.5 * c.dot(&(&k * &c)) - c.dot(&f);

    let coeff = |nd: usize, p: usize| -> f64 {
        if nd == 0 || nd == m {
            0.0
        } else {
            c[2 * (nd - 1) + p]
        }
    };
    let mut values: Vec<f64> = (0..n)
        .map(|i| {
            let x = node(n, i);
            let e = (((x + 1.0) / h).floor() as usize).min(m - 1);
            let t = (x + 1.0 - e as f64 * h) / h;
            let (v, _, _) = hermite(t, h);
            v[0] * coeff(e, 0) + v[1] * coeff(e, 1) + v[2] * coeff(e + 1, 0) + v[3] * coeff(e + 1, 1)
        })
        .collect();
    values[0] = 0.0;
    values[n - 1] = 0.0;
    let profile = BoundaryProfile::from_grid(GridFunction::new(values)?, params, None);
    Ok(GalerkinSolution {
        profile,
        elements: m,
        coefficients: c.iter().copied().collect(),
        energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_matrices_match_textbook_forms() {
        let h = 0.3;
        let (bend, tens, load) = element_matrices(h);
        let kb = [
            [12.0, 6.0 * h, -12.0, 6.0 * h],
            [6.0 * h, 4.0 * h * h, -6.0 * h, 2.0 * h * h],
            [-12.0, -6.0 * h, 12.0, -6.0 * h],
            [6.0 * h, 2.0 * h * h, -6.0 * h, 4.0 * h * h],
        ];
        let kg = [
            [36.0, 3.0 * h, -36.0, 3.0 * h],
            [3.0 * h, 4.0 * h * h, -3.0 * h, -h * h],
            [-36.0, -3.0 * h, 36.0, -3.0 * h],
            [3.0 * h, -h * h, -3.0 * h, 4.0 * h * h],
        ];
        for a in 0..4 {
            for b in 0..4 {
                assert!((bend[a][b] - kb[a][b] / h.powi(3)).abs() < 1e-10);
                assert!((tens[a][b] - kg[a][b] / (30.0 * h)).abs() < 1e-12);
            }
        }
        let lv = [h / 2.0, h * h / 12.0, h / 2.0, -h * h / 12.0];
        for a in 0..4 {
            assert!((load[a] - lv[a]).abs() < 1e-15);
        }
    }

    #[test]
    fn hilbert_gram_is_positive_on_hat() {
        // int V H V' = int 2 pi |xi| |V^|^2 > 0, symmetric in the slope pair
        let t = hilbert_gram_table(0.25, 4);
        assert!(t[0][0][0] > 0.0);
        assert!(t[1][1][0] > 0.0);
        assert!((t[0][1][0]).abs() < 1e-12, "value-slope pair is odd");
        assert!((t[0][1][1] + t[1][0][1]).abs() < 1e-10);
    }

    #[test]
    fn zero_load_gives_zero_minimiser() {
        let p = CrackParams::new(1.0, 1.0, 0.0).unwrap();
        let s = solve_galerkin_oracle(&p, 16, 65).unwrap();
        assert!(s.coefficients.iter().all(|c| *c == 0.0));
        assert_eq!(s.energy, 0.0);
    }

    #[test]
    fn rejects_tiny_basis() {
        let p = CrackParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(solve_galerkin_oracle(&p, 4, 65).is_err());
    }
}
