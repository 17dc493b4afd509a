//! Harmonic extension of the opening profile into the upper half plane.
//!
//! `w(x, y) = int P_y(x - s) f(s) ds` with the Poisson kernel
//! `P_y(t) = y / (pi (t^2 + y^2))`. After integrating by parts the gradient is
//! `w_x = int P_y(x - s) f'(s) ds` and `w_y = -int Q_y(x - s) f'(s) ds` with
//! the conjugate kernel `Q_y(t) = t / (pi (t^2 + y^2))`, so no kernel
//! derivative is ever formed. Between nodes `f` is the cubic Hermite
//! interpolant built from the grid values and slopes.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fredholm::{BoundaryProfile, CrackParams};
use crate::hilbert::hilbert_of_derivative_at;
use crate::quadrature::adaptive_gk;

/// How a field was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldMethod {
    PoissonConvolution,
    FourierSynthesis,
}

/// Rectangular sample grid; `ys` starts at 0 or above and increases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl FieldGrid {
    /// `nx` points on `[-half_width, half_width]`, `ny` on `[0, height]`.
    pub fn uniform(half_width: f64, height: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 || !(half_width > 0.0) || !(height > 0.0) {
            return Err(Error::Grid(format!(
                "need nx, ny >= 2 and positive extents (got {nx} x {ny}, {half_width}, {height})"
            )));
        }
        let xs = (0..nx)
            .map(|i| -half_width + 2.0 * half_width * i as f64 / (nx - 1) as f64)
            .collect();
        let ys = (0..ny).map(|j| height * j as f64 / (ny - 1) as f64).collect();
        Self::new(xs, ys)
    }

    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::Grid("empty axis".into()));
        }
        if ys[0] < 0.0 || ys.windows(2).any(|w| !(w[1] > w[0])) || xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("axes must increase strictly and y must be nonnegative".into()));
        }
        Ok(Self { xs, ys })
    }

    /// Default window `[-3, 3] x [0, 3]` at 301 x 301.
    pub fn standard() -> Self {
        Self::uniform(3.0, 3.0, 301, 301).expect("valid default grid")
    }
}

/// Tunables for reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOptions {
    /// Absolute tolerance of each adaptive Poisson integral.
    pub abs_tol: f64,
    /// Period of the zero-padded transform in the Fourier path.
    pub fourier_period: f64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            fourier_period: 2048.0,
        }
    }
}

/// `w`, `w_x`, `w_y` on a grid, row-major with `y` as the slow index.
#[derive(Debug, Clone, Serialize)]
pub struct HalfPlaneField {
    pub grid: FieldGrid,
    pub w: Vec<f64>,
    pub w_x: Vec<f64>,
    pub w_y: Vec<f64>,
    pub method: FieldMethod,
}

impl HalfPlaneField {
    pub fn nx(&self) -> usize {
        self.grid.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.grid.ys.len()
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx() + i
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.w[j * self.nx()..(j + 1) * self.nx()]
    }
}

/// Cubic Hermite interpolant of grid samples, zero outside [-1, 1].
#[derive(Debug, Clone)]
pub struct ProfileInterpolant {
    values: Vec<f64>,
    slopes: Vec<f64>,
    h: f64,
}

impl ProfileInterpolant {
    pub fn new(profile: &BoundaryProfile) -> Self {
        Self {
            values: profile.values().to_vec(),
            slopes: profile.df.clone(),
            h: profile.f.spacing(),
        }
    }

    /// `(f(s), f'(s))`.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        if !(-1.0..=1.0).contains(&s) {
            return (0.0, 0.0);
        }
        let n = self.values.len();
        let e = (((s + 1.0) / self.h).floor() as usize).min(n - 2);
        let t = (s + 1.0 - e as f64 * self.h) / self.h;
        let (f0, f1, d0, d1) = (self.values[e], self.values[e + 1], self.slopes[e], self.slopes[e + 1]);
        let h = self.h;
        let (t2, t3) = (t * t, t * t * t);
        let v = (1.0 - 3.0 * t2 + 2.0 * t3) * f0 + h * (t - 2.0 * t2 + t3) * d0 + (3.0 * t2 - 2.0 * t3) * f1 + h * (t3 - t2) * d1;
        let dv = (-6.0 * t + 6.0 * t2) / h * f0 + (1.0 - 4.0 * t + 3.0 * t2) * d0 + (6.0 * t - 6.0 * t2) / h * f1 + (3.0 * t2 - 2.0 * t) * d1;
        (v, dv)
    }
}

const MAX_DEPTH: u32 = 40;

fn poisson_point(interp: &ProfileInterpolant, x: f64, y: f64, tol: f64) -> (f64, f64, f64) {
    let mut breaks = vec![-1.0];
    if x > -1.0 && x < 1.0 {
        breaks.push(x);
    }
    breaks.push(1.0);
    let p = |s: f64| y / (PI * ((x - s) * (x - s) + y * y));
    let q = |s: f64| (x - s) / (PI * ((x - s) * (x - s) + y * y));
    let w = adaptive_gk(|s| p(s) * interp.eval(s).0, &breaks, tol, MAX_DEPTH);
    let wx = adaptive_gk(|s| p(s) * interp.eval(s).1, &breaks, tol, MAX_DEPTH);
    let wy = -adaptive_gk(|s| q(s) * interp.eval(s).1, &breaks, tol, MAX_DEPTH);
    (w, wx, wy)
}

/// Poisson-integral reconstruction. The `y = 0` row copies the profile (and
/// uses `w_y = -H f'`) because the kernel degenerates there.
pub fn reconstruct_field(profile: &BoundaryProfile, grid: &FieldGrid) -> HalfPlaneField {
    reconstruct_field_with(profile, grid, &FieldOptions::default())
}

pub fn reconstruct_field_with(profile: &BoundaryProfile, grid: &FieldGrid, opts: &FieldOptions) -> HalfPlaneField {
    let interp = ProfileInterpolant::new(profile);
    let nx = grid.xs.len();
    let boundary_hilbert = if grid.ys[0] == 0.0 {
        hilbert_of_derivative_at(&profile.f, &grid.xs)
    } else {
        Vec::new()
    };
    let values: Vec<(f64, f64, f64)> = (0..nx * grid.ys.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            let (x, y) = (grid.xs[i], grid.ys[j]);
            if y == 0.0 {
                let (f, df) = interp.eval(x);
                (f, df, -boundary_hilbert[i])
            } else {
                poisson_point(&interp, x, y, opts.abs_tol)
            }
        })
        .collect();
    let (w, (w_x, w_y)) = values.into_iter().map(|(a, b, c)| (a, (b, c))).unzip();
    HalfPlaneField {
        grid: grid.clone(),
        w,
        w_x,
        w_y,
        method: FieldMethod::PoissonConvolution,
    }
}

/// Fourier synthesis `w = int f^(xi) e^{-2 pi |xi| y} e^{2 pi i xi x} dxi`
/// from the zero-padded DFT of the samples. Every `x` must be a whole
/// multiple of the profile spacing.
pub fn reconstruct_field_fourier(profile: &BoundaryProfile, grid: &FieldGrid, opts: &FieldOptions) -> Result<HalfPlaneField> {
    let n = profile.n;
    let h = profile.f.spacing();
    let offsets: Vec<i64> = grid
        .xs
        .iter()
        .map(|&x| {
            let k = (x / h).round();
            if (x - k * h).abs() > 1e-9 * h {
                Err(Error::Grid(format!("x = {x} is not on the profile lattice of spacing {h}")))
            } else {
                Ok(k as i64)
            }
        })
        .collect::<Result<_>>()?;
    let len = ((opts.fourier_period / h).ceil() as usize).max(2 * n).next_power_of_two();
    let period = len as f64 * h;
    let half = (n as i64 - 1) / 2;
    if offsets.iter().any(|k| k.unsigned_abs() as usize >= len / 2) {
        return Err(Error::Grid("x window exceeds half the Fourier period".into()));
    }
    // centre node at index 0
    let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
    for (i, v) in profile.values().iter().enumerate() {
        let k = (i as i64 - half).rem_euclid(len as i64) as usize;
        spectrum[k].re = *v;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut spectrum);
    let inverse = planner.plan_fft_inverse(len);
    let xi: Vec<f64> = (0..len)
        .map(|k| if k <= len / 2 { k as f64 } else { k as f64 - len as f64 } / period)
        .collect();

    let nx = grid.xs.len();
    let ny = grid.ys.len();
    let mut w = vec![0.0; nx * ny];
    let mut w_x = vec![0.0; nx * ny];
    let mut w_y = vec![0.0; nx * ny];
    let scale = 1.0 / len as f64;
    for (j, &y) in grid.ys.iter().enumerate() {
        let damp: Vec<f64> = xi.iter().map(|z| (-2.0 * PI * z.abs() * y).exp()).collect();
        let mults: [Box<dyn Fn(usize) -> Complex64>; 3] = [
            Box::new(|k| Complex64::new(damp[k], 0.0)),
            Box::new(|k| Complex64::new(0.0, 2.0 * PI * xi[k] * damp[k])),
            Box::new(|k| Complex64::new(-2.0 * PI * xi[k].abs() * damp[k], 0.0)),
        ];
        for (out, mult) in [&mut w, &mut w_x, &mut w_y].into_iter().zip(mults.iter()) {
            let mut buf: Vec<Complex64> = spectrum.iter().enumerate().map(|(k, c)| c * mult(k)).collect();
            inverse.process(&mut buf);
            for (i, &k) in offsets.iter().enumerate() {
                out[j * nx + i] = buf[k.rem_euclid(len as i64) as usize].re * scale;
            }
        }
    }
    Ok(HalfPlaneField {
        grid: grid.clone(),
        w,
        w_x,
        w_y,
        method: FieldMethod::FourierSynthesis,
    })
}

/// Dirichlet-to-Neumann mismatch `max |-w_y(x, 0+) - H f'(x)|` over grid
/// points with `|x| < 1`, with `w_y(x, 0+)` from the one-sided three-point
/// difference on the first three rows (which must start at `y = 0`).
pub fn dtn_check(profile: &BoundaryProfile, field: &HalfPlaneField) -> Result<f64> {
    let ys = &field.grid.ys;
    if ys.len() < 3 || ys[0] != 0.0 {
        return Err(Error::Grid("DtN check needs rows y = 0, y1, y2".into()));
    }
    let (y1, y2) = (ys[1], ys[2]);
    // derivative at 0 of the quadratic through (0, w0), (y1, w1), (y2, w2)
    let c0 = -(y1 + y2) / (y1 * y2);
    let c1 = y2 / (y1 * (y2 - y1));
    let c2 = -y1 / (y2 * (y2 - y1));
    let inside: Vec<usize> = (0..field.nx()).filter(|&i| field.grid.xs[i].abs() < 1.0).collect();
    let xs: Vec<f64> = inside.iter().map(|&i| field.grid.xs[i]).collect();
    let hf = hilbert_of_derivative_at(&profile.f, &xs);
    Ok(inside
        .iter()
        .zip(&hf)
        .map(|(&i, hv)| {
            let wy = c0 * field.w[field.idx(i, 0)] + c1 * field.w[field.idx(i, 1)] + c2 * field.w[field.idx(i, 2)];
            (-wy - hv).abs()
        })
        .fold(0.0, f64::max))
}

/// Default radius around the tips excluded from the harmonicity residual.
pub const TIP_EXCLUSION: f64 = 0.25;

/// Largest five-point Laplacian of `w` over interior nodes farther than
/// `tip_exclusion` from `(±1, 0)`. Requires uniform axes.
pub fn harmonicity_residual(field: &HalfPlaneField, tip_exclusion: f64) -> Result<f64> {
    let uniform = |v: &[f64]| -> Option<f64> {
        let d = v[1] - v[0];
        v.windows(2).all(|w| ((w[1] - w[0]) - d).abs() <= 1e-9 * d).then_some(d)
    };
    let (nx, ny) = (field.nx(), field.ny());
    if nx < 3 || ny < 3 {
        return Err(Error::Grid("need at least 3 x 3 nodes".into()));
    }
    let hx = uniform(&field.grid.xs).ok_or_else(|| Error::Grid("x axis not uniform".into()))?;
    let hy = uniform(&field.grid.ys).ok_or_else(|| Error::Grid("y axis not uniform".into()))?;
    let w = &field.w;
    let mut worst = 0.0f64;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let (x, y) = (field.grid.xs[i], field.grid.ys[j]);
            let r = ((x.abs() - 1.0).powi(2) + y * y).sqrt();
            if r <= tip_exclusion {
                continue;
            }
            let k = field.idx(i, j);
            let lap = (w[k + 1] - 2.0 * w[k] + w[k - 1]) / (hx * hx) + (w[k + nx] - 2.0 * w[k] + w[k - nx]) / (hy * hy);
            worst = worst.max(lap.abs());
        }
    }
    Ok(worst)
}

/// `sup (|w| + |grad w|) / |gamma|` over the grid; zero when `gamma = 0`.
pub fn strain_bound_report(field: &HalfPlaneField, params: &CrackParams) -> f64 {
    if params.gamma == 0.0 {
        return 0.0;
    }
    let sup = (0..field.w.len())
        .map(|k| field.w[k].abs() + field.w_x[k].hypot(field.w_y[k]))
        .fold(0.0, f64::max);
    sup / params.gamma.abs()
}

/// Largest `|grad w|` on the top row.
pub fn far_field_gradient(field: &HalfPlaneField) -> f64 {
    let j = field.ny() - 1;
    (0..field.nx())
        .map(|i| {
            let k = field.idx(i, j);
            field.w_x[k].hypot(field.w_y[k])
        })
        .fold(0.0, f64::max)
}
