//! Hilbert transform of derivatives of compactly supported grid functions.
//!
//! The production route is product integration: `f'` is interpolated
//! piecewise linearly between nodes and the Cauchy kernel `1/(x - s)` is
//! integrated exactly on every cell. The spectral route applies the Fourier
//! multiplier of `H d/dx` to a zero-padded FFT and is kept as an independent
//! verification oracle.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::diff;
use crate::error::{Error, Result};

/// Smallest admissible node count.
pub const MIN_NODES: usize = 5;

/// Guard radius for the removable singularities of the kernel closed form.
pub const REMOVABLE_GUARD: f64 = 1e-9;

/// Samples of a function supported on [-1, 1] at `n` uniform nodes including
/// both endpoints. `n` is odd so that `x = 0` is a node.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < MIN_NODES || n % 2 == 0 {
            return Err(Error::Resolution { n, min: MIN_NODES });
        }
        let (left, right) = (values[0], values[n - 1]);
        if left != 0.0 || right != 0.0 {
            return Err(Error::Support { left, right });
        }
        Ok(Self { values })
    }

    /// Samples `f` at the nodes; endpoint values are forced to zero.
    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, f: F) -> Result<Self> {
        if n < MIN_NODES || n % 2 == 0 {
            return Err(Error::Resolution { n, min: MIN_NODES });
        }
        let h = spacing(n);
        let mut values: Vec<f64> = (0..n).map(|i| f(-1.0 + i as f64 * h)).collect();
        values[0] = 0.0;
        values[n - 1] = 0.0;
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        spacing(self.values.len())
    }

    pub fn node(&self, i: usize) -> f64 {
        node(self.values.len(), i)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Largest deviation from evenness, `max |f(x_i) - f(-x_i)|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.len();
        (0..n / 2)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn spacing(n: usize) -> f64 {
    2.0 / (n - 1) as f64
}

pub(crate) fn node(n: usize, i: usize) -> f64 {
    // symmetric construction keeps x_i = -x_{n-1-i} exactly
    let half = (n - 1) / 2;
    let h = spacing(n);
    if i < half {
        -((half - i) as f64 * h)
    } else {
        (i - half) as f64 * h
    }
}

/// Product-integration Hilbert transform of piecewise-linear data.
///
/// `slope` holds values of `f'` at the uniform nodes of [-1, 1]; outside the
/// interval `f'` is zero. When `x` coincides with a node the two adjacent
/// logarithms cancel in the principal-value sense and are dropped.
fn cauchy_linear(slope: &[f64], h: f64, x: f64) -> f64 {
    let n = slope.len();
    let mut sum = 0.0;
    for j in 0..n - 1 {
        let a = node(n, j);
        let b = node(n, j + 1);
        let (fa, fb) = (slope[j], slope[j + 1]);
        let da = x - a;
        let db = x - b;
        if da != 0.0 && db != 0.0 {
            let lx = fa + (fb - fa) * (x - a) / h;
            sum += lx * (da / db).abs().ln();
        }
        sum -= fb - fa;
    }
    sum / PI
}

/// `H f'` at the grid nodes.
pub fn hilbert_of_derivative(f: &GridFunction) -> Vec<f64> {
    let h = f.spacing();
    let slope = diff::first(f.values(), h);
    let nodes = f.nodes();
    nodes.par_iter().map(|&x| cauchy_linear(&slope, h, x)).collect()
}

/// `H f'` at arbitrary points on the real line.
pub fn hilbert_of_derivative_at(f: &GridFunction, points: &[f64]) -> Vec<f64> {
    let h = f.spacing();
    let slope = diff::first(f.values(), h);
    points.par_iter().map(|&x| cauchy_linear(&slope, h, x)).collect()
}

/// Output of the spectral oracle.
#[derive(Debug, Clone)]
pub struct SpectralOracle {
    pub values: Vec<f64>,
    /// Period of the padded transform.
    pub period: f64,
    pub warning: Option<String>,
}

/// Recommended minimum padding factor (period / support length).
pub const MIN_PAD: usize = 8;

/// `H f'` by the Fourier multiplier `(-i sgn xi)(2 pi i xi) = 2 pi |xi|`
/// applied to the zero-padded DFT of the samples. The periodic copies of the
/// result sit `period` apart, so the padding factor `pad` (period divided by
/// the support length 2) controls the aliasing error, which decays like
/// `pad^-2`.
pub fn hilbert_spectral_oracle(f: &GridFunction, pad: usize) -> SpectralOracle {
    let n = f.len();
    let h = f.spacing();
    let target = (pad.max(1) * (n - 1)).max(n);
    let len = target.next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (slot, v) in buf.iter_mut().zip(f.values()) {
        slot.re = *v;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    let period = len as f64 * h;
    for (k, c) in buf.iter_mut().enumerate() {
        let kk = if k <= len / 2 { k as f64 } else { k as f64 - len as f64 };
        let xi = kk / period;
        *c *= 2.0 * PI * xi.abs();
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    let values = buf[..n].iter().map(|c| c.re * scale).collect();
    let warning = (pad < MIN_PAD).then(|| {
        format!("padding factor {pad} below {MIN_PAD}: periodization error may dominate")
    });
    if let Some(w) = &warning {
        log::warn!("{w}");
    }
    SpectralOracle {
        values,
        period,
        warning,
    }
}

fn xlogx(a: f64) -> f64 {
    if a.abs() < REMOVABLE_GUARD {
        0.0
    } else {
        a * a.ln()
    }
}

/// Closed form of `(1/pi) p.v. int_{-1}^{1} G_tau(x, tau) / (s - tau) dtau`.
///
/// The logarithmic factors multiply quantities that vanish at their
/// singular points; within `REMOVABLE_GUARD` of those points the limit
/// value (zero) is substituted.
pub fn kernel_hilbert_part(x: f64, s: f64) -> f64 {
    let d = (x - s).abs();
    let diag = if d < REMOVABLE_GUARD { 0.0 } else { (s - x) * (s - x) * d.ln() };
    let xm = x - 1.0;
    let xp = x + 1.0;
    ((s * x - 1.0) * (x * x - 1.0) / 4.0 + 0.5 * diag
        - xm * xm * (-x + 2.0 * s + s * x) * xlogx(1.0 + s) / 8.0
        - xp * xp * (x - 2.0 * s + s * x) * xlogx(1.0 - s) / 8.0)
        / PI
}
