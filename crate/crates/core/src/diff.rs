//! Finite-difference derivative recovery for uniform grid samples.
//!
//! Interior stencils are fourth order. First derivatives use five-point
//! one-sided stencils near the ends; second derivatives fall back to second
//! order there. Fourth derivatives are only formed where a symmetric stencil
//! fits and are `NaN` at the two outermost nodes on each side.

/// First derivative.
pub fn first(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    if n < 5 {
        for i in 0..n {
            d[i] = match i {
                0 if n > 1 => (f[1] - f[0]) / h,
                i if i + 1 == n && n > 1 => (f[i] - f[i - 1]) / h,
                i if n > 2 => (f[i + 1] - f[i - 1]) / (2.0 * h),
                _ => 0.0,
            };
        }
        return d;
    }
    for i in 2..n - 2 {
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    let m = n - 1;
    d[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / (12.0 * h);
    d[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / (12.0 * h);
    d
}

/// Second derivative.
pub fn second(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let h2 = h * h;
    let mut d = vec![0.0; n];
    if n < 5 {
        for i in 1..n.saturating_sub(1) {
            d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
        }
        return d;
    }
    for i in 2..n - 2 {
        d[i] = (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) / (12.0 * h2);
    }
    let m = n - 1;
    d[1] = (f[2] - 2.0 * f[1] + f[0]) / h2;
    d[m - 1] = (f[m] - 2.0 * f[m - 1] + f[m - 2]) / h2;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[m] = (2.0 * f[m] - 5.0 * f[m - 1] + 4.0 * f[m - 2] - f[m - 3]) / h2;
    d
}

/// Fourth derivative from the same centred stencil spread over every
/// `stride`-th node. Roundoff in `f` is amplified like `1 / (stride h)^4`, so
/// a wider stencil keeps fine grids usable. Nodes the wide stencil cannot
/// reach fall back to `fourth`.
pub fn fourth_strided(f: &[f64], h: f64, stride: usize) -> Vec<f64> {
    let mut d = fourth(f, h);
    let k = stride.max(1);
    if k == 1 || f.len() < 6 * k + 1 {
        return d;
    }
    let hk4 = (k as f64 * h).powi(4);
    for i in 3 * k..f.len() - 3 * k {
        d[i] = (-f[i + 3 * k] + 12.0 * f[i + 2 * k] - 39.0 * f[i + k] + 56.0 * f[i] - 39.0 * f[i - k]
            + 12.0 * f[i - 2 * k]
            - f[i - 3 * k])
            / (6.0 * hk4);
    }
    d
}

/// Fourth derivative; `NaN` where no centered stencil fits.
pub fn fourth(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let h4 = h.powi(4);
    let mut d = vec![f64::NAN; n];
    if n < 7 {
        return d;
    }
    for i in 3..n - 3 {
        d[i] = (-f[i + 3] + 12.0 * f[i + 2] - 39.0 * f[i + 1] + 56.0 * f[i] - 39.0 * f[i - 1]
            + 12.0 * f[i - 2]
            - f[i - 3])
            / (6.0 * h4);
    }
    d[2] = (f[4] - 4.0 * f[3] + 6.0 * f[2] - 4.0 * f[1] + f[0]) / h4;
    let m = n - 1;
    d[m - 2] = (f[m] - 4.0 * f[m - 1] + 6.0 * f[m - 2] - 4.0 * f[m - 3] + f[m - 4]) / h4;
    d
}
