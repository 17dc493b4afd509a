//! Real polynomials restricted to [-1, 1], with the closed-form Hilbert
//! transform of the compactly supported restriction.

use std::f64::consts::PI;

/// Polynomial with coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// `(1 - x^2)^k`.
    pub fn bump(k: u32) -> Self {
        let base = Poly::new(vec![1.0, 0.0, -1.0]);
        (0..k).fold(Poly::new(vec![1.0]), |acc, _| acc.mul(&base))
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self { coeffs: c }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn mul(&self, other: &Poly) -> Self {
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Integral over [-1, 1].
    pub fn integral(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 0)
            .map(|(k, c)| 2.0 * c / (k + 1) as f64)
            .sum()
    }

    /// Hilbert transform `(1/pi) p.v. int_{-1}^{1} p(s) / (x - s) ds` of the
    /// polynomial truncated to [-1, 1]. Valid for any real `x`; at `x = ±1`
    /// the logarithmic term is finite only if `p(±1) = 0`, in which case the
    /// limit is returned.
    pub fn hilbert_on_interval(&self, x: f64) -> f64 {
        // (p(s) - p(x)) / (x - s) = -sum_k c_k sum_{j<k} s^j x^{k-1-j}
        let mut smooth = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for j in (0..k).step_by(2) {
                smooth -= c * 2.0 / (j + 1) as f64 * x.powi((k - 1 - j) as i32);
            }
        }
        let px = self.eval(x);
        let log_term = if px == 0.0 {
            0.0
        } else {
            px * ((1.0 + x) / (1.0 - x)).abs().ln()
        };
        (smooth + log_term) / PI
    }
}
