//! Dense LU with partial pivoting and a 1-norm condition estimate.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n)
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `P A = L U`, stored compactly.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

// Rows below this count are eliminated serially.
const PAR_ROWS: usize = 64;

impl LuFactors {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if pmax <= f64::EPSILON * scale * n as f64 || pmax == 0.0 {
                return Err(Error::SingularSystem);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..(k + 1) * n];
            let pivot = pivot_row[k];
            let update = |row: &mut [f64]| {
                let m = row[k] / pivot;
                row[k] = m;
                if m != 0.0 {
                    for (r, p) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                        *r -= m * p;
                    }
                }
            };
            if n - k > PAR_ROWS {
                tail.par_chunks_mut(n).for_each(update);
            } else {
                tail.chunks_mut(n).for_each(update);
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        // U^T z = b
        let mut z = b.to_vec();
        for i in 0..n {
            let zi = z[i] / self.lu[i * n + i];
            z[i] = zi;
            for j in i + 1..n {
                z[j] -= self.lu[i * n + j] * zi;
            }
        }
        // L^T w = z
        for i in (0..n).rev() {
            let wi = z[i];
            for j in 0..i {
                z[j] -= self.lu[i * n + j] * wi;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }

    /// Hager–Higham estimate of `||A^{-1}||_1`.
    pub fn inverse_norm_one_estimate(&self) -> f64 {
        let n = self.n;
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x);
            est = y.iter().map(|v| v.abs()).sum::<f64>();
            let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve_transpose(&xi);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .fold((0, -1.0), |b, (i, v)| if v.abs() > b.1 { (i, v.abs()) } else { b });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j] = 1.0;
        }
        // alternating test vector guards against unlucky cancellation
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
            })
            .collect();
        let y = self.solve(&alt);
        let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
        est.max(alt_est)
    }
}

/// Estimated 1-norm condition number of `a` given its factors.
pub fn condition_estimate(a: &DenseMatrix, lu: &LuFactors) -> f64 {
    a.norm_one() * lu.inverse_norm_one_estimate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> DenseMatrix {
        let data = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                if i == j {
                    4.0 + i as f64
                } else {
                    1.0 / (1.0 + (i as f64 - 2.0 * j as f64).abs())
                }
            })
            .collect();
        DenseMatrix::from_rows(n, data)
    }

    #[test]
    fn solves_and_transposes() {
        for n in [3, 17, 130] {
            let a = sample(n);
            let lu = LuFactors::factor(&a).unwrap();
            let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
            let b = a.mul_vec(&x_true);
            let x = lu.solve(&b);
            let err = x.iter().zip(&x_true).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-12, "n = {n}: {err}");
            // transpose: (A^T x)_j = sum_i a_ij x_i
            let bt: Vec<f64> = (0..n)
                .map(|j| (0..n).map(|i| a.get(i, j) * x_true[i]).sum())
                .collect();
            let xt = lu.solve_transpose(&bt);
            let err = xt.iter().zip(&x_true).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-12, "transpose n = {n}: {err}");
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let a = DenseMatrix::from_rows(2, vec![0.0, 1.0, 1.0, 0.0]);
        let lu = LuFactors::factor(&a).unwrap();
        assert_eq!(lu.solve(&[2.0, 3.0]), vec![3.0, 2.0]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = DenseMatrix::from_rows(2, vec![1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(LuFactors::factor(&a), Err(Error::SingularSystem)));
    }

    #[test]
    fn condition_estimate_on_diagonal_is_exact() {
        let a = DenseMatrix::from_rows(3, vec![1.0, 0.0, 0.0, 0.0, 1e-3, 0.0, 0.0, 0.0, 10.0]);
        let lu = LuFactors::factor(&a).unwrap();
        let c = condition_estimate(&a, &lu);
        assert!((c - 1e4).abs() < 1e-8, "{c}");
    }

    #[test]
    fn condition_estimate_is_a_lower_bound_close_to_true_value() {
        let n = 12;
        let a = sample(n);
        let lu = LuFactors::factor(&a).unwrap();
        // exact ||A^-1||_1 from explicit inverse columns
        let exact = (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                lu.solve(&e).iter().map(|v| v.abs()).sum::<f64>()
            })
            .fold(0.0, f64::max);
        let est = lu.inverse_norm_one_estimate();
        assert!(est <= exact * (1.0 + 1e-12));
        assert!(est >= 0.3 * exact);
    }
}
