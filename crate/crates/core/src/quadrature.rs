//! Fixed and adaptive quadrature rules shared by the solver modules.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pairs: Vec<(f64, f64)>,
}

impl GaussRule {
    pub fn new(points: usize) -> Self {
        let rule = GaussLegendre::new(points.max(2)).expect("rule degree is at least 2");
        Self {
            pairs: rule.as_node_weight_pairs().to_vec(),
        }
    }

    /// Shared 64-point rule.
    pub fn g64() -> &'static GaussRule {
        static RULE: OnceLock<GaussRule> = OnceLock::new();
        RULE.get_or_init(|| GaussRule::new(64))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over consecutive breakpoints. Breakpoints must be sorted;
    /// zero-length pieces are skipped.
    pub fn integrate_pieces<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        breaks
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| self.integrate(w[0], w[1], &mut f))
            .sum()
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over the pieces given by
/// `breaks`, refined by bisection until the summed error estimate is below
/// `abs_tol`. Subdivision stops at `max_depth` levels per piece.
pub fn adaptive_gk<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], abs_tol: f64, max_depth: u32) -> f64 {
    let pieces: Vec<(f64, f64)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    let span: f64 = pieces.iter().map(|(a, b)| b - a).sum();
    if span == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut stack: Vec<(f64, f64, u32)> = pieces.iter().rev().map(|&(a, b)| (a, b, 0)).collect();
    while let Some((a, b, depth)) = stack.pop() {
        let (val, err) = kronrod15(&mut f, a, b);
        // tolerance is distributed in proportion to interval length
        if err <= abs_tol * (b - a) / span || depth >= max_depth {
            total += val;
        } else {
            let m = 0.5 * (a + b);
            stack.push((m, b, depth + 1));
            stack.push((a, m, depth + 1));
        }
    }
    total
}

/// Trapezoidal weights on a uniform grid of `n` nodes with spacing `h`.
pub fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    if n > 0 {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_64_integrates_high_degree_polynomials() {
        let rule = GaussRule::g64();
        assert_eq!(rule.len(), 64);
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(20));
        let exact = (2f64.powi(21) + 1.0) / 21.0;
        assert!((v - exact).abs() / exact < 1e-13);
    }

    #[test]
    fn composite_rule_handles_kinks() {
        let rule = GaussRule::new(8);
        let v = rule.integrate_pieces(&[-1.0, 0.3, 1.0], |x| (x - 0.3f64).abs());
        let exact = 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7;
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn adaptive_gk_resolves_sharp_peak() {
        let y = 1e-4;
        let v = adaptive_gk(
            |s| y / (s * s + y * y) / std::f64::consts::PI,
            &[-1.0, 0.0, 1.0],
            1e-11,
            60,
        );
        let exact = 2.0 * (1.0 / y).atan() / std::f64::consts::PI;
        assert!((v - exact).abs() < 1e-10, "{v} vs {exact}");
    }

    #[test]
    fn trapezoid_weights_sum_to_length() {
        let w = trapezoid_weights(9, 0.25);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
    }
}
