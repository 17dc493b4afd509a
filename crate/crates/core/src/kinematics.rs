//! Convected-surface kinematics.
//!
//! A reference surface is given by a chart `Y(theta)` and the body deforms by
//! `chi`. At a chart point the state collects the reference and convected
//! frames, metrics, second forms and Christoffel symbols, together with the
//! stretch `E = (g - G)/2`, the relative curvature `K = b - B` and the
//! geodesic-distortion tensor `L_abd = (gamma^m_bd - Gamma^m_bd) g_ma`.
//! All tensors are covariant components in the chart frame.

use std::sync::Arc;

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
/// Components `t[a][b][c]` of a third-order tensor on the chart.
pub type Tensor3 = [[[f64; 2]; 2]; 2];

/// Reciprocal condition number below which a metric counts as degenerate.
pub const RCOND_MIN: f64 = 1e-10;
/// Default relative step for first derivatives.
pub const FD_STEP_FIRST: f64 = 1e-5;
/// Default relative step for second derivatives.
pub const FD_STEP_SECOND: f64 = 1e-4;

/// Value with first and second partials of a chart at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartJet {
    pub value: Vec3,
    pub d1: [Vec3; 2],
    pub d2: [[Vec3; 2]; 2],
}

/// Value, gradient `F` and component Hessians of a deformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationJet {
    pub value: Vec3,
    pub grad: Matrix3<f64>,
    /// `hess[i][(j, k)] = d^2 chi_i / dX_j dX_k`.
    pub hess: [Matrix3<f64>; 3],
}

impl DeformationJet {
    /// `sum_jk hess_i[j,k] u_j v_k` for each component `i`.
    pub fn hess_apply(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        Vec3::new(
            u.dot(&(self.hess[0] * v)),
            u.dot(&(self.hess[1] * v)),
            u.dot(&(self.hess[2] * v)),
        )
    }
}

/// How derivatives of user maps are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    /// Central differences with relative steps for first and second partials.
    FiniteDifference { first: f64, second: f64 },
}

type ChartFn = Arc<dyn Fn(f64, f64) -> Vec3 + Send + Sync>;
type ChartJetFn = Arc<dyn Fn(f64, f64) -> ChartJet + Send + Sync>;
type DeformFn = Arc<dyn Fn(&Vec3) -> Vec3 + Send + Sync>;
type DeformJetFn = Arc<dyn Fn(&Vec3) -> DeformationJet + Send + Sync>;

fn rel_step(step: f64, at: f64) -> f64 {
    step * at.abs().max(1.0)
}

/// Parameterisation of the reference surface on a rectangle of `theta`.
#[derive(Clone)]
pub struct SurfaceChart {
    map: ChartFn,
    jet: Option<ChartJetFn>,
    pub domain: [(f64, f64); 2],
    pub mode: DerivativeMode,
}

impl std::fmt::Debug for SurfaceChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfaceChart")
            .field("domain", &self.domain)
            .field("mode", &self.mode)
            .finish()
    }
}

impl SurfaceChart {
    /// Chart with finite-difference derivatives at the default steps.
    pub fn new<F>(map: F, domain: [(f64, f64); 2]) -> Self
    where
        F: Fn(f64, f64) -> Vec3 + Send + Sync + 'static,
    {
        Self {
            map: Arc::new(map),
            jet: None,
            domain,
            mode: DerivativeMode::FiniteDifference {
                first: FD_STEP_FIRST,
                second: FD_STEP_SECOND,
            },
        }
    }

    /// Attaches analytic partials and switches to analytic mode.
    pub fn with_jet<J>(mut self, jet: J) -> Self
    where
        J: Fn(f64, f64) -> ChartJet + Send + Sync + 'static,
    {
        self.jet = Some(Arc::new(jet));
        self.mode = DerivativeMode::Analytic;
        self
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn point(&self, t1: f64, t2: f64) -> Vec3 {
        (self.map)(t1, t2)
    }

    pub fn contains(&self, t1: f64, t2: f64) -> bool {
        let [(a1, b1), (a2, b2)] = self.domain;
        (a1..=b1).contains(&t1) && (a2..=b2).contains(&t2)
    }

    pub fn jet(&self, t1: f64, t2: f64) -> ChartJet {
        match (self.mode, &self.jet) {
            (DerivativeMode::Analytic, Some(j)) => j(t1, t2),
            (DerivativeMode::FiniteDifference { first, second }, _) => {
                fd_chart_jet(&*self.map, t1, t2, first, second)
            }
            (DerivativeMode::Analytic, None) => {
                fd_chart_jet(&*self.map, t1, t2, FD_STEP_FIRST, FD_STEP_SECOND)
            }
        }
    }
}

fn fd_chart_jet(map: &dyn Fn(f64, f64) -> Vec3, t1: f64, t2: f64, first: f64, second: f64) -> ChartJet {
    let t = [t1, t2];
    let eval = |d: [f64; 2]| map(t1 + d[0], t2 + d[1]);
    let unit = |a: usize, h: f64| {
        let mut d = [0.0; 2];
        d[a] = h;
        d
    };
    let value = map(t1, t2);
    let mut d1 = [Vec3::zeros(); 2];
    for a in 0..2 {
        let h = rel_step(first, t[a]);
        d1[a] = (eval(unit(a, h)) - eval(unit(a, -h))) / (2.0 * h);
    }
    let mut d2 = [[Vec3::zeros(); 2]; 2];
    for a in 0..2 {
        let ha = rel_step(second, t[a]);
        d2[a][a] = (eval(unit(a, ha)) - 2.0 * value + eval(unit(a, -ha))) / (ha * ha);
    }
    let (h1, h2) = (rel_step(second, t1), rel_step(second, t2));
    let mixed = (eval([h1, h2]) - eval([h1, -h2]) - eval([-h1, h2]) + eval([-h1, -h2])) / (4.0 * h1 * h2);
    d2[0][1] = mixed;
    d2[1][0] = mixed;
    ChartJet { value, d1, d2 }
}

/// Deformation `chi` of 3-space.
#[derive(Clone)]
pub struct DeformationMap {
    map: DeformFn,
    jet: Option<DeformJetFn>,
    pub mode: DerivativeMode,
}

impl std::fmt::Debug for DeformationMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DeformationMap").field("mode", &self.mode).finish()
    }
}

impl DeformationMap {
    pub fn new<F>(map: F) -> Self
    where
        F: Fn(&Vec3) -> Vec3 + Send + Sync + 'static,
    {
        Self {
            map: Arc::new(map),
            jet: None,
            mode: DerivativeMode::FiniteDifference {
                first: FD_STEP_FIRST,
                second: FD_STEP_SECOND,
            },
        }
    }

    pub fn identity() -> Self {
        Self::new(|x| *x).with_jet(|x| DeformationJet {
            value: *x,
            grad: Matrix3::identity(),
            hess: [Matrix3::zeros(); 3],
        })
    }

    pub fn with_jet<J>(mut self, jet: J) -> Self
    where
        J: Fn(&Vec3) -> DeformationJet + Send + Sync + 'static,
    {
        self.jet = Some(Arc::new(jet));
        self.mode = DerivativeMode::Analytic;
        self
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        (self.map)(x)
    }

    /// `x -> rotation * chi(x) + shift`, keeping the derivative mode.
    pub fn compose_rigid(&self, rotation: Matrix3<f64>, shift: Vec3) -> Self {
        let inner = self.map.clone();
        let jet = self.jet.clone().map(|j| {
            Arc::new(move |x: &Vec3| {
                let d = j(x);
                let mut hess = [Matrix3::zeros(); 3];
                for (i, h) in hess.iter_mut().enumerate() {
                    for k in 0..3 {
                        *h += rotation[(i, k)] * d.hess[k];
                    }
                }
                DeformationJet {
                    value: rotation * d.value + shift,
                    grad: rotation * d.grad,
                    hess,
                }
            }) as DeformJetFn
        });
        Self {
            map: Arc::new(move |x| rotation * inner(x) + shift),
            jet,
            mode: self.mode,
        }
    }

    pub fn jet(&self, x: &Vec3) -> DeformationJet {
        match (self.mode, &self.jet) {
            (DerivativeMode::Analytic, Some(j)) => j(x),
            (DerivativeMode::FiniteDifference { first, second }, _) => fd_deform_jet(&*self.map, x, first, second),
            (DerivativeMode::Analytic, None) => fd_deform_jet(&*self.map, x, FD_STEP_FIRST, FD_STEP_SECOND),
        }
    }
}

fn fd_deform_jet(map: &dyn Fn(&Vec3) -> Vec3, x: &Vec3, first: f64, second: f64) -> DeformationJet {
    let value = map(x);
    let shifted = |d: &[(usize, f64)]| {
        let mut y = *x;
        for &(k, h) in d {
            y[k] += h;
        }
        map(&y)
    };
    let mut grad = Matrix3::zeros();
    for j in 0..3 {
        let h = rel_step(first, x[j]);
        let col = (shifted(&[(j, h)]) - shifted(&[(j, -h)])) / (2.0 * h);
        grad.set_column(j, &col);
    }
    let mut hess = [Matrix3::zeros(); 3];
    for j in 0..3 {
        for k in j..3 {
            let (hj, hk) = (rel_step(second, x[j]), rel_step(second, x[k]));
            let d = if j == k {
                (shifted(&[(j, hj)]) - 2.0 * value + shifted(&[(j, -hj)])) / (hj * hj)
            } else {
                (shifted(&[(j, hj), (k, hk)]) - shifted(&[(j, hj), (k, -hk)]) - shifted(&[(j, -hj), (k, hk)])
                    + shifted(&[(j, -hj), (k, -hk)]))
                    / (4.0 * hj * hk)
            };
            for i in 0..3 {
                hess[i][(j, k)] = d[i];
                hess[i][(k, j)] = d[i];
            }
        }
    }
    DeformationJet { value, grad, hess }
}

/// All convected-surface quantities at one chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceState {
    pub theta: [f64; 2],
    /// Reference tangents `Y_,a` and their second partials.
    pub frame_ref: [Vec3; 2],
    pub frame_ref_d2: [[Vec3; 2]; 2],
    /// Convected tangents `y_,a = F Y_,a` and second partials.
    pub frame: [Vec3; 2],
    pub frame_d2: [[Vec3; 2]; 2],
    pub dual_ref: [Vec3; 2],
    pub dual: [Vec3; 2],
    pub metric_ref: Matrix2<f64>,
    pub metric: Matrix2<f64>,
    pub normal_ref: Vec3,
    pub normal: Vec3,
    pub second_form_ref: Matrix2<f64>,
    pub second_form: Matrix2<f64>,
    pub christoffel_ref: Tensor3,
    pub christoffel: Tensor3,
    pub stretch: Matrix2<f64>,
    pub curvature: Matrix2<f64>,
    pub distortion: Tensor3,
}

fn rcond2(m: &Matrix2<f64>) -> f64 {
    let e = m.symmetric_eigenvalues();
    let (lo, hi) = (e.min(), e.max());
    if hi <= 0.0 || lo <= 0.0 {
        0.0
    } else {
        lo / hi
    }
}

fn gram(v: &[Vec3; 2]) -> Matrix2<f64> {
    Matrix2::new(v[0].dot(&v[0]), v[0].dot(&v[1]), v[1].dot(&v[0]), v[1].dot(&v[1]))
}

fn duals(v: &[Vec3; 2], inv: &Matrix2<f64>) -> [Vec3; 2] {
    [
        v[0] * inv[(0, 0)] + v[1] * inv[(0, 1)],
        v[0] * inv[(1, 0)] + v[1] * inv[(1, 1)],
    ]
}

fn project(normal: &Vec3, d2: &[[Vec3; 2]; 2]) -> Matrix2<f64> {
    Matrix2::from_fn(|a, b| normal.dot(&d2[a][b]))
}

fn christoffel(dual: &[Vec3; 2], d2: &[[Vec3; 2]; 2]) -> Tensor3 {
    let mut c = [[[0.0; 2]; 2]; 2];
    for (a, ca) in c.iter_mut().enumerate() {
        for b in 0..2 {
            for d in 0..2 {
                ca[b][d] = dual[a].dot(&d2[b][d]);
            }
        }
    }
    c
}

impl SurfaceState {
    /// Builds the state from reference and convected first and second jets.
    pub fn from_jets(
        theta: [f64; 2],
        frame_ref: [Vec3; 2],
        frame_ref_d2: [[Vec3; 2]; 2],
        frame: [Vec3; 2],
        frame_d2: [[Vec3; 2]; 2],
    ) -> Result<Self> {
        let metric_ref = gram(&frame_ref);
        let metric = gram(&frame);
        let singular = |rcond| Error::SingularChart {
            theta1: theta[0],
            theta2: theta[1],
            rcond,
        };
        for m in [&metric_ref, &metric] {
            let rc = rcond2(m);
            if !(rc >= RCOND_MIN) {
                return Err(singular(rc));
            }
        }
        let inv_ref = metric_ref.try_inverse().ok_or_else(|| singular(0.0))?;
        let inv = metric.try_inverse().ok_or_else(|| singular(0.0))?;
        let dual_ref = duals(&frame_ref, &inv_ref);
        let dual = duals(&frame, &inv);
        let normal_ref = frame_ref[0].cross(&frame_ref[1]).normalize();
        let normal = frame[0].cross(&frame[1]).normalize();
        let second_form_ref = project(&normal_ref, &frame_ref_d2);
        let second_form = project(&normal, &frame_d2);
        let christoffel_ref = christoffel(&dual_ref, &frame_ref_d2);
        let christoffel_def = christoffel(&dual, &frame_d2);

        // L_abd = y_a . (y_bd - Gamma^m_bd y_m)
        let mut distortion = [[[0.0; 2]; 2]; 2];
        for b in 0..2 {
            for d in 0..2 {
                let w = frame_d2[b][d] - frame[0] * christoffel_ref[0][b][d] - frame[1] * christoffel_ref[1][b][d];
                for a in 0..2 {
                    distortion[a][b][d] = frame[a].dot(&w);
                }
            }
        }
        Ok(Self {
            theta,
            frame_ref,
            frame_ref_d2,
            frame,
            frame_d2,
            dual_ref,
            dual,
            metric_ref,
            metric,
            normal_ref,
            normal,
            second_form_ref,
            second_form,
            christoffel_ref,
            christoffel: christoffel_def,
            stretch: 0.5 * (metric - metric_ref),
            curvature: second_form - second_form_ref,
            distortion,
        })
    }

    /// `L[u, v, w] = L_abd u^a v^b w^d`.
    pub fn distortion_apply(&self, u: [f64; 2], v: [f64; 2], w: [f64; 2]) -> f64 {
        let mut s = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                for d in 0..2 {
                    s += self.distortion[a][b][d] * u[a] * v[b] * w[d];
                }
            }
        }
        s
    }

    /// Length of the tangent with components `t` in the reference metric.
    pub fn ref_norm(&self, t: [f64; 2]) -> f64 {
        let v = nalgebra::Vector2::new(t[0], t[1]);
        v.dot(&(self.metric_ref * v)).sqrt()
    }
}

/// Evaluates every convected-surface tensor at `theta`.
pub fn compute_surface_state(chart: &SurfaceChart, deform: &DeformationMap, theta: [f64; 2]) -> Result<SurfaceState> {
    let [t1, t2] = theta;
    if !chart.contains(t1, t2) {
        return Err(Error::Parameter {
            name: "theta",
            value: if chart.contains(t1, chart.domain[1].0) { t2 } else { t1 },
            reason: "outside the chart domain",
        });
    }
    let cj = chart.jet(t1, t2);
    let dj = deform.jet(&cj.value);
    let det = dj.grad.determinant();
    if !(det > 0.0) {
        return Err(Error::Parameter {
            name: "det F",
            value: det,
            reason: "deformation must preserve orientation",
        });
    }
    let frame = [dj.grad * cj.d1[0], dj.grad * cj.d1[1]];
    let mut frame_d2 = [[Vec3::zeros(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            frame_d2[a][b] = dj.grad * cj.d2[a][b] + dj.hess_apply(&cj.d1[a], &cj.d1[b]);
        }
    }
    SurfaceState::from_jets(theta, cj.d1, cj.d2, frame, frame_d2)
}

/// Stretch of a convected curve and whether the input tangent was rescaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stretch {
    pub nu: f64,
    pub normalized: bool,
}

fn unit_tangent(state: &SurfaceState, t: [f64; 2]) -> ([f64; 2], bool) {
    let len = state.ref_norm(t);
    if (len - 1.0).abs() <= 1e-12 {
        (t, false)
    } else {
        ([t[0] / len, t[1] / len], true)
    }
}

/// `nu = C T . T - 1 = 2 E[T, T]` for a reference unit tangent `T`.
pub fn stretch_of_convected_curve(state: &SurfaceState, t: [f64; 2]) -> Stretch {
    let (t, normalized) = unit_tangent(state, t);
    if normalized {
        log::warn!("tangent was not unit in the reference metric; normalised");
    }
    let v = nalgebra::Vector2::new(t[0], t[1]);
    Stretch {
        nu: 2.0 * v.dot(&(state.stretch * v)),
        normalized,
    }
}

/// `2 L[T, T, T]`, the arc-length derivative of `|z'|^2` along the convected
/// image of a reference geodesic with unit tangent `T`.
pub fn geodesic_distortion_rate(state: &SurfaceState, t: [f64; 2]) -> f64 {
    2.0 * state.distortion_apply(t, t, t)
}

/// True when `|L[U, T, T]| <= tol` for both reference-unit coordinate
/// directions `U`, i.e. the convected curve is again a geodesic.
pub fn convected_geodesic_test(state: &SurfaceState, t: [f64; 2], tol: f64) -> bool {
    (0..2).all(|a| {
        let mut u = [0.0; 2];
        u[a] = 1.0 / state.metric_ref[(a, a)].sqrt();
        state.distortion_apply(u, t, t).abs() <= tol
    })
}

/// Point on a geodesic: chart coordinates and their arc-length derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicPoint {
    pub s: f64,
    pub theta: [f64; 2],
    pub velocity: [f64; 2],
}

/// Step of the geodesic integrator.
pub const GEODESIC_STEP: f64 = 1e-3;

fn geodesic_rhs(chart: &SurfaceChart, th: [f64; 2], v: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    let j = chart.jet(th[0], th[1]);
    let g = gram(&j.d1);
    let inv = g.try_inverse().unwrap_or_else(Matrix2::zeros);
    let dual = duals(&j.d1, &inv);
    let c = christoffel(&dual, &j.d2);
    let mut acc = [0.0; 2];
    for (a, acc_a) in acc.iter_mut().enumerate() {
        for b in 0..2 {
            for d in 0..2 {
                *acc_a -= c[a][b][d] * v[b] * v[d];
            }
        }
    }
    (v, acc)
}

/// Integrates `theta'' + Gamma(theta', theta') = 0` with classical RK4 for
/// `steps` steps of size `h` (negative `h` runs backwards).
pub fn integrate_geodesic(chart: &SurfaceChart, theta0: [f64; 2], v0: [f64; 2], h: f64, steps: usize) -> Vec<GeodesicPoint> {
    let mut out = Vec::with_capacity(steps + 1);
    let (mut th, mut v) = (theta0, v0);
    out.push(GeodesicPoint {
        s: 0.0,
        theta: th,
        velocity: v,
    });
    let add = |a: [f64; 2], b: [f64; 2], s: f64| [a[0] + s * b[0], a[1] + s * b[1]];
    for k in 1..=steps {
        let (k1t, k1v) = geodesic_rhs(chart, th, v);
        let (k2t, k2v) = geodesic_rhs(chart, add(th, k1t, h / 2.0), add(v, k1v, h / 2.0));
        let (k3t, k3v) = geodesic_rhs(chart, add(th, k2t, h / 2.0), add(v, k2v, h / 2.0));
        let (k4t, k4v) = geodesic_rhs(chart, add(th, k3t, h), add(v, k3v, h));
        for a in 0..2 {
            th[a] += h / 6.0 * (k1t[a] + 2.0 * k2t[a] + 2.0 * k3t[a] + k4t[a]);
            v[a] += h / 6.0 * (k1v[a] + 2.0 * k2v[a] + 2.0 * k3v[a] + k4v[a]);
        }
        out.push(GeodesicPoint {
            s: k as f64 * h,
            theta: th,
            velocity: v,
        });
    }
    out
}

/// Rate of stretching along a reference geodesic: the tensor value
/// `2 L[T, T, T]` at `theta0` next to the centred difference of `|z'|^2`
/// over arc-length offsets `±ds` (a multiple of [`GEODESIC_STEP`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchRateCheck {
    pub tensor_rate: f64,
    pub difference_rate: f64,
}

pub fn stretch_rate_check(
    chart: &SurfaceChart,
    deform: &DeformationMap,
    theta0: [f64; 2],
    tangent: [f64; 2],
    ds: f64,
) -> Result<StretchRateCheck> {
    let state = compute_surface_state(chart, deform, theta0)?;
    let (t, _) = unit_tangent(&state, tangent);
    let steps = (ds / GEODESIC_STEP).round() as usize;
    let h = ds / steps.max(1) as f64;
    let fwd = integrate_geodesic(chart, theta0, t, h, steps);
    let bwd = integrate_geodesic(chart, theta0, t, -h, steps);
    let speed2 = |p: &GeodesicPoint| -> Result<f64> {
        let st = compute_surface_state(chart, deform, p.theta)?;
        let v = nalgebra::Vector2::new(p.velocity[0], p.velocity[1]);
        Ok(v.dot(&(st.metric * v)))
    };
    let plus = speed2(fwd.last().expect("nonempty"))?;
    let minus = speed2(bwd.last().expect("nonempty"))?;
    Ok(StretchRateCheck {
        tensor_rate: geodesic_distortion_rate(&state, t),
        difference_rate: (plus - minus) / (2.0 * ds),
    })
}

/// Ready-made charts and deformations.
pub mod examples {
    use super::*;

    /// Flat chart `theta -> (theta1, theta2, 0)` on `[a, b] x [0, pi]`.
    pub fn planar_chart(a: f64, b: f64) -> SurfaceChart {
        SurfaceChart::new(|t1, t2| Vec3::new(t1, t2, 0.0), [(a, b), (0.0, std::f64::consts::PI)]).with_jet(
            |t1, t2| ChartJet {
                value: Vec3::new(t1, t2, 0.0),
                d1: [Vec3::x(), Vec3::y()],
                d2: [[Vec3::zeros(); 2]; 2],
            },
        )
    }

    /// `chi(X) = (e^X1 cos X2, e^X1 sin X2, X3)`.
    pub fn exponential_deformation() -> DeformationMap {
        let map = |x: &Vec3| Vec3::new(x[0].exp() * x[1].cos(), x[0].exp() * x[1].sin(), x[2]);
        DeformationMap::new(map).with_jet(move |x| {
            let (e, c, s) = (x[0].exp(), x[1].cos(), x[1].sin());
            let grad = Matrix3::new(e * c, -e * s, 0.0, e * s, e * c, 0.0, 0.0, 0.0, 1.0);
            let h0 = Matrix3::new(e * c, -e * s, 0.0, -e * s, -e * c, 0.0, 0.0, 0.0, 0.0);
            let h1 = Matrix3::new(e * s, e * c, 0.0, e * c, -e * s, 0.0, 0.0, 0.0, 0.0);
            DeformationJet {
                value: map(x),
                grad,
                hess: [h0, h1, Matrix3::zeros()],
            }
        })
    }

    /// Unit-sphere patch in colatitude/longitude away from the poles.
    pub fn sphere_chart() -> SurfaceChart {
        let map = |t1: f64, t2: f64| Vec3::new(t1.sin() * t2.cos(), t1.sin() * t2.sin(), t1.cos());
        SurfaceChart::new(map, [(0.3, 2.8), (-3.0, 3.0)]).with_jet(move |t1, t2| {
            let (s1, c1, s2, c2) = (t1.sin(), t1.cos(), t2.sin(), t2.cos());
            ChartJet {
                value: map(t1, t2),
                d1: [Vec3::new(c1 * c2, c1 * s2, -s1), Vec3::new(-s1 * s2, s1 * c2, 0.0)],
                d2: [
                    [Vec3::new(-s1 * c2, -s1 * s2, -c1), Vec3::new(-c1 * s2, c1 * c2, 0.0)],
                    [Vec3::new(-c1 * s2, c1 * c2, 0.0), Vec3::new(-s1 * c2, -s1 * s2, 0.0)],
                ],
            }
        })
    }

    /// Smooth nonlinear deformation used in tests and demos:
    /// `chi = (X1 + a X2^2, X2 + a sin X1, X3 (1 + a X1))`.
    pub fn shear_deformation(a: f64) -> DeformationMap {
        let map = move |x: &Vec3| Vec3::new(x[0] + a * x[1] * x[1], x[1] + a * x[0].sin(), x[2] * (1.0 + a * x[0]));
        DeformationMap::new(map).with_jet(move |x| {
            let grad = Matrix3::new(
                1.0,
                2.0 * a * x[1],
                0.0,
                a * x[0].cos(),
                1.0,
                0.0,
                a * x[2],
                0.0,
                1.0 + a * x[0],
            );
            let mut h0 = Matrix3::zeros();
            h0[(1, 1)] = 2.0 * a;
            let mut h1 = Matrix3::zeros();
            h1[(0, 0)] = -a * x[0].sin();
            let mut h2 = Matrix3::zeros();
            h2[(0, 2)] = a;
            h2[(2, 0)] = a;
            DeformationJet {
                value: map(x),
                grad,
                hess: [h0, h1, h2],
            }
        })
    }

    /// Rotation about the axis `(1, 2, 3)` by `angle`.
    pub fn sample_rotation(angle: f64) -> Matrix3<f64> {
        let axis = nalgebra::Unit::new_normalize(Vec3::new(1.0, 2.0, 3.0));
        *nalgebra::Rotation3::from_axis_angle(&axis, angle).matrix()
    }
}
