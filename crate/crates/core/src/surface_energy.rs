//! Quadratic surface energies and their resultants.
//!
//! Indices on `E`, `K` and on the last two slots of `L` are raised with the
//! reference metric `G`; the free slot of `L` is contracted with the inverse
//! convected metric `g^{-1}`.

use nalgebra::{Matrix2, Matrix3};

use crate::error::{Error, Result};
use crate::kinematics::{DeformationMap, SurfaceChart, SurfaceState, Tensor3, Vec3};

/// Surface and bulk moduli.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnergyModuli {
    pub lambda_s: f64,
    pub mu_s: f64,
    pub zeta: f64,
    pub eta: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl EnergyModuli {
    pub fn new(lambda_s: f64, mu_s: f64, zeta: f64, eta: f64, lambda: f64, mu: f64) -> Result<Self> {
        let m = Self {
            lambda_s,
            mu_s,
            zeta,
            eta,
            lambda,
            mu,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("mu_s", self.mu_s), ("zeta", self.zeta), ("eta", self.eta), ("mu", self.mu)];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Parameter {
                    name,
                    value,
                    reason: "must be positive",
                });
            }
        }
        for (name, value) in [("lambda_s", self.lambda_s), ("lambda", self.lambda)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::Parameter {
                    name,
                    value,
                    reason: "must be nonnegative",
                });
            }
        }
        Ok(())
    }
}

/// Which quadratic surface energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Model {
    /// Strain-gradient form with geodesic-distortion terms.
    HilgersPipkin,
    /// Bending through the relative curvature only.
    SteigmannOgden,
}

fn inv2(m: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    m.try_inverse().ok_or(Error::SingularChart {
        theta1: f64::NAN,
        theta2: f64::NAN,
        rcond: 0.0,
    })
}

/// `A_ab A^ab` with indices raised by `ginv`.
fn contract2(a: &Matrix2<f64>, ginv: &Matrix2<f64>) -> f64 {
    (ginv * a * ginv * a.transpose()).trace()
}

/// `g^{mn} L_m.. L_n..` pieces: the trace part `L_m a^a` and the full part.
fn distortion_terms(l: &Tensor3, ref_inv: &Matrix2<f64>, def_inv: &Matrix2<f64>) -> (f64, f64) {
    let mut trace = [0.0; 2];
    for (m, tm) in trace.iter_mut().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                *tm += l[m][a][b] * ref_inv[(a, b)];
            }
        }
    }
    let mut tr_part = 0.0;
    let mut full = 0.0;
    for m in 0..2 {
        for n in 0..2 {
            tr_part += def_inv[(m, n)] * trace[m] * trace[n];
            let lm = Matrix2::from_fn(|a, b| l[m][a][b]);
            let ln = Matrix2::from_fn(|a, b| l[n][a][b]);
            full += def_inv[(m, n)] * (ref_inv * lm * ref_inv * ln.transpose()).trace();
        }
    }
    (tr_part, full)
}

/// Energy density from the tensors themselves.
pub fn energy_from_tensors(
    model: Model,
    moduli: &EnergyModuli,
    metric_ref: &Matrix2<f64>,
    metric: &Matrix2<f64>,
    stretch: &Matrix2<f64>,
    curvature: &Matrix2<f64>,
    distortion: &Tensor3,
) -> Result<f64> {
    let gi = inv2(metric_ref)?;
    let tr_e = (gi * stretch).trace();
    let tr_k = (gi * curvature).trace();
    let membrane = 0.5 * moduli.lambda_s * tr_e * tr_e + moduli.mu_s * contract2(stretch, &gi);
    let kk = contract2(curvature, &gi);
    let bending = match model {
        Model::SteigmannOgden => 0.5 * moduli.zeta * tr_k * tr_k + moduli.eta * kk,
        Model::HilgersPipkin => {
            let (l_tr, l_full) = distortion_terms(distortion, &gi, &inv2(metric)?);
            0.5 * moduli.zeta * (tr_k * tr_k + l_tr) + moduli.eta * (kk + l_full)
        }
    };
    Ok(membrane + bending)
}

/// Hilgers–Pipkin density at a surface state.
pub fn energy_hp(state: &SurfaceState, moduli: &EnergyModuli) -> Result<f64> {
    energy_from_state(Model::HilgersPipkin, state, moduli)
}

/// Steigmann–Ogden density at a surface state.
pub fn energy_so(state: &SurfaceState, moduli: &EnergyModuli) -> Result<f64> {
    energy_from_state(Model::SteigmannOgden, state, moduli)
}

pub fn energy_from_state(model: Model, state: &SurfaceState, moduli: &EnergyModuli) -> Result<f64> {
    energy_from_tensors(
        model,
        moduli,
        &state.metric_ref,
        &state.metric,
        &state.stretch,
        &state.curvature,
        &state.distortion,
    )
}

/// Hilgers–Pipkin density on a flat chart directly from the deformed jet,
/// `lambda_s/2 (tr E)^2 + mu_s |E|^2 + zeta/2 |sum y_,aa|^2 + eta sum |y_,ab|^2`.
/// The four second partials are treated as independent.
pub fn energy_hp_flat_jet(d1: &[Vec3; 2], d2: &[[Vec3; 2]; 2], moduli: &EnergyModuli) -> f64 {
    let e = Matrix2::from_fn(|a, b| 0.5 * (d1[a].dot(&d1[b]) - if a == b { 1.0 } else { 0.0 }));
    let tr = e.trace();
    let lap = d2[0][0] + d2[1][1];
    let sq: f64 = d2.iter().flatten().map(|v| v.norm_squared()).sum();
    0.5 * moduli.lambda_s * tr * tr + moduli.mu_s * e.norm_squared() + 0.5 * moduli.zeta * lap.norm_squared() + moduli.eta * sq
}

/// Stress resultants `T^a` and couple resultants `M^ab` (3-vectors).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressResultants {
    pub t: [Vec3; 2],
    pub m: [[Vec3; 2]; 2],
}

/// Flat-chart Hilgers–Pipkin resultants:
/// `T^a = (lambda_s tr E delta^ab + 2 mu_s E^ab) y_,b`,
/// `M^ab = zeta (sum y_,cc) delta^ab + 2 eta y_,ab`.
pub fn stress_resultants_hp_flat(d1: &[Vec3; 2], d2: &[[Vec3; 2]; 2], moduli: &EnergyModuli) -> StressResultants {
    let e = Matrix2::from_fn(|a, b| 0.5 * (d1[a].dot(&d1[b]) - if a == b { 1.0 } else { 0.0 }));
    let tr = e.trace();
    let lap = d2[0][0] + d2[1][1];
    let mut t = [Vec3::zeros(); 2];
    let mut m = [[Vec3::zeros(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let s = if a == b { moduli.lambda_s * tr } else { 0.0 } + 2.0 * moduli.mu_s * e[(a, b)];
            t[a] += s * d1[b];
            m[a][b] = 2.0 * moduli.eta * d2[a][b] + if a == b { moduli.zeta * lap } else { Vec3::zeros() };
        }
    }
    StressResultants { t, m }
}

/// Linearised flat-chart resultants for a displacement with partials
/// `u_,a` and `u_,ab` on a flat reference frame `Y_,a`.
pub fn stress_resultants_linearized_flat(
    frame_ref: &[Vec3; 2],
    u_d1: &[Vec3; 2],
    u_d2: &[[Vec3; 2]; 2],
    moduli: &EnergyModuli,
) -> StressResultants {
    let eps = Matrix2::from_fn(|a, b| 0.5 * (frame_ref[a].dot(&u_d1[b]) + frame_ref[b].dot(&u_d1[a])));
    let tr = eps.trace();
    let lap = u_d2[0][0] + u_d2[1][1];
    let mut t = [Vec3::zeros(); 2];
    let mut m = [[Vec3::zeros(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let s = if a == b { moduli.lambda_s * tr } else { 0.0 } + 2.0 * moduli.mu_s * eps[(a, b)];
            t[a] += s * frame_ref[b];
            m[a][b] = 2.0 * moduli.eta * u_d2[a][b] + if a == b { moduli.zeta * lap } else { Vec3::zeros() };
        }
    }
    StressResultants { t, m }
}

/// Closed-form ellipticity quadratic form
/// `a_a a_b b . C^{abdc} a_d a_c b`.
pub fn ellipticity_form(
    moduli: &EnergyModuli,
    metric_ref: &Matrix2<f64>,
    normal: &Vec3,
    a: [f64; 2],
    b: &Vec3,
    model: Model,
) -> Result<f64> {
    let gi = inv2(metric_ref)?;
    let av = nalgebra::Vector2::new(a[0], a[1]);
    let q = av.dot(&(gi * av));
    let bb = match model {
        Model::HilgersPipkin => b.norm_squared(),
        Model::SteigmannOgden => normal.dot(b).powi(2),
    };
    Ok((moduli.zeta + 2.0 * moduli.eta) * q * q * bb)
}

/// The same form by explicit contraction of the fourth-order moduli
/// `C^{abmn} = (zeta G^ab G^mn + eta (G^am G^bn + G^an G^bm)) P` with
/// `P = I` (HP) or `n ⊗ n` (SO).
pub fn ellipticity_contraction(
    moduli: &EnergyModuli,
    metric_ref: &Matrix2<f64>,
    normal: &Vec3,
    a: [f64; 2],
    b: &Vec3,
    model: Model,
) -> Result<f64> {
    let gi = inv2(metric_ref)?;
    let p: Matrix3<f64> = match model {
        Model::HilgersPipkin => Matrix3::identity(),
        Model::SteigmannOgden => normal * normal.transpose(),
    };
    let bpb = b.dot(&(p * b));
    let mut s = 0.0;
    for al in 0..2 {
        for be in 0..2 {
            for mu in 0..2 {
                for nu in 0..2 {
                    let c = moduli.zeta * gi[(al, be)] * gi[(mu, nu)]
                        + moduli.eta * (gi[(al, mu)] * gi[(be, nu)] + gi[(al, nu)] * gi[(be, mu)]);
                    s += a[al] * a[be] * c * a[mu] * a[nu];
                }
            }
        }
    }
    Ok(s * bpb)
}

/// Linearised strain measures of a displacement at a chart point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedSurfaceStrain {
    pub eps: Matrix2<f64>,
    pub k: Matrix2<f64>,
    pub l: Tensor3,
    /// Reference metric used to raise indices.
    pub metric_ref: Matrix2<f64>,
}

/// `eps_ab = (Y_,a . u_,b + Y_,b . u_,a)/2`, `k_ab = N . u_;ab`,
/// `l_abd = Y_,a . u_;bd + (N . u_,a) B_bd`, where `u` is a displacement
/// field on 3-space given through its jet (value, gradient, Hessians).
pub fn linearized_strains(chart: &SurfaceChart, u: &DeformationMap, theta: [f64; 2]) -> Result<LinearizedSurfaceStrain> {
    let cj = chart.jet(theta[0], theta[1]);
    let uj = u.jet(&cj.value);
    let reference = SurfaceState::from_jets(theta, cj.d1, cj.d2, cj.d1, cj.d2)?;
    let gamma = reference.christoffel_ref;
    let normal = reference.normal_ref;
    let ud1 = [uj.grad * cj.d1[0], uj.grad * cj.d1[1]];
    let mut ucov = [[Vec3::zeros(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let raw = uj.grad * cj.d2[a][b] + uj.hess_apply(&cj.d1[a], &cj.d1[b]);
            ucov[a][b] = raw - ud1[0] * gamma[0][a][b] - ud1[1] * gamma[1][a][b];
        }
    }
    let eps = Matrix2::from_fn(|a, b| 0.5 * (cj.d1[a].dot(&ud1[b]) + cj.d1[b].dot(&ud1[a])));
    let k = Matrix2::from_fn(|a, b| normal.dot(&ucov[a][b]));
    let mut l = [[[0.0; 2]; 2]; 2];
    for (a, la) in l.iter_mut().enumerate() {
        for b in 0..2 {
            for d in 0..2 {
                la[b][d] = cj.d1[a].dot(&ucov[b][d]) + normal.dot(&ud1[a]) * reference.second_form_ref[(b, d)];
            }
        }
    }
    Ok(LinearizedSurfaceStrain {
        eps,
        k,
        l,
        metric_ref: reference.metric_ref,
    })
}

/// Quadratic surface integrand of the linearised energy, all indices
/// raised with `G`.
pub fn energy_quadratic_linearized(strain: &LinearizedSurfaceStrain, moduli: &EnergyModuli) -> Result<f64> {
    energy_from_tensors(
        Model::HilgersPipkin,
        moduli,
        &strain.metric_ref,
        &strain.metric_ref,
        &strain.eps,
        &strain.k,
        &strain.l,
    )
}

/// Rotates every tangent slot: `E -> R E R^T`, `K -> R K R^T`,
/// `L_abc -> R_ai R_bj R_ck L_ijk`.
pub fn rotate_tensors(
    r: &Matrix2<f64>,
    stretch: &Matrix2<f64>,
    curvature: &Matrix2<f64>,
    distortion: &Tensor3,
) -> (Matrix2<f64>, Matrix2<f64>, Tensor3) {
    let mut l = [[[0.0; 2]; 2]; 2];
    for (a, la) in l.iter_mut().enumerate() {
        for (b, lab) in la.iter_mut().enumerate() {
            for (c, labc) in lab.iter_mut().enumerate() {
                let mut s = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            s += r[(a, i)] * r[(b, j)] * r[(c, k)] * distortion[i][j][k];
                        }
                    }
                }
                *labc = s;
            }
        }
    }
    (r * stretch * r.transpose(), r * curvature * r.transpose(), l)
}
