//! Hamilton–Jacobi (cogeodesic) flows on `N` and `G`, dense geodesic curves,
//! the lift of `N`-geodesics to `G`-geodesics through the reparametrization
//! system, and a multiple-start shooting solver used as the independent
//! distance oracle.
//!
//! The Hamiltonians are
//!
//! ```text
//! Hᴺ(z, ζ) = ½ Σ_j ⟨X_j(z), ζ⟩²,
//! H(z, u, ζ, ν) = e^{2u} Hᴺ(z, ζ) + ν²/2,
//! ```
//!
//! with `X_j` the left-invariant horizontal frame. In exponential coordinates
//! of a step ≤ 2 group, `X_j(z) = e_j + ½ [z, e_j]`, so all derivatives of the
//! Hamiltonian are linear in the structure constants and the flows below are
//! exact ODE right-hand sides (no finite differencing).

use super::reparam::{reach_condition, reparam_solve, ReparamSolution};
use crate::{Error, GPoint, GroupModel, NPoint};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Cotangent state on `N`.
#[derive(Debug, Clone)]
pub struct HjStateN {
    pub z: NPoint,
    pub zeta: Vec<f64>,
}

/// Cotangent state on `G`.
#[derive(Debug, Clone)]
pub struct HjStateG {
    pub z: NPoint,
    pub u: f64,
    pub zeta: Vec<f64>,
    pub nu: f64,
}

/// Horizontal momenta `p_j = ⟨X_j(z), ζ⟩`.
fn horizontal_momenta(model: &GroupModel, z: &NPoint, zeta: &[f64]) -> Vec<f64> {
    model
        .horizontal_frame(z)
        .iter()
        .map(|xj| xj.iter().zip(zeta).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn hamiltonian_n(model: &GroupModel, s: &HjStateN) -> f64 {
    0.5 * horizontal_momenta(model, &s.z, &s.zeta)
        .iter()
        .map(|p| p * p)
        .sum::<f64>()
}

pub fn hamiltonian_g(model: &GroupModel, s: &HjStateG) -> f64 {
    let hn = hamiltonian_n(model, &HjStateN { z: s.z.clone(), zeta: s.zeta.clone() });
    (2.0 * s.u).exp() * hn + 0.5 * s.nu * s.nu
}

/// dH/dz_i = Σ_j p_j · ½ Σ_k c[i][j][k] ζ_k (first-layer i only).
fn dh_dz(model: &GroupModel, p: &[f64], zeta: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; model.dim];
    if model.step >= 2 {
        let h = model.horizontal_rank;
        for i in 0..h {
            let mut acc = 0.0;
            for (j, pj) in p.iter().enumerate().take(h) {
                let mut inner = 0.0;
                for k in 0..model.dim {
                    inner += model.structure_constants[i][j][k] * zeta[k];
                }
                acc += pj * 0.5 * inner;
            }
            out[i] = acc;
        }
    }
    out
}

fn rhs_n(model: &GroupModel, s: &[f64], out: &mut [f64]) {
    let d = model.dim;
    let z = NPoint::new(s[..d].to_vec());
    let zeta = &s[d..2 * d];
    let p = horizontal_momenta(model, &z, zeta);
    let frame = model.horizontal_frame(&z);
    for k in 0..d {
        out[k] = frame.iter().zip(&p).map(|(xj, pj)| pj * xj[k]).sum();
    }
    let dz = dh_dz(model, &p, zeta);
    for k in 0..d {
        out[d + k] = -dz[k];
    }
}

fn rhs_g(model: &GroupModel, s: &[f64], out: &mut [f64]) {
    let d = model.dim;
    let z = NPoint::new(s[..d].to_vec());
    let zeta = &s[d..2 * d];
    let u = s[2 * d];
    let nu = s[2 * d + 1];
    let e2u = (2.0 * u).exp();
    let p = horizontal_momenta(model, &z, zeta);
    let frame = model.horizontal_frame(&z);
    for k in 0..d {
        out[k] = e2u * frame.iter().zip(&p).map(|(xj, pj)| pj * xj[k]).sum::<f64>();
    }
    let dz = dh_dz(model, &p, zeta);
    for k in 0..d {
        out[d + k] = -e2u * dz[k];
    }
    let two_hn: f64 = p.iter().map(|pj| pj * pj).sum();
    out[2 * d] = nu;
    out[2 * d + 1] = -e2u * two_hn;
}

fn rk4<F: Fn(&[f64], &mut [f64])>(rhs: F, state: &mut [f64], t_total: f64, steps: usize) {
    let n = state.len();
    let h = t_total / steps as f64;
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for _ in 0..steps {
        rhs(state, &mut k1);
        for i in 0..n {
            tmp[i] = state[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = state[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = state[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..n {
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}

/// Integrate the HJ system on `G` from `s0` for time `t` with `steps` RK4 steps.
pub fn hj_flow_g(model: &GroupModel, s0: &HjStateG, t: f64, steps: usize) -> Result<HjStateG, Error> {
    if steps == 0 {
        return Err(Error::invalid("steps must be >= 1"));
    }
    if !(t / steps as f64).is_finite() || (t != 0.0 && (t / steps as f64).abs() < 1e-300) {
        return Err(Error::invalid("step size underflow"));
    }
    let d = model.dim;
    let mut state = Vec::with_capacity(2 * d + 2);
    state.extend_from_slice(&s0.z.coords);
    state.extend_from_slice(&s0.zeta);
    state.push(s0.u);
    state.push(s0.nu);
    rk4(|s, o| rhs_g(model, s, o), &mut state, t, steps);
    Ok(HjStateG {
        z: NPoint::new(state[..d].to_vec()),
        zeta: state[d..2 * d].to_vec(),
        u: state[2 * d],
        nu: state[2 * d + 1],
    })
}

/// Integrate the HJ system on `N` from `s0` for time `t`.
pub fn hj_flow_n(model: &GroupModel, s0: &HjStateN, t: f64, steps: usize) -> Result<HjStateN, Error> {
    if steps == 0 {
        return Err(Error::invalid("steps must be >= 1"));
    }
    let d = model.dim;
    let mut state = Vec::with_capacity(2 * d);
    state.extend_from_slice(&s0.z.coords);
    state.extend_from_slice(&s0.zeta);
    rk4(|s, o| rhs_n(model, s, o), &mut state, t, steps);
    Ok(HjStateN {
        z: NPoint::new(state[..d].to_vec()),
        zeta: state[d..2 * d].to_vec(),
    })
}

/// A densely sampled HJ-curve on `N` over `[0, T]`, queryable at any parameter
/// by cubic Hermite interpolation (positions and exact derivatives are stored
/// at uniform nodes).
#[derive(Debug, Clone)]
pub struct HjCurveN {
    pub model: GroupModel,
    pub t_end: f64,
    samples: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
}

impl HjCurveN {
    pub fn integrate(model: &GroupModel, s0: &HjStateN, t_end: f64, nodes: usize) -> Self {
        let d = model.dim;
        let mut state = Vec::with_capacity(2 * d);
        state.extend_from_slice(&s0.z.coords);
        state.extend_from_slice(&s0.zeta);
        let mut samples = Vec::with_capacity(nodes + 1);
        let mut derivs = Vec::with_capacity(nodes + 1);
        let mut der = vec![0.0; 2 * d];
        rhs_n(model, &state, &mut der);
        samples.push(state.clone());
        derivs.push(der.clone());
        // 4 RK4 substeps between stored nodes keeps the node values at O(h^4)
        // with h far below the interpolation spacing
        for _ in 0..nodes {
            rk4(|s, o| rhs_n(model, s, o), &mut state, t_end / nodes as f64, 4);
            rhs_n(model, &state, &mut der);
            samples.push(state.clone());
            derivs.push(der.clone());
        }
        HjCurveN { model: model.clone(), t_end, samples, derivs }
    }

    /// Constant value of the Hamiltonian along the curve.
    pub fn h0n(&self) -> f64 {
        let d = self.model.dim;
        hamiltonian_n(
            &self.model,
            &HjStateN {
                z: NPoint::new(self.samples[0][..d].to_vec()),
                zeta: self.samples[0][d..].to_vec(),
            },
        )
    }

    pub fn state(&self, t: f64) -> HjStateN {
        let d = self.model.dim;
        let n = self.samples.len() - 1;
        let h = self.t_end / n as f64;
        let pos = (t / h).clamp(0.0, n as f64 - 1e-12);
        let i = pos.floor() as usize;
        let s = pos - i as f64;
        let (s2, s3) = (s * s, s * s * s);
        // cubic Hermite basis
        let (h00, h10, h01, h11) = (
            2.0 * s3 - 3.0 * s2 + 1.0,
            s3 - 2.0 * s2 + s,
            -2.0 * s3 + 3.0 * s2,
            s3 - s2,
        );
        let mut out = vec![0.0; 2 * d];
        for k in 0..2 * d {
            out[k] = h00 * self.samples[i][k]
                + h10 * h * self.derivs[i][k]
                + h01 * self.samples[i + 1][k]
                + h11 * h * self.derivs[i + 1][k];
        }
        HjStateN { z: NPoint::new(out[..d].to_vec()), zeta: out[d..].to_vec() }
    }

    /// Max residual of the HJ equations along the curve, by central differences
    /// at interior probe points.
    pub fn hj_residual(&self) -> f64 {
        let d = self.model.dim;
        let eps = self.t_end * 1e-5;
        let mut worst: f64 = 0.0;
        for i in 1..20 {
            let t = self.t_end * i as f64 / 20.0;
            if t - eps < 0.0 || t + eps > self.t_end {
                continue;
            }
            let sm = self.state(t - eps);
            let sp = self.state(t + eps);
            let sc = self.state(t);
            let mut want = vec![0.0; 2 * d];
            let mut cur = Vec::with_capacity(2 * d);
            cur.extend_from_slice(&sc.z.coords);
            cur.extend_from_slice(&sc.zeta);
            rhs_n(&self.model, &cur, &mut want);
            for k in 0..d {
                let fd = (sp.z.coords[k] - sm.z.coords[k]) / (2.0 * eps);
                worst = worst.max((fd - want[k]).abs());
                let fdz = (sp.zeta[k] - sm.zeta[k]) / (2.0 * eps);
                worst = worst.max((fdz - want[d + k]).abs());
            }
        }
        worst
    }

    /// Length of the projected curve: constant speed `√(2 H₀ᴺ)` over `[0, T]`.
    pub fn length(&self) -> f64 {
        (2.0 * self.h0n()).sqrt() * self.t_end
    }
}

/// An HJ-curve on `G` obtained by lifting an `N`-curve through the
/// reparametrization system; defined on `[0, tau]`.
#[derive(Debug, Clone)]
pub struct LiftedCurveG {
    pub n_curve: HjCurveN,
    pub reparam: ReparamSolution,
    pub tau: f64,
    pub u0: f64,
    pub u1: f64,
}

impl LiftedCurveG {
    pub fn state(&self, t: f64) -> HjStateG {
        let v = self.reparam.v(t);
        let n = self.n_curve.state(v);
        HjStateG { z: n.z, u: self.reparam.u(t), zeta: n.zeta, nu: self.reparam.nu(t) }
    }

    /// Length of the lifted curve: `tau · √(2H₀)` with
    /// `H₀ = e^{2u₀} H₀ᴺ + ν₀²/2`.
    pub fn length(&self) -> f64 {
        let h0 = (2.0 * self.u0).exp() * self.n_curve.h0n()
            + 0.5 * self.reparam.nu(0.0).powi(2);
        self.tau * (2.0 * h0).sqrt()
    }

    /// Residual of the G-level HJ equations along the lift (central differences).
    pub fn hj_residual(&self, model: &GroupModel) -> f64 {
        let d = model.dim;
        let eps = self.tau * 1e-5;
        let mut worst: f64 = 0.0;
        for i in 1..20 {
            let t = self.tau * i as f64 / 20.0;
            if t - eps < 0.0 || t + eps > self.tau {
                continue;
            }
            let sm = self.state(t - eps);
            let sp = self.state(t + eps);
            let sc = self.state(t);
            let mut cur = Vec::with_capacity(2 * d + 2);
            cur.extend_from_slice(&sc.z.coords);
            cur.extend_from_slice(&sc.zeta);
            cur.push(sc.u);
            cur.push(sc.nu);
            let mut want = vec![0.0; 2 * d + 2];
            rhs_g(model, &cur, &mut want);
            for k in 0..d {
                worst = worst.max(((sp.z.coords[k] - sm.z.coords[k]) / (2.0 * eps) - want[k]).abs());
                worst = worst.max(((sp.zeta[k] - sm.zeta[k]) / (2.0 * eps) - want[d + k]).abs());
            }
            worst = worst.max(((sp.u - sm.u) / (2.0 * eps) - want[2 * d]).abs());
            worst = worst.max(((sp.nu - sm.nu) / (2.0 * eps) - want[2 * d + 1]).abs());
        }
        worst
    }
}

/// Lift an HJ-curve on `N` over `[0, T]` to an HJ-curve on `G` joining
/// `(z(0), u0)` to `(z(T), u1)`.
pub fn lift_geodesic(
    _model: &GroupModel,
    n_curve: &HjCurveN,
    u0: f64,
    u1: f64,
) -> Result<LiftedCurveG, Error> {
    let res = n_curve.hj_residual();
    if res > 1e-5 {
        return Err(Error::convergence("N-curve HJ residual", res));
    }
    let h0n = n_curve.h0n();
    let nu0 = reach_condition(u0, u1, n_curve.t_end, h0n);
    let reparam = reparam_solve(u0, nu0, h0n)?;
    let tau = reparam.v_inverse(n_curve.t_end)?;
    Ok(LiftedCurveG { n_curve: n_curve.clone(), reparam, tau, u0, u1 })
}

/// Outcome of the multiple-start shooting oracle.
#[derive(Debug, Clone)]
pub struct ShootingResult {
    /// Shortest converged geodesic length.
    pub length: f64,
    /// Endpoint residual of the accepted solution.
    pub residual: f64,
    /// Number of Newton starts consumed.
    pub starts_used: usize,
}

/// Boundary-value distance oracle on `G`: find an initial covector whose
/// time-1 HJ flow hits `target`, by damped Newton with a finite-difference
/// Jacobian and up to `max_starts` seeded starts; the shortest converged
/// solution is returned. Purely an oracle for the closed-form distance.
pub fn shoot_distance_g(
    model: &GroupModel,
    target: &GPoint,
    seed: u64,
    max_starts: usize,
) -> Result<ShootingResult, Error> {
    let d = model.dim;
    let n_unknown = d + 1;
    let steps = 1200;
    let flow_end = |p: &[f64]| -> Vec<f64> {
        let s0 = HjStateG {
            z: model.n_zero(),
            zeta: p[..d].to_vec(),
            u: 0.0,
            nu: p[d],
        };
        let s1 = hj_flow_g(model, &s0, 1.0, steps).expect("flow");
        let mut out = s1.z.coords;
        out.push(s1.u);
        out
    };
    let mut want = target.z.coords.clone();
    want.push(target.u);
    let scale = 1.0 + want.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-9 * scale;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, f64)> = None;
    let mut starts_used = 0;

    // deterministic smart start from the lift of the straight/closed-form
    // N-geodesic, followed by random covectors of increasing spread
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(p) = smart_start(model, target) {
        starts.push(p);
    }
    while starts.len() < max_starts {
        let spread = 0.5 + 3.0 * (starts.len() as f64 / max_starts as f64);
        starts.push((0..n_unknown).map(|_| rng.gen_range(-spread..spread)).collect());
    }

    for p0 in starts {
        starts_used += 1;
        let mut p = p0;
        let mut converged = false;
        for _ in 0..60 {
            let end = flow_end(&p);
            let f: Vec<f64> = end.iter().zip(&want).map(|(a, b)| a - b).collect();
            let fnorm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            if fnorm < tol {
                converged = true;
                break;
            }
            // forward-difference Jacobian
            let mut jac = vec![vec![0.0; n_unknown]; n_unknown];
            let h = 1e-6 * (1.0 + p.iter().map(|v| v.abs()).fold(0.0, f64::max));
            for j in 0..n_unknown {
                let mut pj = p.clone();
                pj[j] += h;
                let ej = flow_end(&pj);
                for i in 0..n_unknown {
                    jac[i][j] = (ej[i] - end[i]) / h;
                }
            }
            match solve_linear(&mut jac, &f) {
                Some(step) => {
                    let cap = 4.0;
                    let norm = step.iter().map(|v| v * v).sum::<f64>().sqrt();
                    let damp = if norm > cap { cap / norm } else { 1.0 };
                    for j in 0..n_unknown {
                        p[j] -= damp * step[j];
                    }
                }
                None => break,
            }
        }
        if converged {
            let s0 = HjStateG {
                z: model.n_zero(),
                zeta: p[..d].to_vec(),
                u: 0.0,
                nu: p[d],
            };
            let h = hamiltonian_g(model, &s0);
            let len = (2.0 * h).sqrt();
            let end = flow_end(&p);
            let res = end
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if best.map_or(true, |(l, _)| len < l) {
                best = Some((len, res));
            }
            // geodesics on these spaces are unique once one is found near the
            // smart start; a couple of confirmations suffice
            if starts_used >= 3 {
                break;
            }
        }
    }

    match best {
        Some((length, residual)) => Ok(ShootingResult { length, residual, starts_used }),
        None => Err(Error::convergence(
            format!("shooting to ({:?}, {}) failed after {max_starts} starts", target.z, target.u),
            f64::NAN,
        )),
    }
}

/// Initial covector guess: lift the straight-line abelian N-geodesic (or the
/// vertical A-line), rescaled so the lifted curve is traversed in unit time.
fn smart_start(model: &GroupModel, target: &GPoint) -> Option<Vec<f64>> {
    let d = model.dim;
    let zn = target.z.euclidean_norm();
    if zn < 1e-12 {
        let mut p = vec![0.0; d + 1];
        p[d] = target.u;
        return Some(p);
    }
    let h0n = zn * zn / 2.0;
    let nu0 = reach_condition(0.0, target.u, 1.0, h0n);
    let sol = reparam_solve(0.0, nu0, h0n).ok()?;
    let tau = sol.v_inverse(1.0).ok()?;
    let mut p: Vec<f64> = target.z.coords.iter().map(|c| c * tau).collect();
    p.push(nu0 * tau);
    Some(p)
}

/// Gaussian elimination with partial pivoting; `None` on (near-)singularity.
fn solve_linear(a: &mut [Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        x[col] /= a[col][col];
        for row in 0..col {
            x[row] -= a[row][col] * x[col];
        }
    }
    Some(x)
}
