//! Heat kernel on `G` through the subordination formula.
//!
//! For abelian `N = ℝ^Q` the heat kernel of the sub-Laplacian factors through
//! the Euclidean kernel `hᴺ_s(z) = (4πs)^{-Q/2} e^{-|z|²/4s}`:
//!
//! ```text
//! h_t(z, u) = ∫₀^∞ Ψ_t(ξ) e^{-cosh u / ξ} hᴺ_{e^u ξ/2}(z) dξ,
//! Ψ_t(ξ) = ξ^{-2} (4π³t)^{-1/2} e^{π²/4t}
//!          ∫₀^∞ sinh θ sin(πθ/2t) e^{-θ²/4t - cosh θ/ξ} dθ.
//! ```
//!
//! The θ-integrand carries an exact leading-order cancellation — the full
//! Gaussian integral of `sinh θ sin(πθ/2t)` vanishes because the `sin`
//! frequency is tuned to `π/2t` — so the oscillatory piece is evaluated on a
//! dense Gauss–Legendre composite with generous truncation and the large-ξ
//! noise floor is kept harmless by the `ξ^{-2}` damping. The prefactor
//! `e^{π²/4t}` makes the regime `t < 1/4` numerically hostile; evaluation is
//! refused below [`T_MIN`].
//!
//! Structural consequences used throughout: `m^{-1/2} h_t` is radial, the
//! u-marginal `∫ h_t dz` is the 1-D Gaussian `(4πt)^{-1/2} e^{-u²/4t}`, and
//! for `Q = 2` the kernel has the hyperbolic-space closed form
//! `h_t = m^{1/2} e^t p_t^{H³}(ϱ)` with
//! `p_t^{H³}(r) = (4πt)^{-3/2} (r/sinh r) e^{-t - r²/4t}` — the strongest
//! single correctness check for the quadrature.

use crate::quad::{arccosh1p, gamma_half_int, GlRule};
use crate::{Error, GPoint, GroupKind, GroupModel};
use rayon::prelude::*;

/// Smallest supported time: below this the `e^{π²/4t}`-amplified oscillatory
/// integral loses too many digits in f64.
pub const T_MIN: f64 = 0.25;

/// The subordination weight `Ψ_t(ξ)` by direct quadrature.
pub fn psi_t(t: f64, xi: f64) -> Result<f64, Error> {
    if t < T_MIN {
        return Err(Error::invalid(format!(
            "t = {t} below the supported minimum {T_MIN} (oscillatory regime)"
        )));
    }
    if !(xi > 0.0) {
        return Err(Error::invalid("xi must be positive"));
    }
    let rule = GlRule::new(32);
    let big_l = 45.0;
    let theta_max = 2.0 * t + 2.0 * (t * (big_l + t)).sqrt() + 5.0;
    let panel = t.min(1.0);
    let panels = (theta_max / panel).ceil() as usize;
    let integral = rule.integrate_panels(0.0, theta_max, panels, |th| {
        theta_integrand(t, xi, th)
    });
    let pref = (std::f64::consts::PI.powi(2) / (4.0 * t)).exp()
        / (4.0 * std::f64::consts::PI.powi(3) * t).sqrt();
    Ok(pref * integral / (xi * xi))
}

fn theta_integrand(t: f64, xi: f64, th: f64) -> f64 {
    if th <= 0.0 {
        return 0.0;
    }
    // sinh(th) e^{-th^2/4t - cosh th/xi} computed in log space
    let one_minus = -(-(2.0 * th)).exp_m1(); // 1 - e^{-2 th}
    let ln_env = th - th * th / (4.0 * t) - th.cosh() / xi + one_minus.ln()
        - std::f64::consts::LN_2;
    if ln_env < -745.0 {
        return 0.0;
    }
    ln_env.exp() * (std::f64::consts::PI * th / (2.0 * t)).sin()
}

/// Gradient of the heat kernel at a point, in the horizontal frame:
/// `components[0] = X₀ h_t`, `components[j] = X_j h_t`.
#[derive(Debug, Clone)]
pub struct HorizontalGradient {
    pub components: Vec<f64>,
}

impl HorizontalGradient {
    /// `|∇_H f|_g = (Σ_j |X_j f|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Heat kernel evaluator for one time `t ≥ T_MIN` on an abelian model.
///
/// The ξ-nodes (log-scale composite Gauss–Legendre) and the values of
/// `Ψ_t` at them are cached at construction; point evaluations are then
/// single sums over the nodes.
#[derive(Debug, Clone)]
pub struct HeatEvaluator {
    pub q: u32,
    pub t: f64,
    pub rel_tol: f64,
    /// Largest |u| the cached ξ-range supports.
    pub u_max: f64,
    xi: Vec<f64>,
    /// Quadrature weight times `Ψ_t(ξ)` per node.
    wpsi: Vec<f64>,
}

impl HeatEvaluator {
    pub fn new(model: &GroupModel, t: f64, rel_tol: f64) -> Result<Self, Error> {
        let u_max = (4.0 * t * 34.0).sqrt() + 8.0;
        Self::with_u_range(model, t, rel_tol, u_max)
    }

    /// Evaluator valid for `|u| ≤ u_max` (the ξ-grid must reach past
    /// `cosh u` for the weight `e^{-cosh u/ξ}` to be resolved).
    pub fn with_u_range(model: &GroupModel, t: f64, rel_tol: f64, u_max: f64) -> Result<Self, Error> {
        if !matches!(model.kind, GroupKind::Abelian { .. }) {
            return Err(Error::invalid(
                "heat evaluation is abelian-only (L2-level quantities do not depend on N)",
            ));
        }
        if t < T_MIN {
            return Err(Error::invalid(format!(
                "t = {t} below the supported minimum {T_MIN}"
            )));
        }
        let q = model.homogeneous_dim;
        // log-scale xi range: left end kills e^{-1/xi}; right end covers both
        // the subordination-density tail and cosh(u_max)
        let y_lo = -8.0f64;
        let y_hi = (2.0 * (t * (50.0 + t)).sqrt()).max(u_max + 5.0) + 2.0;
        let rule = GlRule::new(16);
        let panels = ((y_hi - y_lo).ceil() as usize).max(8);
        let (ys, wys) = rule.panel_nodes(y_lo, y_hi, panels);
        let xi: Vec<f64> = ys.iter().map(|y| y.exp()).collect();
        // theta quadrature shared by all xi nodes
        let big_l = 45.0;
        let theta_max = 2.0 * t + 2.0 * (t * (big_l + t)).sqrt() + 5.0;
        let tpanel = t.min(1.0);
        let tpanels = (theta_max / tpanel).ceil() as usize;
        let trule = GlRule::new(32);
        let (ths, wths) = trule.panel_nodes(0.0, theta_max, tpanels);
        let pref = (std::f64::consts::PI.powi(2) / (4.0 * t)).exp()
            / (4.0 * std::f64::consts::PI.powi(3) * t).sqrt();
        let wpsi: Vec<f64> = xi
            .par_iter()
            .zip(wys.par_iter())
            .map(|(&x, &wy)| {
                let mut acc = 0.0;
                for (&th, &wth) in ths.iter().zip(&wths) {
                    acc += wth * theta_integrand(t, x, th);
                }
                // d xi = xi dy and Psi carries xi^{-2}
                wy * x * pref * acc / (x * x)
            })
            .collect();
        Ok(HeatEvaluator { q, t, rel_tol, u_max, xi, wpsi })
    }

    /// `h_t(z, u)` for `|z|² = z_norm2`.
    pub fn kernel_radial(&self, z_norm2: f64, u: f64) -> f64 {
        let cu = u.cosh();
        let mut acc = 0.0;
        for (&xi, &wp) in self.xi.iter().zip(&self.wpsi) {
            let e = cu / xi;
            if e > 700.0 {
                continue;
            }
            let s = u.exp() * xi / 2.0;
            let expo = -e - z_norm2 / (4.0 * s);
            if expo < -700.0 {
                continue;
            }
            let hn = (4.0 * std::f64::consts::PI * s).powf(-(self.q as f64) / 2.0);
            acc += wp * expo.exp() * hn;
        }
        acc.max(0.0)
    }

    pub fn kernel(&self, x: &GPoint) -> f64 {
        let z2: f64 = x.z.coords.iter().map(|c| c * c).sum();
        self.kernel_radial(z2, x.u)
    }

    /// Horizontal gradient `(X₀ h_t, X₁ h_t, …)` at `(z, u)`, differentiating
    /// under the ξ-integral: `X_j = e^u ∂_{z_j}` hits the Gaussian factor and
    /// `X₀ = ∂_u` splits into the `-sinh u/ξ` term plus
    /// `∂_u[hᴺ_{e^u ξ/2}] = (−Q/2 + |z|²/4s) hᴺ_s`.
    pub fn gradient(&self, x: &GPoint) -> HorizontalGradient {
        let z2: f64 = x.z.coords.iter().map(|c| c * c).sum();
        let u = x.u;
        let cu = u.cosh();
        let su = u.sinh();
        let mut comps = vec![0.0; 1 + self.q as usize];
        for (&xi, &wp) in self.xi.iter().zip(&self.wpsi) {
            let e = cu / xi;
            if e > 700.0 {
                continue;
            }
            let s = u.exp() * xi / 2.0;
            let expo = -e - z2 / (4.0 * s);
            if expo < -700.0 {
                continue;
            }
            let hn = (4.0 * std::f64::consts::PI * s).powf(-(self.q as f64) / 2.0);
            let base = wp * expo.exp() * hn;
            comps[0] += base * (-su / xi - self.q as f64 / 2.0 + z2 / (4.0 * s));
            for j in 0..self.q as usize {
                comps[1 + j] += base * (u.exp() * (-x.z.coords[j] / (2.0 * s)));
            }
        }
        HorizontalGradient { components: comps }
    }

    /// u-marginal `∫_N h_t(z, u) dz = ∫ Ψ_t(ξ) e^{-cosh u/ξ} dξ`; equals the
    /// 1-D Gaussian `(4πt)^{-1/2} e^{-u²/4t}` (the A-projection of the heat
    /// semigroup) and is the sharpest scalar probe of the Ψ normalization.
    pub fn u_marginal(&self, u: f64) -> f64 {
        let cu = u.cosh();
        let mut acc = 0.0;
        for (&xi, &wp) in self.xi.iter().zip(&self.wpsi) {
            let e = cu / xi;
            if e > 700.0 {
                continue;
            }
            acc += wp * (-e).exp();
        }
        acc
    }

    /// Integrate `f(u, v, h_t at the point with ϱ = v)` against dμ over `G`
    /// in the radial-triangle parametrization `|z|² = 2e^u(cosh v - cosh u)`,
    /// `|u| ≤ v ≤ v_max`.
    fn triangle_integral<F: Fn(f64, f64, f64) -> f64 + Sync>(
        &self,
        v_max: f64,
        per_unit: usize,
        f: F,
    ) -> f64 {
        let q = self.q as f64;
        let omega = 2.0 * std::f64::consts::PI.powf(q / 2.0) / gamma_half_int(self.q);
        let rule = GlRule::new(8);
        let upanels = ((2.0 * v_max).ceil() as usize * per_unit).max(8);
        let (us, wus) = rule.panel_nodes(-v_max, v_max, upanels);
        us.par_iter()
            .zip(wus.par_iter())
            .map(|(&u, &wu)| {
                let vpanels = (((v_max - u.abs()).ceil() as usize) * per_unit).max(2);
                let (vs, wvs) = rule.panel_nodes(u.abs(), v_max, vpanels);
                let mut row = 0.0;
                for (&v, &wv) in vs.iter().zip(&wvs) {
                    let z2 = 2.0 * u.exp() * (v.cosh() - u.cosh()).max(0.0);
                    let ker = self.kernel_radial(z2, u);
                    let jac = omega
                        * 2f64.powf(q / 2.0 - 1.0)
                        * (q * u / 2.0).exp()
                        * (v.cosh() - u.cosh()).max(0.0).powf(q / 2.0 - 1.0)
                        * v.sinh();
                    row += wv * jac * f(u, v, ker);
                }
                wu * row
            })
            .sum()
    }

    fn v_max(&self) -> f64 {
        ((4.0 * self.t * (-(self.rel_tol.min(1e-6)).ln() + 6.0)).sqrt() + 6.0).min(self.u_max)
    }

    /// Total mass `∫_G h_t dμ` (should be 1).
    pub fn mass(&self) -> f64 {
        self.triangle_integral(self.v_max(), 3, |_, _, k| k)
    }

    /// `L¹` norm of the horizontal gradient, `∫_G |∇_H h_t|_g dμ`.
    pub fn grad_l1_norm(&self) -> f64 {
        let q = self.q as f64;
        let omega = 2.0 * std::f64::consts::PI.powf(q / 2.0) / gamma_half_int(self.q);
        let v_max = self.v_max() + 2.0;
        let rule = GlRule::new(8);
        let per_unit = 3usize;
        let upanels = ((2.0 * v_max).ceil() as usize * per_unit).max(8);
        let (us, wus) = rule.panel_nodes(-v_max, v_max, upanels);
        us.par_iter()
            .zip(wus.par_iter())
            .map(|(&u, &wu)| {
                let vpanels = (((v_max - u.abs()).ceil() as usize) * per_unit).max(2);
                let (vs, wvs) = rule.panel_nodes(u.abs(), v_max, vpanels);
                let mut row = 0.0;
                for (&v, &wv) in vs.iter().zip(&wvs) {
                    let z2 = 2.0 * u.exp() * (v.cosh() - u.cosh()).max(0.0);
                    // rotational symmetry: put z along the first axis
                    let mut z = vec![0.0; self.q as usize];
                    z[0] = z2.sqrt();
                    let g = self.gradient(&GPoint::new(crate::NPoint::new(z), u));
                    let jac = omega
                        * 2f64.powf(q / 2.0 - 1.0)
                        * (q * u / 2.0).exp()
                        * (v.cosh() - u.cosh()).max(0.0).powf(q / 2.0 - 1.0)
                        * v.sinh();
                    row += wv * jac * g.norm();
                }
                wu * row
            })
            .sum()
    }

    /// Relative L¹ distance to the `H³` closed-form oracle (`Q = 2` only).
    pub fn l1_distance_to_h3_oracle(&self) -> Result<f64, Error> {
        if self.q != 2 {
            return Err(Error::invalid("the H3 oracle requires Q = 2"));
        }
        let t = self.t;
        Ok(self.triangle_integral(self.v_max(), 3, move |u, v, k| {
            (k - h3_oracle_kernel(t, v, u)).abs()
        }))
    }

    /// `‖h_t * h_t - h_{2t}‖₁` through the radial profile: the convolution is
    /// computed at radial representatives and compared against `h_{2t}`.
    pub fn semigroup_l1_error(&self) -> Result<f64, Error> {
        if self.q != 2 {
            return Err(Error::invalid("semigroup check implemented for Q = 2"));
        }
        let double = HeatEvaluator::with_u_range(
            &GroupModel::abelian(self.q).unwrap(),
            2.0 * self.t,
            self.rel_tol,
            self.u_max,
        )?;
        // dense radial profile of h_t: psi(rho) = h_t at ((s,0), 0), s = s(rho)
        let v_max = ((8.0 * self.t * 16.0).sqrt() + 4.0).min(self.u_max);
        let nprof = 3000usize;
        let prof: Vec<f64> = (0..=nprof)
            .into_par_iter()
            .map(|i| {
                let r = v_max * i as f64 / nprof as f64;
                let z2 = 2.0 * (r.cosh() - 1.0);
                self.kernel_radial(z2, 0.0)
            })
            .collect();
        let psi = move |r: f64| -> f64 {
            if r >= v_max {
                return 0.0;
            }
            let pos = (r / v_max * nprof as f64).clamp(0.0, nprof as f64 - 1e-9);
            let i = pos.floor() as usize;
            let s = pos - i as f64;
            prof[i] * (1.0 - s) + prof[i + 1] * s
        };
        // h_t(z, u) = e^{-u} psi(rho(z, u)); convolution at x = ((sx, 0), 0)
        let rule = GlRule::new(8);
        let conv_at = |rx: f64| -> f64 {
            let sx = (2.0 * (rx.cosh() - 1.0)).max(0.0).sqrt();
            // integrate over y = (zy, uy) in polar z-coordinates
            let (uys, wuys) = rule.panel_nodes(-v_max, v_max, (2.0 * v_max).ceil() as usize * 2);
            uys.iter()
                .zip(&wuys)
                .map(|(&uy, &wuy)| {
                    let (vys, wvys) = rule.panel_nodes(
                        uy.abs(),
                        v_max,
                        (((v_max - uy.abs()).ceil() as usize) * 2).max(2),
                    );
                    let mut row = 0.0;
                    for (&vy, &wvy) in vys.iter().zip(&wvys) {
                        let sy2 = 2.0 * uy.exp() * (vy.cosh() - uy.cosh()).max(0.0);
                        let sy = sy2.sqrt();
                        let hy = (-uy).exp() * psi(vy);
                        // angular integral over the angle between zx and zy
                        let (phis, wphis) = rule.panel_nodes(0.0, std::f64::consts::PI, 6);
                        let mut ang = 0.0;
                        for (&phi, &wphi) in phis.iter().zip(&wphis) {
                            // x y^{-1} = (zx - e^{-uy} zy, -uy)
                            let d2 = sx * sx - 2.0 * (-uy).exp() * sx * sy * phi.cos()
                                + (-2.0 * uy).exp() * sy2;
                            let rho = arccosh1p(
                                2.0 * (uy / 2.0).sinh().powi(2) + uy.exp() * d2 / 2.0,
                            );
                            // h_t(x y^{-1}) = e^{+uy} psi(rho)
                            ang += wphi * uy.exp() * psi(rho);
                        }
                        // dz_y = 2 * sy dsy dphi over phi in [0, pi];
                        // (uy, vy) jacobian: sy dsy = e^{uy} sinh vy dvy
                        let jac = 2.0 * uy.exp() * vy.sinh();
                        row += wvy * jac * ang * hy;
                    }
                    wuy * row
                })
                .sum()
        };
        // compare conv and h_{2t} on a radial grid, integrate the difference
        let nrep = 28usize;
        let reps: Vec<f64> = (0..=nrep).map(|i| v_max * i as f64 / nrep as f64).collect();
        let diffs: Vec<f64> = reps
            .par_iter()
            .map(|&r| {
                let c = conv_at(r);
                let z2 = 2.0 * (r.cosh() - 1.0);
                (c - double.kernel_radial(z2, 0.0)).abs()
            })
            .collect();
        // ∫ |m^{1/2} D(ϱ)| dμ = 4 V_N ∫ |D| r sinh r dr for Q = 2
        let vn = std::f64::consts::PI;
        let mut total = 0.0;
        for i in 0..nrep {
            let (r0, r1) = (reps[i], reps[i + 1]);
            let (d0, d1) = (diffs[i], diffs[i + 1]);
            total += 0.5 * (d0 * r0 * r0.sinh() + d1 * r1 * r1.sinh()) * (r1 - r0);
        }
        Ok(4.0 * vn * total)
    }

    /// Number of cached ξ-nodes (for convergence studies).
    pub fn node_count(&self) -> usize {
        self.xi.len()
    }
}

/// The `Q = 2` closed-form oracle `h_t = m^{1/2} e^t p_t^{H³}(ϱ)` evaluated
/// at distance `rho` and height `u` (the `e^t` cancels the spectral-gap
/// factor of the hyperbolic heat kernel, leaving unit mass).
pub fn h3_oracle_kernel(t: f64, rho: f64, u: f64) -> f64 {
    let rs = if rho < 1e-12 { 1.0 } else { rho / rho.sinh() };
    (-u).exp() * (4.0 * std::f64::consts::PI * t).powf(-1.5) * rs * (-rho * rho / (4.0 * t)).exp()
}

/// The double integral
/// `∫_ℝ ∫₀^∞ cosh(αu) ξ^{-2-α} e^{-(cosh θ + cosh u)/ξ} dξ du`; the inner
/// ξ-part has the closed form `Γ(1+α)(cosh θ + cosh u)^{-1-α}`, so only the
/// u-integral is quadrature. Bounded by `C_α e^{-θ}` for `α > 0` and by
/// `C₀ e^{-θ}(1+θ)` for `α = 0`.
pub fn inner_integral(alpha: f64, theta: f64) -> f64 {
    let gamma_1pa = if alpha == 0.0 {
        1.0
    } else if alpha == 0.5 {
        gamma_half_int(3)
    } else if alpha == 1.0 {
        1.0
    } else {
        gamma_half_int(((2.0 * alpha).round() as u32) + 2)
    };
    let rule = GlRule::new(32);
    let ct = theta.cosh();
    let umax = theta + 60.0;
    2.0 * gamma_1pa
        * rule.integrate_panels(0.0, umax, (umax.ceil() as usize).max(8), |u| {
            (alpha * u).cosh() * (ct + u.cosh()).powf(-1.0 - alpha)
        })
}
