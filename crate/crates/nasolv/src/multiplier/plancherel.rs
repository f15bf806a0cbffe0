//! Plancherel density of the sub-Laplacian and kernel L² norms.
//!
//! The Plancherel measure is `c_Δ |𝐜_Q(s)|^{-2} ds` under `λ = s²`, with
//! `𝐜_Q` the Harish-Chandra function of the `(Q+1)`-dimensional real
//! hyperbolic space. With the Jacobi-function normalization
//! `𝐜_Q(s) = C(Q) Γ(is)/Γ(is + Q/2)`, `C(Q) = 2^{Q-1} Γ((Q+1)/2)/√π`, the
//! density is elementary for every integer `Q`:
//!
//! ```text
//! Q even:  |𝐜_Q(s)|^{-2} = C(Q)^{-2} s² Π_{k=1}^{Q/2-1} (s² + k²)
//! Q odd:   |𝐜_Q(s)|^{-2} = C(Q)^{-2} s tanh(πs) Π_{k=0}^{(Q-3)/2} (s² + (k+½)²)
//! ```
//!
//! (`|Γ(is)|² = π/(s sinh πs)`, `|Γ(½+is)|² = π/cosh πs`). For `Q = 2` the
//! constant collapses to `C(2) = 1` and the density is exactly `s²`.
//!
//! The scalar `c_Δ` is calibrated once against the heat kernel through
//! `‖h_t‖₂² = h_{2t}(0)` and then frozen; for `Q = 2` the calibration target
//! has the closed form `c_Δ = 1/(4π²)` (and `‖h_t‖₂ = (8πt)^{-3/4}`).

use crate::heat::HeatEvaluator;
use crate::quad::{gamma_half_int, GlRule};
use crate::{Error, GroupModel};

/// `|𝐜_Q(s)|^{-2}`, even in `s`, vanishing to second order at `s = 0` and
/// growing like `|s|^Q` at infinity.
pub fn plancherel_density(q: u32, s: f64) -> f64 {
    let s = s.abs();
    let c = 2f64.powi(q as i32 - 1) * gamma_half_int(q + 1) / std::f64::consts::PI.sqrt();
    let inv_c2 = 1.0 / (c * c);
    if q % 2 == 0 {
        let mut val = s * s;
        for k in 1..(q / 2) {
            val *= s * s + (k * k) as f64;
        }
        inv_c2 * val
    } else {
        let mut val = s * (std::f64::consts::PI * s).tanh();
        for k in 0..((q - 1) / 2) {
            let half = k as f64 + 0.5;
            val *= s * s + half * half;
        }
        inv_c2 * val
    }
}

/// Frozen calibration constant for `Q = 2`: `c_Δ = 1/(4π²)`.
pub const C_DELTA_Q2: f64 = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);

/// Calibrate `c_Δ` against the heat kernel: with `F(λ) = e^{-tλ}`,
/// `‖k_{F(Δ)}‖₂² = h_{2t}(0)` must equal `c_Δ ∫_ℝ e^{-2ts²} |𝐜_Q(s)|^{-2} ds`.
pub fn calibrate_c_delta(model: &GroupModel, rel_tol: f64) -> Result<f64, Error> {
    let t = 1.0;
    let ev2 = HeatEvaluator::new(model, 2.0 * t, rel_tol)?;
    let l2sq = ev2.kernel_radial(0.0, 0.0);
    let q = model.homogeneous_dim;
    let rule = GlRule::new(32);
    let smax = (8.0f64 / t).sqrt() + 6.0;
    let integral = 2.0
        * rule.integrate_panels(0.0, smax, 64, |s| {
            (-2.0 * t * s * s).exp() * plancherel_density(q, s)
        });
    Ok(l2sq / integral)
}

/// Both sides of the kernel L² computation for a multiplier of `Δ` given as
/// `|F|²` on the `√λ = s` side: the exact Plancherel value and the two-sided
/// comparison integral `(∫ |f(λ)|² (λ³ + λ^{Q+1}) dλ/λ)^{1/2}` for
/// `f(λ) = F(λ²)` (the multiplier in `√Δ`).
#[derive(Debug, Clone)]
pub struct KernelL2 {
    pub exact: f64,
    pub comparison: f64,
}

/// `‖k_{F(Δ)}‖₂` via the Plancherel density, plus the comparison integral.
/// `f_sq(s)` must return `|F(s²)|²`; the profile must decay fast enough for
/// the truncated integral to converge (the tail is monitored).
pub fn kernel_l2_norm<F: Fn(f64) -> f64>(
    q: u32,
    c_delta: f64,
    f_sq: F,
    s_max: f64,
    rel_tol: f64,
) -> Result<KernelL2, Error> {
    let rule = GlRule::new(32);
    let panels = (4.0 * s_max).ceil() as usize;
    let exact_int =
        2.0 * rule.integrate_panels(0.0, s_max, panels, |s| f_sq(s) * plancherel_density(q, s));
    // tail monitor: extend by 25% and compare
    let ext = 2.0
        * rule.integrate_panels(s_max, 1.25 * s_max, panels / 4 + 1, |s| {
            f_sq(s) * plancherel_density(q, s)
        });
    if ext.abs() > rel_tol.max(1e-6) * exact_int.abs() {
        return Err(Error::convergence("kernel L2 tail not converged", ext / exact_int));
    }
    let comparison_int = rule.integrate_panels(0.0, s_max, panels, |s| {
        f_sq(s) * (s * s + s.powi(q as i32))
    });
    Ok(KernelL2 { exact: (c_delta * exact_int).sqrt(), comparison: comparison_int.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn q2_density_is_s_squared() {
        for s in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let d = plancherel_density(2, s);
            assert!((d / (s * s) - 1.0).abs() < 1e-12, "s={s}: {d}");
        }
        assert_eq!(plancherel_density(2, 0.0), 0.0);
    }

    #[test]
    fn q4_density_asymptotics() {
        // density(s)/s^4 -> 1/36 (c(s) = 6/((is)(1+is)))
        let d = plancherel_density(4, 20.0);
        assert!((d / 20.0f64.powi(4) - 1.0 / 36.0).abs() < 1e-3 / 36.0);
        // small s: ~ s^2/36
        let d = plancherel_density(4, 0.01);
        assert!((d / (0.01f64 * 0.01) - 1.0 / 36.0).abs() < 1e-3 / 36.0);
    }

    #[test]
    fn odd_q_density_small_and_large() {
        // Q = 3: s tanh(pi s) (s^2 + 1/4) / C(3)^2
        let c3 = 2f64.powi(2) * gamma_half_int(4) / PI.sqrt(); // 2^2 Γ(2)/√π
        for s in [0.05f64, 1.0, 15.0] {
            let d = plancherel_density(3, s);
            let want = s * (PI * s).tanh() * (s * s + 0.25) / (c3 * c3);
            assert!((d / want - 1.0).abs() < 1e-12);
        }
        // asymptotics: ~ |s|^2 small (tanh ~ pi s), ~ |s|^3 large
        let small = plancherel_density(3, 1e-4) / 1e-8;
        let small2 = plancherel_density(3, 2e-4) / 4e-8;
        assert!((small / small2 - 1.0).abs() < 1e-3);
        let large = plancherel_density(3, 50.0) / 50.0f64.powi(3);
        let large2 = plancherel_density(3, 100.0) / 100.0f64.powi(3);
        assert!((large / large2 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn calibration_matches_closed_form() {
        let model = GroupModel::abelian(2).unwrap();
        let c = calibrate_c_delta(&model, 1e-8).unwrap();
        assert!(
            (c / C_DELTA_Q2 - 1.0).abs() < 1e-3,
            "calibrated {c} vs closed form {C_DELTA_Q2}"
        );
    }

    #[test]
    fn heat_multiplier_l2_matches_heat_module() {
        // F(lambda) = e^{-t lambda}: ||k||_2 = (8 pi t)^{-3/4} for Q = 2
        for t in [1.0f64, 2.0] {
            let k = kernel_l2_norm(2, C_DELTA_Q2, |s| (-2.0 * t * s * s).exp(), 12.0, 1e-8)
                .unwrap();
            let want = (8.0 * PI * t).powf(-0.75);
            assert!((k.exact / want - 1.0).abs() < 1e-6, "t={t}: {} vs {want}", k.exact);
            // two-sided comparison within a modest constant
            let ratio = k.exact / k.comparison;
            assert!(ratio > 0.05 && ratio < 20.0);
        }
    }

    #[test]
    fn zero_profile() {
        let k = kernel_l2_norm(2, C_DELTA_Q2, |_| 0.0, 5.0, 1e-8).unwrap();
        assert_eq!(k.exact, 0.0);
    }

    #[test]
    fn gaussian_ratio_consistency() {
        // F = e^{-λ} vs e^{-2λ}: exact values scale like t^{-3/4}
        let k1 = kernel_l2_norm(2, C_DELTA_Q2, |s| (-2.0 * s * s).exp(), 12.0, 1e-8).unwrap();
        let k2 = kernel_l2_norm(2, C_DELTA_Q2, |s| (-4.0 * s * s).exp(), 12.0, 1e-8).unwrap();
        assert!((k1.exact / k2.exact - 2f64.powf(0.75)).abs() < 1e-6);
    }
}
