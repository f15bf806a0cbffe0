//! Spherical kernel synthesis on `H³` (`Q = 2`).
//!
//! Convolution kernels of multipliers of the distinguished Laplacian on
//! `ℝ² ⋊ ℝ` factor as `k_{F(√Δ̃)} = m̃^{1/2} φ_F` with `φ_F` radial, and the
//! spherical functions of `H³` are elementary:
//!
//! ```text
//! φ_F(ρ) = c_cal ∫₀^∞ F(s²) (sin sρ / (s sinh ρ)) s² ds,   c_cal = 1/(2π²).
//! ```
//!
//! For a band-limited profile `f(s) = ∫₀^r a(τ/r) cos(sτ) dτ` the
//! `s`-integral collapses by Fourier inversion to
//! `φ(ρ) = -(π c_cal / 2) a'(ρ/r) / (r sinh ρ)` — exactly zero beyond the
//! band, which is the finite-propagation-speed support statement. The direct
//! quadrature (with a smooth truncation taper) serves as the independent
//! route and as the evaluator for profiles with no analytic transform.

use super::profile::{BandLimitedProfile, BandShape};
use crate::quad::GlRule;
use crate::Error;
use rustfft::num_complex::Complex64;

/// Frozen spherical-synthesis constant for `H³`: `c_cal = 1/(2π²)`, pinned by
/// matching the heat multiplier `F = e^{-tλ}` against the heat kernel.
pub const C_CAL_H3: f64 = 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::PI);

/// A radial kernel profile `φ(ρ)`; the kernel of the multiplier is
/// `m^{1/2} φ(ϱ)`. Band-limited profiles are evaluated in closed form, other
/// profiles by interpolation of a uniform ρ-grid.
#[derive(Debug, Clone)]
pub struct RadialKernel {
    pub rho_max: f64,
    pub values: Vec<Complex64>,
    /// Support radius when the profile is band-limited.
    pub band_limit: Option<f64>,
    /// Analytic form for band-limited profiles.
    banded: Option<BandLimitedProfile>,
}

impl RadialKernel {
    pub fn eval(&self, rho: f64) -> Complex64 {
        if let Some(p) = &self.banded {
            return Complex64::new(banded_phi(p, rho), 0.0);
        }
        if rho < 0.0 || rho >= self.rho_max || self.values.len() < 2 {
            return Complex64::new(0.0, 0.0);
        }
        let pos = rho / self.rho_max * (self.values.len() - 1) as f64;
        let i = (pos.floor() as usize).min(self.values.len() - 2);
        let s = pos - i as f64;
        self.values[i] * (1.0 - s) + self.values[i + 1] * s
    }

    /// `‖m^{1/2} φ‖₁ = 4π ∫ |φ(ρ)| ρ sinh ρ dρ` (`Q = 2`, `V_N = π`).
    pub fn l1_norm(&self) -> f64 {
        self.weighted_l1(|_| 1.0)
    }

    /// `∫ |k| W(ϱ) dμ = 4π ∫ |φ(ρ)| W(ρ) ρ sinh ρ dρ`.
    pub fn weighted_l1<W: Fn(f64) -> f64>(&self, weight: W) -> f64 {
        let rule = GlRule::new(16);
        let top = self.band_limit.map_or(self.rho_max, |b| b.min(self.rho_max));
        let panels = ((4.0 * top).ceil() as usize).max(8);
        4.0 * std::f64::consts::PI
            * rule.integrate_panels(0.0, top, panels, |r| {
                self.eval(r).norm() * weight(r) * r * r.sinh()
            })
    }

    /// `‖m^{1/2} φ‖₂ = (4π ∫ |φ|² sinh² ρ dρ)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let rule = GlRule::new(16);
        let top = self.band_limit.map_or(self.rho_max, |b| b.min(self.rho_max));
        let panels = ((4.0 * top).ceil() as usize).max(8);
        (4.0 * std::f64::consts::PI
            * rule.integrate_panels(0.0, top, panels, |r| {
                self.eval(r).norm_sqr() * r.sinh() * r.sinh()
            }))
        .sqrt()
    }
}

/// `φ(ρ) = -(π c_cal/2) a'(ρ/r) / (r sinh ρ)` for a band-limited profile;
/// exactly zero at and beyond the band. May diverge like `1/ρ` at the origin
/// (Fejér); all norms integrate the singularity against `ρ sinh ρ` weights.
fn banded_phi(profile: &BandLimitedProfile, rho: f64) -> f64 {
    let r = profile.band;
    if rho >= r || rho < 0.0 {
        return 0.0;
    }
    let rho = rho.max(1e-12);
    -(std::f64::consts::PI * C_CAL_H3 / 2.0) * profile.shape.window_deriv(rho / r)
        / (r * rho.sinh())
}

/// Exact synthesis of a band-limited profile: `φ` from the derivative of the
/// transform window. Zero beyond the band by construction.
pub fn spherical_kernel_banded(profile: &BandLimitedProfile, rho_max: f64, n: usize) -> RadialKernel {
    let r = profile.band;
    let values = (0..=n)
        .map(|i| Complex64::new(banded_phi(profile, rho_max * i as f64 / n as f64), 0.0))
        .collect();
    RadialKernel { rho_max, values, band_limit: Some(r), banded: Some(profile.clone()) }
}

/// Direct quadrature synthesis per the defining integral, for an arbitrary
/// `√Δ`-side profile `f(s)` (complex allowed). A smooth cosine taper over the
/// last quarter of `[0, s_max]` suppresses truncation ringing; the tail beyond
/// `s_max` is the caller's accuracy budget.
pub fn spherical_kernel_quadrature<F: Fn(f64) -> Complex64>(
    f: F,
    s_max: f64,
    rho_max: f64,
    n: usize,
) -> Result<RadialKernel, Error> {
    if !(s_max > 0.0 && rho_max > 0.0) {
        return Err(Error::invalid("positive s_max and rho_max required"));
    }
    let rule = GlRule::new(32);
    let taper_start = 0.75 * s_max;
    let taper = |s: f64| -> f64 {
        if s <= taper_start {
            1.0
        } else {
            0.5 * (1.0 + (std::f64::consts::PI * (s - taper_start) / (s_max - taper_start)).cos())
        }
    };
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let rho = rho_max * i as f64 / n as f64;
        // panels fine enough for the sin(s rho) oscillation
        let panels = ((s_max * (rho + 1.0) / 4.0).ceil() as usize).max(8);
        let mut acc = Complex64::new(0.0, 0.0);
        let (nodes, weights) = rule.panel_nodes(0.0, s_max, panels);
        for (&s, &w) in nodes.iter().zip(&weights) {
            let kernel = if rho == 0.0 {
                s * s // lim sin(s rho)/(s sinh rho) * s^2 = s^2 as rho->0
            } else {
                (s * rho).sin() * s / rho.sinh()
            };
            acc += f(s) * (w * taper(s) * kernel);
        }
        values.push(acc * C_CAL_H3);
    }
    Ok(RadialKernel { rho_max, values, band_limit: None, banded: None })
}

/// Convenience: the heat multiplier `F(λ) = e^{-tλ}` synthesized by
/// quadrature (oracle target: `e^t p_t^{H³}`).
pub fn heat_multiplier_kernel(t: f64, rho_max: f64, n: usize) -> Result<RadialKernel, Error> {
    let s_max = (40.0f64 / t).sqrt() + 4.0;
    spherical_kernel_quadrature(
        |s| Complex64::new((-t * s * s).exp(), 0.0),
        s_max,
        rho_max,
        n,
    )
}

/// Fejér-family closed forms frozen as oracles:
/// `‖k‖₁ = r` and `‖k‖₂ = (π r)^{-1/2}` for the triangle window of band `r`,
/// so the Prop-5.1 style ratio is exactly `√π · r^{3/2}`.
pub fn fejer_l1_closed(r: f64) -> f64 {
    r
}

pub fn fejer_l2_closed(r: f64) -> f64 {
    (std::f64::consts::PI * r).powf(-0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::h3_oracle_kernel;

    #[test]
    fn heat_kernel_synthesis_matches_oracle() {
        let t = 1.0;
        let k = heat_multiplier_kernel(t, 12.0, 1200).unwrap();
        for rho in [0.1, 0.5, 1.0, 2.0, 4.0] {
            // oracle phi = e^t p_t(rho) = h3_oracle at u = 0
            let want = h3_oracle_kernel(t, rho, 0.0);
            let got = k.eval(rho).re;
            assert!(
                (got / want - 1.0).abs() < 1e-3,
                "rho={rho}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn banded_synthesis_vanishes_beyond_band_and_matches_quadrature() {
        let p = BandLimitedProfile::new(BandShape::Triangle, 2.0);
        let exact = spherical_kernel_banded(&p, 8.0, 1600);
        // support: exactly zero beyond the band
        for rho in [2.0001, 3.0, 5.0, 7.5] {
            assert_eq!(exact.eval(rho).norm(), 0.0);
        }
        // interior: independent quadrature route agrees
        let quad = spherical_kernel_quadrature(
            |s| Complex64::new(p.eval_sqrt_side(s), 0.0),
            4000.0,
            8.0,
            1600,
        )
        .unwrap();
        for rho in [0.3, 0.8, 1.2, 1.7] {
            let a = exact.eval(rho).re;
            let b = quad.eval(rho).re;
            assert!(
                (a - b).abs() < 2e-4 * (1.0 + a.abs()),
                "rho={rho}: exact {a} vs quadrature {b}"
            );
        }
        // beyond the band the quadrature route is small (truncation floor)
        for rho in [2.5, 3.5] {
            assert!(quad.eval(rho).norm() < 5e-4, "rho={rho}: {}", quad.eval(rho).norm());
        }
    }

    #[test]
    fn fejer_norms_match_closed_forms() {
        for r in [0.5f64, 1.0, 2.0, 4.0] {
            let p = BandLimitedProfile::new(BandShape::Triangle, r);
            let k = spherical_kernel_banded(&p, r + 1.0, 4000);
            let l1 = k.l1_norm();
            let l2 = k.l2_norm();
            assert!((l1 / fejer_l1_closed(r) - 1.0).abs() < 1e-4, "r={r}: l1 {l1}");
            assert!((l2 / fejer_l2_closed(r) - 1.0).abs() < 1e-4, "r={r}: l2 {l2}");
        }
    }

    #[test]
    fn l2_norm_consistent_with_plancherel() {
        use crate::multiplier::plancherel::{kernel_l2_norm, C_DELTA_Q2};
        // band-limited profile: r-side L2 equals the s-side Plancherel L2
        let p = BandLimitedProfile::new(BandShape::Hann, 2.0);
        let k = spherical_kernel_banded(&p, 3.0, 4000);
        let l2_r = k.l2_norm();
        let l2_s = kernel_l2_norm(
            2,
            C_DELTA_Q2,
            |s| {
                let v = p.eval_sqrt_side(s);
                v * v
            },
            300.0,
            1e-3,
        )
        .unwrap()
        .exact;
        assert!((l2_r / l2_s - 1.0).abs() < 1e-2, "{l2_r} vs {l2_s}");
    }

    #[test]
    fn zero_profile_zero_kernel() {
        let k = spherical_kernel_quadrature(|_| Complex64::new(0.0, 0.0), 10.0, 5.0, 100)
            .unwrap();
        assert!(k.values.iter().all(|v| v.norm() == 0.0));
    }
}
