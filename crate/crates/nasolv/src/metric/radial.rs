//! Radial integration on `G`: ball volumes, the `sinh^Q` radial formula, its
//! `m^{1/2}`-weighted companion, weighted ball integrals and Monte Carlo
//! volume estimation.
//!
//! For radial `f` the right-Haar integral reduces to one dimension:
//!
//! ```text
//! ∫_G f(|x|) dμ = ∫_G f(|x|) m dμ = c_N Q ∫₀^∞ f(r) sinh^Q r dr,
//! c_N = V_N 2^{Q-1} Γ(Q/2)² / Γ(Q),
//! ```
//!
//! and for the `m^{1/2}`-weighted integral (the natural weight for convolution
//! kernels, which factor as `m^{1/2} ×` radial)
//!
//! ```text
//! ∫_G m^{1/2} f(|x|) dμ = V_N Q 2^{Q/2-1} ∫₀^∞ f(r) sinh r I_{Q/2-1}(r) dr,
//! I_β(r) = ∫_{-r}^{r} (cosh r - cosh u)^β du,
//! ```
//!
//! which for `Q = 2` collapses to `4 V_N ∫ f(r) r sinh r dr`.

use super::cc_distance_g;
use crate::quad::{gamma_half_int, GlRule};
use crate::{Error, GPoint, GroupKind, GroupModel, NPoint};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Haar measure of the unit CC ball of `N`.
///
/// Exact for abelian models (Euclidean ball volume); Monte Carlo with a
/// reported half-width of the 95% confidence interval for Heisenberg1.
pub fn unit_ball_volume_n(model: &GroupModel, seed: u64, samples: usize) -> (f64, f64) {
    match model.kind {
        GroupKind::Abelian { q } => {
            let vol = std::f64::consts::PI.powf(q as f64 / 2.0) / gamma_half_int(q + 2);
            (vol, 0.0)
        }
        GroupKind::Heisenberg1 => {
            // unit ball fits in |x|,|y| <= 1, |w| <= 1/(4 pi)
            let wmax = 1.0 / (4.0 * std::f64::consts::PI);
            let box_vol = 2.0 * 2.0 * 2.0 * wmax;
            let shards = 64usize;
            let per = samples / shards;
            let hits: u64 = (0..shards)
                .into_par_iter()
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64));
                    let mut h = 0u64;
                    for _ in 0..per {
                        let z = NPoint::new(vec![
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-wmax..wmax),
                        ]);
                        if super::heisenberg::heisenberg_distance_from_origin(&z).unwrap() < 1.0 {
                            h += 1;
                        }
                    }
                    h
                })
                .sum();
            let n = (per * shards) as f64;
            let p = hits as f64 / n;
            let ci = 1.96 * (p * (1.0 - p) / n).sqrt() * box_vol;
            (p * box_vol, ci)
        }
    }
}

/// `c_N = V_N 2^{Q-1} Γ(Q/2)² / Γ(Q)`.
pub fn radial_constant(q: u32, vn: f64) -> f64 {
    vn * 2f64.powi(q as i32 - 1) * gamma_half_int(q).powi(2) / gamma_half_int(2 * q)
}

/// Volume of the ball `B_ϱ(0, r)` in `G`: `c_N Q ∫₀^r sinh^Q s ds` by
/// panel-doubling quadrature.
pub fn ball_volume_g(q: u32, vn: f64, r: f64) -> Result<f64, Error> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!("radius must be > 0, got {r}")));
    }
    let rule = GlRule::new(32);
    let cn = radial_constant(q, vn);
    let (int, _) =
        crate::quad::integrate_adaptive(&rule, 0.0, r, 1e-12, |s| s.sinh().powi(q as i32))
            .map_err(|(v, e)| Error::convergence(format!("ball volume quadrature (got {v})"), e))?;
    Ok(cn * q as f64 * int)
}

/// Closed form of the `Q = 2` ball volume: `V_N (sinh 2r - 2r)`.
pub fn ball_volume_g_q2_closed(vn: f64, r: f64) -> f64 {
    vn * ((2.0 * r).sinh() - 2.0 * r)
}

/// Integrate one unit interval by panel doubling; returns the last estimate
/// even for profiles with jumps (where doubling converges only linearly).
fn unit_interval<F: Fn(f64) -> f64>(rule: &GlRule, lo: f64, hi: f64, rel_tol: f64, f: F) -> f64 {
    let mut panels = 4usize;
    let mut prev = rule.integrate_panels(lo, hi, panels, &f);
    for _ in 0..10 {
        panels *= 2;
        let cur = rule.integrate_panels(lo, hi, panels, &f);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(1e-300) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// `∫_G f(|x|) dμ = c_N Q ∫₀^∞ f(r) sinh^Q r dr`, extending the truncation
/// radius until the increment is below `rel_tol`; detects divergence.
pub fn radial_integral_g<F: Fn(f64) -> f64>(
    q: u32,
    vn: f64,
    f: F,
    rel_tol: f64,
) -> Result<f64, Error> {
    let rule = GlRule::new(32);
    let cn = radial_constant(q, vn);
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..60 {
        let inc = unit_interval(&rule, lo, hi, rel_tol, |r| f(r) * r.sinh().powi(q as i32));
        total += inc;
        if inc.abs() <= rel_tol * total.abs().max(1e-300) && lo > 2.0 {
            return Ok(cn * q as f64 * total);
        }
        lo = hi;
        hi += 1.0;
    }
    Err(Error::convergence(
        "radial integral did not converge (divergent profile?)",
        f64::INFINITY,
    ))
}

/// Inner integral `I_β(r) = ∫_{-r}^r (cosh r - cosh u)^β du` of the weighted
/// radial formula.
fn weighted_inner(beta: f64, r: f64, rule: &GlRule) -> f64 {
    if beta == 0.0 {
        return 2.0 * r;
    }
    rule.integrate_panels(-r, r, 8, |u| (r.cosh() - u.cosh()).max(0.0).powf(beta))
}

/// `∫_G m(x)^{1/2} f(|x|) dμ` via the weighted radial reduction above.
pub fn radial_integral_m_half<F: Fn(f64) -> f64>(
    q: u32,
    vn: f64,
    f: F,
    rel_tol: f64,
) -> Result<f64, Error> {
    let rule = GlRule::new(32);
    let inner_rule = GlRule::new(16);
    let beta = q as f64 / 2.0 - 1.0;
    let pref = vn * q as f64 * 2f64.powf(q as f64 / 2.0 - 1.0);
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..80 {
        let inc = unit_interval(&rule, lo, hi, rel_tol.max(1e-11), |r| {
            f(r) * r.sinh() * weighted_inner(beta, r, &inner_rule)
        });
        total += inc;
        if inc.abs() <= rel_tol * total.abs().max(1e-300) && lo > 2.0 {
            return Ok(pref * total);
        }
        lo = hi;
        hi += 1.0;
    }
    Err(Error::convergence("weighted radial integral did not converge", f64::INFINITY))
}

/// `∫_{B(0,r)} (1 + w)^{-1} dμ` with `w(z,u) = |z|_N^Q`, reduced to a 1-D
/// integral: the inner `s`-integral has the exact antiderivative
/// `ln(1 + s^Q)/Q`.
pub fn inverse_weight_ball_integral(q: u32, vn: f64, r: f64) -> Result<f64, Error> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!("radius must be > 0, got {r}")));
    }
    let rule = GlRule::new(32);
    let val = rule.integrate_panels(-r, r, 16, |u| {
        let s2 = 2.0 * u.exp() * (r.cosh() - u.cosh()).max(0.0);
        (1.0 + s2.powf(q as f64 / 2.0)).ln()
    });
    Ok(vn * val)
}

/// Monte Carlo estimate of `μ(B_ϱ(0, r))` for an abelian model: rejection
/// sampling in the bounding box `|z| ≤ s_max(r)`, `|u| < r`. Returns the
/// estimate and the 95% confidence half-width.
pub fn mc_ball_volume_g(
    model: &GroupModel,
    r: f64,
    seed: u64,
    samples: usize,
) -> Result<(f64, f64), Error> {
    let q = model.homogeneous_dim;
    // any point of the ball has e^{-u}|z|^2/2 < cosh r - cosh u <= cosh r - 1
    let smax = (2.0 * r.exp() * (r.cosh() - 1.0)).sqrt();
    let d = model.dim;
    let box_vol = (2.0 * smax).powi(d as i32) * 2.0 * r;
    let shards = 64usize;
    let per = samples / shards;
    let origin = model.g_zero();
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1000 + s as u64));
            let mut h = 0u64;
            for _ in 0..per {
                let z = NPoint::new((0..d).map(|_| rng.gen_range(-smax..smax)).collect());
                let u = rng.gen_range(-r..r);
                let p = GPoint::new(z, u);
                if cc_distance_g(model, &origin, &p).unwrap() < r {
                    h += 1;
                }
            }
            h
        })
        .sum();
    let n = (per * shards) as f64;
    let p = hits as f64 / n;
    let _ = q;
    Ok((p * box_vol, 1.96 * (p * (1.0 - p) / n).sqrt() * box_vol))
}
