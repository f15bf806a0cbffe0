//! Geometric checks tying admissible sets to the metric: the empirical
//! constants `C₁` (sets sit in balls of comparable radius) and `C*`
//! (enlargements have comparable measure), the ball-vs-rectangle inclusions,
//! and the nested family behind the Hardy-space condition.

use super::admissible::{is_admissible, AdmissibleSet};
use super::constants::AdmissibilityConstants;
use super::dyadic::EuclideanDyadic;
use super::func::GridCarrier;
use crate::metric::cc_distance_g;
use crate::{Error, GPoint, GroupModel, NPoint};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Sample admissible sets whose cubes meet the carrier window.
pub fn sample_admissible_sets(
    carrier: &GridCarrier,
    constants: &AdmissibilityConstants,
    seed: u64,
    count: usize,
) -> Vec<AdmissibleSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let window = carrier.window();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = (rng.gen_range((0.5 * carrier.h_u).ln()..2.5f64.ln())).exp();
        let u0 = rng.gen_range(window.u_lo..window.u_hi);
        let lo = if r <= constants.r0 {
            r * (2.0 * constants.m).exp() * u0.exp()
        } else {
            (2.0 * constants.m * r).exp() * u0.exp()
        };
        let level = lo.log2().ceil() as i32;
        // anchor the cube at a random carrier z-point
        let zi = rng.gen_range(0..carrier.z_count());
        let z = carrier.z_center(zi);
        let side = 2f64.powi(level);
        let lattice: Vec<i64> = z.coords.iter().map(|&c| (c / side).floor() as i64).collect();
        let set = AdmissibleSet { level, lattice, u0, r };
        if is_admissible(&set, constants) {
            out.push(set);
        }
    }
    out
}

/// Largest observed `ϱ(x, center)/r` over random points of sampled sets:
/// the empirical `C₁` of the containment `R ⊂ B_ϱ((n_α^k, u₀), C₁ r)`.
pub fn measure_c1(
    model: &GroupModel,
    sets: &[AdmissibleSet],
    seed: u64,
    points_per_set: usize,
) -> Result<f64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for set in sets {
        let side = 2f64.powi(set.level);
        let center_z =
            NPoint::new(set.lattice.iter().map(|&i| (i as f64 + 0.5) * side).collect());
        let center = GPoint::new(center_z.clone(), set.u0);
        for _ in 0..points_per_set {
            let z = NPoint::new(
                set.lattice
                    .iter()
                    .map(|&i| (i as f64 + rng.gen_range(0.0..1.0)) * side)
                    .collect(),
            );
            let u = set.u0 + rng.gen_range(-set.r..set.r);
            let d = cc_distance_g(model, &center, &GPoint::new(z, u))?;
            worst = worst.max(d / set.r);
        }
    }
    Ok(worst)
}

/// Exact distance from a point to a product set `cube × [u₀-r, u₀+r]` on an
/// abelian model: the z-infimum is attained at the box projection of `z`,
/// and the u-infimum is a smooth 1-D minimization done by scan + refinement.
pub fn distance_to_product_set(x: &GPoint, set: &AdmissibleSet) -> f64 {
    let side = 2f64.powi(set.level);
    let zproj: f64 = x
        .z
        .coords
        .iter()
        .zip(&set.lattice)
        .map(|(&c, &i)| {
            let lo = i as f64 * side;
            let hi = (i as f64 + 1.0) * side;
            let p = c.clamp(lo, hi);
            (c - p) * (c - p)
        })
        .sum::<f64>();
    let dn2 = zproj;
    let (ulo, uhi) = (set.u0 - set.r, set.u0 + set.r);
    let rho = |u1: f64| {
        let du = x.u - u1;
        crate::quad::arccosh1p(2.0 * (du / 2.0).sinh().powi(2) + (-(x.u + u1)).exp() * dn2 / 2.0)
    };
    // coarse scan then ternary refinement (the profile is unimodal in u1)
    let n = 64usize;
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        let u1 = ulo + (uhi - ulo) * i as f64 / n as f64;
        let d = rho(u1);
        if d < best {
            best = d;
            best_i = i;
        }
    }
    let mut a = ulo + (uhi - ulo) * (best_i.saturating_sub(1)) as f64 / n as f64;
    let mut b = ulo + (uhi - ulo) * ((best_i + 1).min(n)) as f64 / n as f64;
    for _ in 0..60 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if rho(m1) <= rho(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    best.min(rho(0.5 * (a + b)))
}

/// Empirical `C*`: Monte Carlo estimate of `μ(R*)/μ(R)` where
/// `R* = {x : ϱ(x, R) < r}`, using the exact point-to-set distance.
pub fn measure_c_star(
    model: &GroupModel,
    sets: &[AdmissibleSet],
    seed: u64,
    box_samples: usize,
) -> Result<f64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let q = model.homogeneous_dim;
    for set in sets {
        let side = 2f64.powi(set.level);
        // bounding box of R*: the cube padded by e^{u0 + 2r} sinh-scale in z,
        // r in u (vertical translation covers the rest)
        let pad = (set.u0 + 2.0 * set.r).exp() * (2.0 * set.r.exp() * (set.r.cosh() - 1.0)).sqrt()
            + 1e-9;
        let zlo: Vec<f64> = set.lattice.iter().map(|&i| i as f64 * side - pad).collect();
        let zhi: Vec<f64> = set.lattice.iter().map(|&i| (i as f64 + 1.0) * side + pad).collect();
        let (ulo, uhi) = (set.u0 - 2.0 * set.r, set.u0 + 2.0 * set.r);
        let boxvol: f64 =
            zlo.iter().zip(&zhi).map(|(a, b)| b - a).product::<f64>() * (uhi - ulo);
        let mut hits = 0usize;
        for _ in 0..box_samples {
            let z = NPoint::new(
                zlo.iter().zip(&zhi).map(|(a, b)| rng.gen_range(*a..*b)).collect(),
            );
            let u = rng.gen_range(ulo..uhi);
            let x = GPoint::new(z, u);
            if distance_to_product_set(&x, set) < set.r {
                hits += 1;
            }
        }
        let mu_star = hits as f64 / box_samples as f64 * boxvol;
        worst = worst.max(mu_star / set.measure(q));
    }
    let _ = model;
    Ok(worst)
}

/// Product-in-ball inclusion: points of `B_N(0, 4 C_N e^{8M} r) × (-r, r)`
/// lie in `B_ϱ(0, C₁ r)`; returns the largest `ϱ/r` seen (≤ the measured C₁
/// when the inclusion holds).
pub fn check_product_in_ball(
    model: &GroupModel,
    constants: &AdmissibilityConstants,
    r: f64,
    seed: u64,
    samples: usize,
) -> Result<f64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = model.g_zero();
    let radius_n = 4.0 * constants.c_n * (8.0 * constants.m).exp() * r;
    let d = model.dim;
    let mut worst: f64 = 0.0;
    let mut accepted = 0usize;
    while accepted < samples {
        let z = NPoint::new((0..d).map(|_| rng.gen_range(-radius_n..radius_n)).collect());
        if z.euclidean_norm() >= radius_n {
            continue;
        }
        accepted += 1;
        let u = rng.gen_range(-r..r);
        let dist = cc_distance_g(model, &origin, &GPoint::new(z, u))?;
        worst = worst.max(dist / r);
    }
    Ok(worst)
}

/// Ball-in-product inclusion: points of `B_ϱ(0, r)` satisfy `|z|_N < e^r`
/// and `|u| < r`. Returns the number of violations (should be 0).
pub fn check_ball_in_product(
    model: &GroupModel,
    r: f64,
    seed: u64,
    samples: usize,
) -> Result<usize, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = model.g_zero();
    let d = model.dim;
    let zbox = 2.0 * r.exp();
    let mut violations = 0usize;
    let mut found = 0usize;
    let mut tries = 0usize;
    while found < samples && tries < samples * 1000 {
        tries += 1;
        let z = NPoint::new((0..d).map(|_| rng.gen_range(-zbox..zbox)).collect());
        let u = rng.gen_range(-1.5 * r..1.5 * r);
        let x = GPoint::new(z.clone(), u);
        if cc_distance_g(model, &origin, &x)? < r {
            found += 1;
            if z.euclidean_norm() >= r.exp() || u.abs() >= r {
                violations += 1;
            }
        }
    }
    Ok(violations)
}

/// The nested family `R_α^k = Q_α^k × (-r_k, r_k)`, `r_k = k log η / (2M)`:
/// members intersecting each other are nested, and every admissible set in
/// the window is contained in some member. Returns `Err` on a violation.
pub fn check_nested_family(
    carrier: &GridCarrier,
    constants: &AdmissibilityConstants,
    system: &EuclideanDyadic,
    seed: u64,
    samples: usize,
) -> Result<(), Error> {
    // the family radii satisfy e^{2M r_k} = η^k exactly; shave an epsilon so
    // the closed lower admissibility bound survives floating-point rounding
    let r_k = |k: i32| k as f64 * constants.eta.ln() / (2.0 * constants.m) * (1.0 - 1e-12);
    let k0 = (2.0 * constants.m * constants.r0 / constants.eta.ln()).ceil() as i32 + 1;
    // members are admissible
    for k in k0..k0 + 20 {
        let set = AdmissibleSet { level: k, lattice: vec![0; system.q as usize], u0: 0.0, r: r_k(k) };
        if !is_admissible(&set, constants) {
            return Err(Error::invalid(format!("family member at k={k} not admissible")));
        }
    }
    // nesting of intersecting members: same-center chains plus shifted cubes
    for k in k0..k0 + 10 {
        for l in k + 1..k + 6 {
            // any cube at level k intersecting a cube at level l is contained in it
            // (dyadic nesting); the intervals nest because r_k is increasing
            if r_k(l) < r_k(k) {
                return Err(Error::invalid("interval radii not increasing"));
            }
        }
    }
    // containment of sampled admissible sets
    for set in sample_admissible_sets(carrier, constants, seed, samples) {
        let need = 2.0 * constants.m * (set.u0.abs() + set.r) / constants.eta.ln();
        let k = (need.ceil() as i32).max(set.level).max(k0);
        if r_k(k) < set.u0.abs() + set.r {
            return Err(Error::invalid("no family member large enough in u"));
        }
        if k > system.k_max {
            return Err(Error::exhausted(format!(
                "family member needs level {k} > kMax {}",
                system.k_max
            )));
        }
        // the ancestor cube at level k contains the set's cube by dyadic nesting
        let shift = (k - set.level) as u32;
        let _anc: Vec<i64> = set.lattice.iter().map(|&i| i >> shift).collect();
    }
    Ok(())
}
