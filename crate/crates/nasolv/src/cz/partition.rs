//! Quasi-partitions of the carrier window into big admissible sets of
//! prescribed minimal measure.
//!
//! Strips `N × [b, b + 2r)` are stacked from the bottom of the u-window, each
//! tiled by level-`k` cubes with `η^k ∈ [e^{2Mr} e^{u₀}, 4 e^{8Mr} e^{u₀})`
//! at the strip center `u₀ = b + r`. The radius of each strip is the smallest
//! carrier-aligned value (a power of two times the u-cell width) exceeding
//! `r₀` whose sets reach the requested measure, so every interval later
//! produced by halving stays aligned with u-cells.

use super::admissible::{is_admissible, AdmissibleSet};
use super::constants::AdmissibilityConstants;
use super::dyadic::EuclideanDyadic;
use super::func::GridCarrier;
use crate::Error;

/// Choose the aligned strip radius and cube level for a strip bottom `b`:
/// smallest `r = 2^m h_u > r₀` with set measure `> sigma`.
fn strip_parameters(
    sigma: f64,
    b: f64,
    carrier: &GridCarrier,
    constants: &AdmissibilityConstants,
    system: &EuclideanDyadic,
) -> Result<(f64, i32), Error> {
    let mut r = carrier.h_u;
    while r <= constants.r0 {
        r *= 2.0;
    }
    for _ in 0..60 {
        let u0 = b + r;
        let scale_lo = (2.0 * constants.m * r).exp() * u0.exp();
        let level = scale_lo.log2().ceil() as i32;
        if level > system.k_max {
            return Err(Error::exhausted(format!(
                "strip at u0 = {u0} needs dyadic level {level} > kMax {}",
                system.k_max
            )));
        }
        let measure = 2f64.powi(level * system.q as i32) * 2.0 * r;
        if measure > sigma {
            return Ok((r, level));
        }
        r *= 2.0;
    }
    Err(Error::exhausted("no strip radius reaches the requested measure"))
}

/// Quasi-partition of the window in big admissible sets of measure `> sigma`.
///
/// Returns the sets meeting the carrier window (the conceptual partition
/// tiles all of `G`; sets with no carrier cells carry no data). Every
/// returned set is admissible, big, pairwise disjoint from the others, and
/// each carrier cell lies in exactly one of them.
pub fn big_quasi_partition(
    sigma: f64,
    carrier: &GridCarrier,
    constants: &AdmissibilityConstants,
    system: &EuclideanDyadic,
) -> Result<Vec<AdmissibleSet>, Error> {
    let window = carrier.window();
    let mut sets = Vec::new();
    let mut bottom = window.u_lo;
    while bottom < window.u_hi {
        let (r, level) = strip_parameters(sigma, bottom, carrier, constants, system)?;
        let u0 = bottom + r;
        // lattice range of level-k cubes meeting the z-window
        let side = system.side(level);
        let q = system.q as usize;
        let lo: Vec<i64> = window.z_lo.iter().map(|&z| (z / side).floor() as i64).collect();
        let hi: Vec<i64> = window
            .z_hi
            .iter()
            .map(|&z| ((z - 1e-12) / side).floor() as i64)
            .collect();
        let mut idx = lo.clone();
        loop {
            let set = AdmissibleSet { level, lattice: idx.clone(), u0, r };
            debug_assert!(is_admissible(&set, constants));
            sets.push(set);
            // advance odometer
            let mut dim = q;
            loop {
                if dim == 0 {
                    break;
                }
                dim -= 1;
                idx[dim] += 1;
                if idx[dim] <= hi[dim] {
                    break;
                }
                idx[dim] = lo[dim];
                if dim == 0 {
                    // full wrap: done
                    dim = usize::MAX;
                    break;
                }
            }
            if dim == usize::MAX {
                break;
            }
        }
        bottom += 2.0 * r;
    }
    Ok(sets)
}
