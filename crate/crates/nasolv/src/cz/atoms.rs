//! Atom and BMO-oscillation validators on admissible sets.
//!
//! An atom is supported in an admissible set `R`, has `‖a‖₂ ≤ μ(R)^{-1/2}`
//! and zero mean; the BMO oscillation of `f` over `R` is the normalized L²
//! distance to its average. Norms and means are carrier quadrature sums; the
//! measure in the atom size bound is the exact Haar measure of `R`.

use super::admissible::AdmissibleSet;
use super::dyadic::EuclideanDyadic;
use super::func::DiscretizedFunction;

/// Carrier cells of an admissible set.
fn cells_of(
    f: &DiscretizedFunction,
    set: &AdmissibleSet,
    system: &EuclideanDyadic,
) -> Vec<usize> {
    let carrier = &f.carrier;
    let (lo, hi) = set.u_interval();
    let mut out = Vec::new();
    for zi in 0..carrier.z_count() {
        let cell = carrier.z_lattice(zi);
        if system.ancestor_of_cell(&cell, carrier.k_cell, set.level) != set.lattice {
            continue;
        }
        for uj in 0..carrier.nu {
            let uc = carrier.u_center(uj);
            if uc >= lo && uc < hi {
                out.push(zi * carrier.nu + uj);
            }
        }
    }
    out
}

/// Verdict of [`atom_check`], with the measured quantities.
#[derive(Debug, Clone)]
pub struct AtomReport {
    pub supported: bool,
    pub l2_norm: f64,
    pub l2_bound: f64,
    pub mean: f64,
    pub pass: bool,
}

/// Check the three atom conditions for `a` on the set `R`.
pub fn atom_check(
    a: &DiscretizedFunction,
    set: &AdmissibleSet,
    system: &EuclideanDyadic,
) -> AtomReport {
    let w = a.carrier.cell_weight();
    let inside = cells_of(a, set, system);
    let mut mask = vec![false; a.values.len()];
    for &i in &inside {
        mask[i] = true;
    }
    let supported = a
        .values
        .iter()
        .enumerate()
        .all(|(i, v)| mask[i] || v.abs() < 1e-13);
    let l2: f64 = inside.iter().map(|&i| w * a.values[i] * a.values[i]).sum::<f64>().sqrt();
    let mean: f64 = inside.iter().map(|&i| w * a.values[i]).sum();
    let l2_bound = set.measure(system.q).powf(-0.5);
    let scale: f64 = inside.iter().map(|&i| w * a.values[i].abs()).sum::<f64>().max(1e-300);
    let pass = supported && l2 <= l2_bound * (1.0 + 1e-9) && mean.abs() <= 1e-10 * scale;
    AtomReport { supported, l2_norm: l2, l2_bound, mean, pass }
}

/// Normalized L² oscillation `(μ(R)^{-1} ∫_R |f - f_R|² dμ)^{1/2}` with the
/// carrier measure of `R` (both the mean and the normalization are quadrature
/// sums over the cells of `R`, so constants have oscillation exactly zero).
pub fn bmo_oscillation(
    f: &DiscretizedFunction,
    set: &AdmissibleSet,
    system: &EuclideanDyadic,
) -> f64 {
    let w = f.carrier.cell_weight();
    let inside = cells_of(f, set, system);
    if inside.is_empty() {
        return 0.0;
    }
    let mu: f64 = w * inside.len() as f64;
    let mean: f64 = inside.iter().map(|&i| w * f.values[i]).sum::<f64>() / mu;
    let osc: f64 = inside
        .iter()
        .map(|&i| w * (f.values[i] - mean) * (f.values[i] - mean))
        .sum::<f64>()
        / mu;
    osc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cz::constants::AdmissibilityConstants;
    use crate::cz::func::GridCarrier;
    use crate::cz::partition::big_quasi_partition;

    fn setup() -> (GridCarrier, AdmissibilityConstants, EuclideanDyadic) {
        let carrier = GridCarrier::new(2, 8, 0, 16, 0.25, -2.0);
        let constants = AdmissibilityConstants::euclidean(3.5, 1.2, 2.0, 2).unwrap();
        let system = EuclideanDyadic::new(2, -8, 80).unwrap();
        (carrier, constants, system)
    }

    /// A small admissible set fully inside the window.
    fn inner_set(constants: &AdmissibilityConstants) -> AdmissibleSet {
        // r = 0.25 (small), u0 = -0.875 aligned mid-window; level from the window
        let r = 0.25f64;
        let u0 = -0.875f64;
        let lo = r * (2.0 * constants.m).exp() * u0.exp();
        let level = lo.log2().ceil() as i32;
        AdmissibleSet { level, lattice: vec![0, 0], u0, r }
    }

    #[test]
    fn two_halves_atom_passes() {
        let (carrier, constants, system) = setup();
        let set = inner_set(&constants);
        assert!(crate::cz::admissible::is_admissible(&set, &constants));
        let cells = cells_of(
            &DiscretizedFunction::new(carrier.clone(), vec![0.0; carrier.len()]),
            &set,
            &system,
        );
        assert!(cells.len() >= 2, "need at least 2 cells, got {}", cells.len());
        let mut values = vec![0.0; carrier.len()];
        let half = cells.len() / 2;
        for (pos, &i) in cells.iter().enumerate() {
            values[i] = if pos < half { 1.0 } else { -1.0 };
        }
        if cells.len() % 2 == 1 {
            values[*cells.last().unwrap()] = 0.0;
        }
        // normalize to the atom size bound
        let w = carrier.cell_weight();
        let l2: f64 = values.iter().map(|v| w * v * v).sum::<f64>().sqrt();
        let target = set.measure(system.q).powf(-0.5);
        let c = target / l2;
        for v in values.iter_mut() {
            *v *= c;
        }
        let a = DiscretizedFunction::new(carrier, values);
        let rep = atom_check(&a, &set, &system);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn nonzero_mean_fails() {
        let (carrier, constants, system) = setup();
        let set = inner_set(&constants);
        let cells = cells_of(
            &DiscretizedFunction::new(carrier.clone(), vec![0.0; carrier.len()]),
            &set,
            &system,
        );
        let mut values = vec![0.0; carrier.len()];
        let amp = set.measure(system.q).powf(-0.5) * 0.1;
        for &i in &cells {
            values[i] = amp;
        }
        let a = DiscretizedFunction::new(carrier, values);
        let rep = atom_check(&a, &set, &system);
        assert!(!rep.pass && rep.supported);
    }

    #[test]
    fn constant_has_zero_oscillation() {
        let (carrier, constants, system) = setup();
        let f = DiscretizedFunction::new(carrier.clone(), vec![3.25; carrier.len()]);
        for set in big_quasi_partition(0.5, &carrier, &constants, &system).unwrap() {
            assert_eq!(bmo_oscillation(&f, &set, &system), 0.0);
        }
        let set = inner_set(&constants);
        assert_eq!(bmo_oscillation(&f, &set, &system), 0.0);
    }
}
