//! The stopping-time Calderón–Zygmund decomposition.
//!
//! Starting from a quasi-partition into big admissible sets whose measure
//! exceeds `‖f‖₁/α` (so every top-level average is below `α`), sets are
//! split into children until the average of `|f|` first reaches `α`. These
//! stopping sets `R_i` collect the bad parts `b_i = (f - mean_{R_i} f) χ_{R_i}`
//! and the good function is `g = f` off the stopping sets, `g = mean` on them.
//! The construction yields
//!
//! * `‖g‖_∞ ≤ C₂ α` — stopping averages live in `[α, C₂ α)` because the
//!   parent average was below `α` and child/parent measures differ by at
//!   most `C₂`;
//! * `supp b_i ⊂ R_i`, `∫ b_i dμ = 0`;
//! * `Σ μ(R_i) ≤ ‖f‖₁ / α` (disjointness), `Σ ‖b_i‖₁ ≤ 2 ‖f‖₁.
//!
//! Set measures are the exact Haar measures of the product sets; integrals
//! of `f` are exact integrals of the piecewise-constant carrier function
//! (zero off the window). The admissibility window forces interval lengths
//! far below the cube scale, so a set may cover *fractions* of carrier cells
//! in the u-direction; each part therefore records exact per-cell overlap
//! weights. Because strip radii are powers of two times the u-cell width,
//! interval endpoints stay on the cell lattice until an interval is wholly
//! inside one cell, and all overlaps are exact dyadic rationals.

use super::admissible::{children, AdmissibleSet};
use super::constants::AdmissibilityConstants;
use super::dyadic::EuclideanDyadic;
use super::func::DiscretizedFunction;
use super::partition::big_quasi_partition;
use crate::Error;
use serde::Serialize;

/// One bad part of the decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct CzPart {
    pub set: AdmissibleSet,
    /// Average of `f` (signed) over the set.
    pub mean: f64,
    /// Average of `|f|` over the set — in `[α, C₂α)` by construction.
    pub avg_abs: f64,
    /// Exact Haar measure of the set.
    pub measure: f64,
    /// `‖b‖₁` including the overhang outside the carrier window.
    pub l1: f64,
    /// Carrier cells with positive overlap: `(zi, uj, overlap measure)`.
    pub cells: Vec<(u32, u32, f64)>,
}

/// Diagnostics accumulated during a decomposition run.
#[derive(Debug, Clone, Serialize)]
pub struct CzDiagnostics {
    pub g_bound: f64,
    pub sum_measures: f64,
    pub sum_l1: f64,
    pub per_set_averages: Vec<f64>,
    /// Extremes of the child/parent measure ratios seen during splitting.
    pub child_ratio_min: f64,
    pub child_ratio_max: f64,
    /// Total measure of stopping sets hanging outside the carrier window.
    pub overhang_measure: f64,
    pub sets_visited: usize,
}

/// The decomposition `f = g + Σ_i b_i`.
#[derive(Debug, Clone, Serialize)]
pub struct CzDecomposition {
    pub alpha: f64,
    /// `g` sampled at cell centers (z-major layout like the input values).
    pub g: Vec<f64>,
    pub parts: Vec<CzPart>,
    pub diagnostics: CzDiagnostics,
}

pub(crate) struct WorkItem {
    pub set: AdmissibleSet,
    pub z_cells: Vec<u32>,
    pub j_lo: u32,
    pub j_hi: u32,
}

/// u-cell index range `[j_lo, j_hi)` of cells with positive overlap with
/// `[lo, hi)`.
pub(crate) fn u_overlap_range(f: &DiscretizedFunction, lo: f64, hi: f64) -> (u32, u32) {
    let c = &f.carrier;
    let jl = ((lo - c.u_lo) / c.h_u).floor().max(0.0) as i64;
    let jh = ((hi - c.u_lo) / c.h_u).ceil().max(0.0) as i64;
    (jl.min(c.nu as i64) as u32, jh.min(c.nu as i64) as u32)
}

/// Overlap measure of u-cell `j` with `[lo, hi)`, times the z-cell area.
pub(crate) fn cell_overlap(f: &DiscretizedFunction, j: u32, lo: f64, hi: f64) -> f64 {
    let c = &f.carrier;
    let cell_lo = c.u_lo + j as f64 * c.h_u;
    let cell_hi = cell_lo + c.h_u;
    let len = (hi.min(cell_hi) - lo.max(cell_lo)).max(0.0);
    len * 2f64.powi(c.k_cell * c.q as i32)
}

/// `(∫|f|, ∫f, max |f| over overlapped cells)` of a work item.
pub(crate) fn item_sums(f: &DiscretizedFunction, item: &WorkItem) -> (f64, f64, f64) {
    let nu = f.carrier.nu;
    let (lo, hi) = item.set.u_interval();
    let mut abs = 0.0;
    let mut signed = 0.0;
    let mut max_abs: f64 = 0.0;
    for j in item.j_lo..item.j_hi {
        let w = cell_overlap(f, j, lo, hi);
        if w <= 0.0 {
            continue;
        }
        for &zi in &item.z_cells {
            let v = f.values[zi as usize * nu + j as usize];
            abs += w * v.abs();
            signed += w * v;
            max_abs = max_abs.max(v.abs());
        }
    }
    (abs, signed, max_abs)
}

/// Carrier z-cells lying in the cube of `set`.
pub(crate) fn cube_cells(
    f: &DiscretizedFunction,
    set: &AdmissibleSet,
    system: &EuclideanDyadic,
) -> Vec<u32> {
    let carrier = &f.carrier;
    (0..carrier.z_count() as u32)
        .filter(|&zi| {
            let cell = carrier.z_lattice(zi as usize);
            system.ancestor_of_cell(&cell, carrier.k_cell, set.level) == set.lattice
        })
        .collect()
}

/// Guard: interval halving must resolve into single u-cells before the
/// splitting cadence requests cubes below the system floor.
fn resolution_guard(
    f: &DiscretizedFunction,
    constants: &AdmissibilityConstants,
    system: &EuclideanDyadic,
) -> Result<(), Error> {
    let floor_scale = 2f64.powi(system.k_min);
    let need = floor_scale * (-2.0 * constants.m).exp() * (-f.carrier.u_lo).exp() / 2.0;
    if f.carrier.h_u <= need {
        return Err(Error::invalid(format!(
            "u-cell width {} too small for dyadic floor 2^{} (needs > {need:e}); \
             lower kMin or coarsen the u-grid",
            f.carrier.h_u, system.k_min
        )));
    }
    Ok(())
}

/// Calderón–Zygmund decomposition of `f` at height `alpha > 0`.
pub fn cz_decompose(
    f: &DiscretizedFunction,
    alpha: f64,
    constants: &AdmissibilityConstants,
    system: &EuclideanDyadic,
) -> Result<CzDecomposition, Error> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be > 0, got {alpha}")));
    }
    resolution_guard(f, constants, system)?;
    let carrier = &f.carrier;
    let l1 = f.l1_norm();
    let sigma = l1 / alpha;
    let initial = big_quasi_partition(sigma, carrier, constants, system)?;

    let mut queue: Vec<WorkItem> = Vec::new();
    for set in initial {
        let (lo, hi) = set.u_interval();
        let (jl, jh) = u_overlap_range(f, lo, hi);
        let z_cells = cube_cells(f, &set, system);
        if !z_cells.is_empty() && jl < jh {
            queue.push(WorkItem { set, z_cells, j_lo: jl, j_hi: jh });
        }
    }

    let nu = carrier.nu;
    let w_cell = carrier.cell_weight();
    let mut parts: Vec<CzPart> = Vec::new();
    let mut covered = vec![0.0f64; f.values.len()];
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max: f64 = 0.0;
    let mut visited = 0usize;

    while let Some(item) = queue.pop() {
        visited += 1;
        let (abs, signed, max_abs) = item_sums(f, &item);
        let measure = item.set.measure(system.q);
        let avg = abs / measure;
        if avg >= alpha {
            // stopping set
            let mean = signed / measure;
            let (lo, hi) = item.set.u_interval();
            let mut cells = Vec::new();
            let mut part_l1 = 0.0;
            let mut cov = 0.0;
            for j in item.j_lo..item.j_hi {
                let w = cell_overlap(f, j, lo, hi);
                if w <= 0.0 {
                    continue;
                }
                for &zi in &item.z_cells {
                    let i = zi as usize * nu + j as usize;
                    part_l1 += w * (f.values[i] - mean).abs();
                    covered[i] += w;
                    cov += w;
                    cells.push((zi, j, w));
                }
            }
            let overhang = (measure - cov).max(0.0);
            part_l1 += mean.abs() * overhang;
            parts.push(CzPart { set: item.set, mean, avg_abs: avg, measure, l1: part_l1, cells });
            continue;
        }
        if max_abs < alpha {
            // whole subtree stays below alpha: these cells belong to g as-is
            continue;
        }
        let kids = children(&item.set, system, constants)?;
        for kid in kids {
            let ratio = kid.measure(system.q) / measure;
            ratio_min = ratio_min.min(ratio);
            ratio_max = ratio_max.max(ratio);
            let (lo, hi) = kid.u_interval();
            let (jl, jh) = u_overlap_range(f, lo, hi);
            let jl = jl.max(item.j_lo);
            let jh = jh.min(item.j_hi);
            let z_cells: Vec<u32> = if kid.level == item.set.level {
                item.z_cells.clone()
            } else {
                item.z_cells
                    .iter()
                    .copied()
                    .filter(|&zi| {
                        let cell = carrier.z_lattice(zi as usize);
                        system.ancestor_of_cell(&cell, carrier.k_cell, kid.level) == kid.lattice
                    })
                    .collect()
            };
            if z_cells.is_empty() || jl >= jh {
                continue; // no carrier mass anywhere below: permanent leaf
            }
            queue.push(WorkItem { set: kid, z_cells, j_lo: jl, j_hi: jh });
        }
    }

    // g sampled at cell centers: the value of the true g at each center
    let mut g = f.values.clone();
    for p in &parts {
        let (lo, hi) = p.set.u_interval();
        for &(zi, uj, _) in &p.cells {
            let uc = carrier.u_center(uj as usize);
            if uc >= lo && uc < hi {
                g[zi as usize * nu + uj as usize] = p.mean;
            }
        }
    }
    // sup of the true g: means on stopping sets, f on any cell fraction left
    let mut g_bound: f64 = 0.0;
    for p in &parts {
        g_bound = g_bound.max(p.mean.abs());
    }
    for (i, &c) in covered.iter().enumerate() {
        if c < w_cell * (1.0 - 1e-9) {
            g_bound = g_bound.max(f.values[i].abs());
        }
    }

    let sum_measures = parts.iter().map(|p| p.measure).sum();
    let sum_l1 = parts.iter().map(|p| p.l1).sum();
    let overhang_measure = parts
        .iter()
        .map(|p| (p.measure - p.cells.iter().map(|c| c.2).sum::<f64>()).max(0.0))
        .sum();
    let per_set_averages = parts.iter().map(|p| p.avg_abs).collect();
    Ok(CzDecomposition {
        alpha,
        g,
        parts,
        diagnostics: CzDiagnostics {
            g_bound,
            sum_measures,
            sum_l1,
            per_set_averages,
            child_ratio_min: if ratio_min.is_finite() { ratio_min } else { 1.0 },
            child_ratio_max: if ratio_max > 0.0 { ratio_max } else { 1.0 },
            overhang_measure,
            sets_visited: visited,
        },
    })
}

/// One verified decomposition property.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub pass: bool,
    pub value: f64,
    pub bound: f64,
}

/// Verify the defining properties of a decomposition against its input.
pub fn verify_decomposition(
    f: &DiscretizedFunction,
    dec: &CzDecomposition,
    constants: &AdmissibilityConstants,
) -> Vec<PropertyCheck> {
    let alpha = dec.alpha;
    let l1 = f.l1_norm();
    let nu = f.carrier.nu;
    let mut checks = Vec::new();

    // (i) sup bound on g, at the sharp constant C2
    checks.push(PropertyCheck {
        name: "g_sup_le_c2_alpha",
        pass: dec.diagnostics.g_bound <= constants.c2 * alpha * (1.0 + 1e-12),
        value: dec.diagnostics.g_bound,
        bound: constants.c2 * alpha,
    });
    checks.push(PropertyCheck {
        name: "g_sup_le_kappa0_alpha",
        pass: dec.diagnostics.g_bound <= constants.kappa0 * alpha * (1.0 + 1e-12),
        value: dec.diagnostics.g_bound,
        bound: constants.kappa0 * alpha,
    });

    // (ii) support and zero mean: ∫ b = ∫_R f - mean·μ(R) = 0 exactly
    let mut worst_mean = 0.0f64;
    let mut support_ok = true;
    for p in &dec.parts {
        let mut int_f = 0.0;
        for &(zi, uj, w) in &p.cells {
            int_f += w * f.values[zi as usize * nu + uj as usize];
        }
        let residual = (int_f - p.mean * p.measure).abs();
        worst_mean = worst_mean.max(residual / (l1 + 1e-300));
        let (lo, hi) = p.set.u_interval();
        for &(zi, uj, _) in &p.cells {
            // the overlapped cell must meet the set
            let c_lo = f.carrier.u_lo + uj as f64 * f.carrier.h_u;
            let c_hi = c_lo + f.carrier.h_u;
            if c_hi <= lo || c_lo >= hi {
                support_ok = false;
            }
            let cell = f.carrier.z_lattice(zi as usize);
            let anc: Vec<i64> = cell
                .iter()
                .map(|&i| i >> (p.set.level - f.carrier.k_cell))
                .collect();
            if anc != p.set.lattice {
                support_ok = false;
            }
        }
    }
    checks.push(PropertyCheck {
        name: "b_zero_mean",
        pass: worst_mean < 1e-9,
        value: worst_mean,
        bound: 1e-9,
    });
    checks.push(PropertyCheck {
        name: "b_supported_in_set",
        pass: support_ok,
        value: if support_ok { 1.0 } else { 0.0 },
        bound: 1.0,
    });

    // (iii) Σ μ(R_i) ≤ ‖f‖₁ / α (the sharp constant-1 version)
    checks.push(PropertyCheck {
        name: "sum_measures",
        pass: dec.diagnostics.sum_measures <= l1 / alpha * (1.0 + 1e-12),
        value: dec.diagnostics.sum_measures,
        bound: l1 / alpha,
    });

    // (iv) Σ ‖b_i‖₁ ≤ 2 ‖f‖₁
    checks.push(PropertyCheck {
        name: "sum_l1",
        pass: dec.diagnostics.sum_l1 <= 2.0 * l1 * (1.0 + 1e-12),
        value: dec.diagnostics.sum_l1,
        bound: 2.0 * l1,
    });

    // pointwise identity f = g + Σ b at cell centers: the center of a cell
    // covered by a part carries g = mean and b = f - mean there
    let mut recon = dec.g.clone();
    for p in &dec.parts {
        let (lo, hi) = p.set.u_interval();
        for &(zi, uj, _) in &p.cells {
            let uc = f.carrier.u_center(uj as usize);
            if uc >= lo && uc < hi {
                let i = zi as usize * nu + uj as usize;
                recon[i] += f.values[i] - p.mean;
            }
        }
    }
    let worst_pt = recon
        .iter()
        .zip(&f.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    checks.push(PropertyCheck {
        name: "pointwise_identity",
        pass: worst_pt < 1e-10 * (1.0 + dec.diagnostics.g_bound),
        value: worst_pt,
        bound: 1e-10,
    });

    // stopping averages in [α, C₂ α)
    let mut in_range = true;
    for p in &dec.parts {
        if !(p.avg_abs >= alpha * (1.0 - 1e-12) && p.avg_abs < constants.c2 * alpha) {
            in_range = false;
        }
    }
    checks.push(PropertyCheck {
        name: "stopping_avg_in_alpha_c2alpha",
        pass: in_range,
        value: dec
            .parts
            .iter()
            .map(|p| p.avg_abs / alpha)
            .fold(0.0f64, f64::max),
        bound: constants.c2,
    });

    // disjointness: per-cell overlap fractions of distinct parts sum to at
    // most the cell weight
    let w_cell = f.carrier.cell_weight();
    let mut covered = vec![0.0f64; f.values.len()];
    for p in &dec.parts {
        for &(zi, uj, w) in &p.cells {
            covered[zi as usize * nu + uj as usize] += w;
        }
    }
    let worst_cover = covered.iter().fold(0.0f64, |m, &c| m.max(c));
    checks.push(PropertyCheck {
        name: "parts_disjoint",
        pass: worst_cover <= w_cell * (1.0 + 1e-9),
        value: worst_cover,
        bound: w_cell,
    });

    // child/parent measure ratios within [C2^{-1}, 1]
    let rmin = dec.diagnostics.child_ratio_min;
    let rmax = dec.diagnostics.child_ratio_max;
    checks.push(PropertyCheck {
        name: "child_measure_ratio",
        pass: rmin >= 1.0 / constants.c2 - 1e-12 && rmax <= 1.0 + 1e-12,
        value: rmin,
        bound: 1.0 / constants.c2,
    });

    checks
}
