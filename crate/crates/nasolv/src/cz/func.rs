//! Discrete carriers and discretized functions.
//!
//! All Calderón–Zygmund algorithms act on a product grid: `nz^Q` cubical
//! z-cells of side `2^{k_cell}` times `nu` u-cells of width `h_u = 2^{p_u}`.
//! A [`DiscretizedFunction`] is the piecewise-constant function taking value
//! `values[i]` on cell `i` and zero outside the window; its integrals against
//! the right Haar measure are exact sums `Σ w f` with `w = 2^{k_cell·Q} h_u`.
//!
//! The dyadic powers keep every interval produced by the splitting algorithm
//! aligned with cell boundaries, so set averages are computed without any
//! partial-cell bookkeeping down to single-cell resolution.

use crate::{GPoint, NPoint};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Bounding box of the carrier in `(z, u)`.
#[derive(Debug, Clone, Serialize)]
pub struct Window {
    pub z_lo: Vec<f64>,
    pub z_hi: Vec<f64>,
    pub u_lo: f64,
    pub u_hi: f64,
}

impl Window {
    /// Right-Haar measure of the window box.
    pub fn measure(&self) -> f64 {
        let zvol: f64 = self
            .z_lo
            .iter()
            .zip(&self.z_hi)
            .map(|(lo, hi)| hi - lo)
            .product();
        zvol * (self.u_hi - self.u_lo)
    }
}

/// Product grid carrier: z-cells at dyadic resolution times a u-grid.
#[derive(Debug, Clone, Serialize)]
pub struct GridCarrier {
    /// Homogeneous dimension `Q` (abelian: also the z-dimension).
    pub q: u32,
    /// z-cells per coordinate; the z-window is `[0, nz · 2^{k_cell})^Q`.
    pub nz: usize,
    /// z-cell side exponent: side `= 2^{k_cell}`.
    pub k_cell: i32,
    /// Number of u-cells.
    pub nu: usize,
    /// u-cell width, a power of two.
    pub h_u: f64,
    /// Lower edge of the u-window, a multiple of `h_u`.
    pub u_lo: f64,
}

impl GridCarrier {
    pub fn new(q: u32, nz: usize, k_cell: i32, nu: usize, h_u: f64, u_lo: f64) -> Self {
        debug_assert!(h_u.log2().fract().abs() < 1e-12, "h_u must be a power of two");
        debug_assert!(
            (u_lo / h_u - (u_lo / h_u).round()).abs() < 1e-9,
            "u_lo must be a multiple of h_u"
        );
        GridCarrier { q, nz, k_cell, nu, h_u, u_lo }
    }

    pub fn z_count(&self) -> usize {
        self.nz.pow(self.q)
    }

    pub fn len(&self) -> usize {
        self.z_count() * self.nu
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight of one cell.
    pub fn cell_weight(&self) -> f64 {
        2f64.powi(self.k_cell * self.q as i32) * self.h_u
    }

    pub fn z_cell_side(&self) -> f64 {
        2f64.powi(self.k_cell)
    }

    /// Lattice index vector of a flat z-cell index.
    pub fn z_lattice(&self, zi: usize) -> Vec<i64> {
        let mut rem = zi;
        let mut idx = vec![0i64; self.q as usize];
        for slot in idx.iter_mut().rev() {
            *slot = (rem % self.nz) as i64;
            rem /= self.nz;
        }
        idx
    }

    /// Center coordinates of a z-cell.
    pub fn z_center(&self, zi: usize) -> NPoint {
        let side = self.z_cell_side();
        NPoint::new(self.z_lattice(zi).iter().map(|&i| (i as f64 + 0.5) * side).collect())
    }

    /// Center of a u-cell.
    pub fn u_center(&self, uj: usize) -> f64 {
        self.u_lo + (uj as f64 + 0.5) * self.h_u
    }

    pub fn window(&self) -> Window {
        let extent = self.nz as f64 * self.z_cell_side();
        Window {
            z_lo: vec![0.0; self.q as usize],
            z_hi: vec![extent; self.q as usize],
            u_lo: self.u_lo,
            u_hi: self.u_lo + self.nu as f64 * self.h_u,
        }
    }

    pub fn point(&self, zi: usize, uj: usize) -> GPoint {
        GPoint::new(self.z_center(zi), self.u_center(uj))
    }
}

/// A function sampled on a [`GridCarrier`], understood as piecewise constant
/// on cells and zero outside the window.
#[derive(Debug, Clone, Serialize)]
pub struct DiscretizedFunction {
    pub carrier: GridCarrier,
    /// Values in z-major order: `values[zi * nu + uj]`.
    pub values: Vec<f64>,
}

impl DiscretizedFunction {
    pub fn new(carrier: GridCarrier, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), carrier.len());
        DiscretizedFunction { carrier, values }
    }

    pub fn value(&self, zi: usize, uj: usize) -> f64 {
        self.values[zi * self.carrier.nu + uj]
    }

    pub fn l1_norm(&self) -> f64 {
        let w = self.carrier.cell_weight();
        self.values.iter().map(|v| w * v.abs()).sum()
    }

    pub fn integral(&self) -> f64 {
        let w = self.carrier.cell_weight();
        self.values.iter().map(|v| w * v).sum()
    }

    /// Iterate `(point, weight, value)` over the carrier.
    pub fn iter_points(&self) -> impl Iterator<Item = (GPoint, f64, f64)> + '_ {
        let w = self.carrier.cell_weight();
        let nu = self.carrier.nu;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.carrier.point(i / nu, i % nu), w, v))
    }

    /// Random test function: a few Gaussian bumps plus rough noise, all
    /// nonnegative scale-free data for decomposition tests.
    pub fn random(carrier: GridCarrier, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let window = carrier.window();
        let nbumps = rng.gen_range(1..5);
        let bumps: Vec<(Vec<f64>, f64, f64, f64)> = (0..nbumps)
            .map(|_| {
                let center: Vec<f64> = window
                    .z_lo
                    .iter()
                    .zip(&window.z_hi)
                    .map(|(lo, hi)| rng.gen_range(*lo..*hi))
                    .collect();
                let uc = rng.gen_range(window.u_lo..window.u_hi);
                let width = rng.gen_range(0.3..2.0);
                let amp = rng.gen_range(0.5..3.0);
                (center, uc, width, amp)
            })
            .collect();
        let rough = rng.gen_range(0.0..0.3);
        let mut values = vec![0.0; carrier.len()];
        for zi in 0..carrier.z_count() {
            let zc = carrier.z_center(zi);
            for uj in 0..carrier.nu {
                let uc = carrier.u_center(uj);
                let mut v = 0.0;
                for (bc, bu, bw, ba) in &bumps {
                    let dz2: f64 = zc
                        .coords
                        .iter()
                        .zip(bc)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    let du = uc - bu;
                    v += ba * (-(dz2 + du * du) / (2.0 * bw * bw)).exp();
                }
                v += rough * rng.gen_range(0.0..1.0);
                values[zi * carrier.nu + uj] = v;
            }
        }
        DiscretizedFunction::new(carrier, values)
    }
}
