//! Mixed Mihlin–Hörmander norms.
//!
//! `‖F‖_{0,s} = sup_{t<1} ‖F(t·)ψ‖_{H^s}` and
//! `‖F‖_{∞,s} = sup_{t≥1} ‖F(t·)ψ‖_{H^s}`, with `ψ` the fixed dyadic bump.
//! The supremum is taken over a geometric `t`-grid of ratio `2^{1/4}` and
//! each local Sobolev norm is computed Fourier-side on the periodized grid:
//! `‖g‖_{H^s}² = (2π)^{-1} ∫ (1+τ²)^s |ĝ(τ)|² dτ`.

use super::hebisch::FourierGrid;
use super::profile::psi_bump;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Which side of the mixed condition to take the supremum over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhRegime {
    /// `t < 1` (controls the multiplier near `λ = 0`).
    Low,
    /// `t ≥ 1` (controls the multiplier at infinity).
    High,
}

/// Local Sobolev norm `‖g‖_{H^s}` of a complex profile sampled on the grid.
pub fn sobolev_norm(grid: &FourierGrid, samples: &[Complex64], s: f64) -> f64 {
    let n = grid.n;
    let mut data = samples.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut data);
    let dx = grid.dx();
    // G_k = DFT * dx approximates ĝ(τ_k); Δτ = 2π/(n dx)
    let mut acc = 0.0;
    for (k, v) in data.iter().enumerate() {
        let tau = grid.tau(k);
        acc += (1.0 + tau * tau).powf(s) * (v.norm_sqr() * dx * dx);
    }
    (acc / (n as f64 * dx)).sqrt()
}

/// Result of an MH-norm scan: the supremum and where it was attained.
#[derive(Debug, Clone)]
pub struct MhNorm {
    pub value: f64,
    pub attained_at_t: f64,
    pub t_grid_len: usize,
}

/// `sup_t ‖F(t·)ψ‖_{H^s}` over the geometric `t`-grid of ratio `2^{1/4}`;
/// `Low` scans `t = 2^{-j/4}` for `j = 1..4·decades`, `High` scans
/// `t = 2^{j/4}` for `j = 0..4·decades`.
pub fn mh_norm<F: Fn(f64) -> Complex64>(
    f: F,
    s: f64,
    regime: MhRegime,
    decades: u32,
    grid: &FourierGrid,
) -> MhNorm {
    let steps = 4 * decades;
    let mut best = 0.0f64;
    let mut best_t = 1.0;
    let js: Vec<i32> = match regime {
        MhRegime::Low => (1..=steps as i32).map(|j| -j).collect(),
        MhRegime::High => (0..=steps as i32).collect(),
    };
    for j in js {
        let t = 2f64.powf(j as f64 / 4.0);
        let samples: Vec<Complex64> = (0..grid.n)
            .map(|i| {
                let lam = grid.x(i);
                let w = psi_bump(lam);
                if w == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    f(t * lam) * w
                }
            })
            .collect();
        let norm = sobolev_norm(grid, &samples, s);
        if norm > best {
            best = norm;
            best_t = t;
        }
    }
    MhNorm { value: best, attained_at_t: best_t, t_grid_len: steps as usize + 1 }
}
