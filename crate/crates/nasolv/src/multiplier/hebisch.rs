//! Band-limited decomposition of compactly supported even profiles.
//!
//! An even `f ∈ L²` supported in `[-2, 2]` splits as `f = Σ_ℓ f_ℓ` with
//! `supp f̂_ℓ ⊂ [-2^ℓ, 2^ℓ]` and weighted tails decaying like `2^{-2sℓ}`
//! times the `H^s` norm. The pieces are realized on a periodized grid by
//! Fourier-side dyadic differences of a smooth low-pass: `f̂_0 = f̂ L_0`,
//! `f̂_ℓ = f̂ (L_ℓ - L_{ℓ-1})` with `L_ℓ(τ) = S(|τ|/2^ℓ)` a `C^∞` cutoff that
//! is 1 below `2^{ℓ-1}` and 0 above `2^ℓ`, so the band limits hold exactly
//! at grid resolution.

use super::profile::smooth_step;
use crate::Error;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::sync::Arc;

/// Periodized grid: `n` samples of `[-period/2, period/2)`.
#[derive(Debug, Clone)]
pub struct FourierGrid {
    pub n: usize,
    pub period: f64,
}

impl FourierGrid {
    /// The documented default: `2^14` samples of `[-8, 8)`.
    pub fn standard() -> Self {
        FourierGrid { n: 1 << 14, period: 16.0 }
    }

    pub fn dx(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.period / 2.0 + i as f64 * self.dx()
    }

    /// Fourier node of bin `k` (signed).
    pub fn tau(&self, k: usize) -> f64 {
        let k = if k <= self.n / 2 { k as f64 } else { k as f64 - self.n as f64 };
        2.0 * std::f64::consts::PI * k / self.period
    }

    pub fn tau_max(&self) -> f64 {
        std::f64::consts::PI / self.dx()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n).map(|i| f(self.x(i))).collect()
    }
}

/// One band-limited piece with its band `[-2^ℓ, 2^ℓ]`.
#[derive(Debug, Clone)]
pub struct HebischPiece {
    pub level: u32,
    pub band: f64,
    pub values: Vec<f64>,
}

/// Result of [`hebisch_decompose`].
#[derive(Debug, Clone)]
pub struct HebischDecomposition {
    pub grid: FourierGrid,
    pub pieces: Vec<HebischPiece>,
    /// Max residual of `Σ f_ℓ - f` on the grid (the high-pass tail beyond
    /// level `l_max`).
    pub reconstruction_error: f64,
    /// Max Fourier magnitude of each piece outside its band (grid exactness).
    pub worst_band_leak: f64,
}

fn smooth_lowpass(x: f64) -> f64 {
    // 1 for |x| <= 1/2, 0 for |x| >= 1
    1.0 - smooth_step(2.0 * x.abs() - 1.0)
}

fn fft(plan: &Arc<dyn rustfft::Fft<f64>>, data: &mut [Complex64]) {
    plan.process(data);
}

/// Decompose an even profile supported in `[-2, 2]` into band-limited pieces
/// `f_0, …, f_{l_max}`.
pub fn hebisch_decompose<F: Fn(f64) -> f64>(
    f: F,
    grid: &FourierGrid,
    l_max: u32,
) -> Result<HebischDecomposition, Error> {
    let n = grid.n;
    let samples = grid.sample(&f);
    // evenness and support preconditions
    for i in 0..n {
        let x = grid.x(i);
        if x.abs() > 2.0 + 1e-9 && samples[i].abs() > 1e-12 {
            return Err(Error::invalid(format!("profile not supported in [-2,2]: f({x}) != 0")));
        }
    }
    for i in 1..n / 2 {
        let a = samples[i];
        let b = samples[n - i];
        if (a - b).abs() > 1e-9 * (1.0 + a.abs()) {
            return Err(Error::invalid("profile is not even on the grid"));
        }
    }

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut fhat: Vec<Complex64> =
        samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&forward, &mut fhat);

    let mut pieces = Vec::with_capacity(l_max as usize + 1);
    let mut prev: Vec<f64> = vec![0.0; n];
    let mut last_lowpass: Vec<f64> = vec![0.0; n];
    for l in 0..=l_max {
        let band = 2f64.powi(l as i32);
        let cur: Vec<f64> = (0..n).map(|k| smooth_lowpass(grid.tau(k) / band)).collect();
        let mut piece_hat: Vec<Complex64> = (0..n)
            .map(|k| fhat[k] * (cur[k] - prev[k]))
            .collect();
        fft(&inverse, &mut piece_hat);
        let values: Vec<f64> = piece_hat.iter().map(|v| v.re / n as f64).collect();
        pieces.push(HebischPiece { level: l, band, values });
        prev = cur.clone();
        last_lowpass = cur;
    }

    // reconstruction error = || fhat (1 - L_{l_max}) ||-driven residual
    let mut recon = vec![0.0f64; n];
    for p in &pieces {
        for (r, v) in recon.iter_mut().zip(&p.values) {
            *r += v;
        }
    }
    let reconstruction_error = recon
        .iter()
        .zip(&samples)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let _ = last_lowpass;

    // band-limit exactness at grid resolution
    let scale = fhat.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1e-300);
    let mut worst_band_leak = 0.0f64;
    for p in &pieces {
        let mut ph: Vec<Complex64> =
            p.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft(&forward, &mut ph);
        for k in 0..n {
            if grid.tau(k).abs() > p.band * (1.0 + 1e-12) {
                worst_band_leak = worst_band_leak.max(ph[k].norm() / scale);
            }
        }
    }

    Ok(HebischDecomposition { grid: grid.clone(), pieces, reconstruction_error, worst_band_leak })
}

impl HebischDecomposition {
    /// Weighted tail `∫ |f_ℓ(λ)|² (λ^a + λ^b) dλ` per level (grid sum over
    /// `λ > 0`).
    pub fn weighted_tails(&self, a: f64, b: f64) -> Vec<f64> {
        let dx = self.grid.dx();
        self.pieces
            .iter()
            .map(|p| {
                let mut acc = 0.0;
                for i in 0..self.grid.n {
                    let lam = self.grid.x(i);
                    if lam > 0.0 {
                        acc += p.values[i] * p.values[i] * (lam.powf(a) + lam.powf(b)) * dx;
                    }
                }
                acc
            })
            .collect()
    }

    /// Least-squares slope of `log2(tail_ℓ)` against `ℓ` over `ℓ ∈ [l_lo, l_hi]`.
    pub fn tail_slope(&self, a: f64, b: f64, l_lo: u32, l_hi: u32) -> f64 {
        let tails = self.weighted_tails(a, b);
        let pts: Vec<(f64, f64)> = (l_lo..=l_hi.min(self.pieces.len() as u32 - 1))
            .map(|l| (l as f64, tails[l as usize].max(1e-300).log2()))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }
}

/// The `C^∞` even bump supported in `[-2, -1/4] ∪ [1/4, 2]`-ish used as the
/// smooth test profile (the `ψ` bump symmetrized to the line).
pub fn smooth_even_bump(x: f64) -> f64 {
    let a = x.abs();
    let y = (a - 0.25) / 1.75;
    if y <= 0.0 || y >= 1.0 {
        0.0
    } else {
        (-0.25 / (y * (1.0 - y))).exp()
    }
}

/// Quadratic B-spline bump supported in `[-2, 2]`: `C¹`, in `H^s` exactly up
/// to `s < 5/2` — the canonical `s = 2` test function.
pub fn quadratic_spline_bump(x: f64) -> f64 {
    let a = x.abs() * 0.75; // support |x| <= 2 -> a <= 1.5
    if a <= 0.5 {
        0.75 - a * a
    } else if a <= 1.5 {
        0.5 * (1.5 - a) * (1.5 - a)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_reconstruction_below_1e8() {
        let grid = FourierGrid::standard();
        let d = hebisch_decompose(smooth_even_bump, &grid, 12).unwrap();
        assert!(
            d.reconstruction_error < 1e-8,
            "reconstruction {}",
            d.reconstruction_error
        );
        assert!(d.worst_band_leak < 1e-10, "band leak {}", d.worst_band_leak);
    }

    #[test]
    fn spline_tail_slope_matches_h2() {
        let grid = FourierGrid::standard();
        let d = hebisch_decompose(quadratic_spline_bump, &grid, 12).unwrap();
        // lambda^3-weighted tails: slope must beat -2s + 0.2 for s = 2
        let slope = d.tail_slope(3.0, 3.0, 4, 12);
        assert!(slope <= -3.8, "slope {slope}");
        // reconstruction also fine for the spline
        assert!(d.reconstruction_error < 1e-8);
    }

    #[test]
    fn zero_profile_zero_pieces() {
        let grid = FourierGrid::standard();
        let d = hebisch_decompose(|_| 0.0, &grid, 6).unwrap();
        for p in &d.pieces {
            assert!(p.values.iter().all(|v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn support_violation_rejected() {
        let grid = FourierGrid::standard();
        assert!(hebisch_decompose(|x| (-x * x / 20.0).exp(), &grid, 4).is_err());
        // odd function rejected
        assert!(hebisch_decompose(
            |x| if x.abs() < 1.0 { x } else { 0.0 },
            &grid,
            4
        )
        .is_err());
    }

    #[test]
    fn dilates_scale_bands() {
        // f_t = f(t .): pieces dilate, bands scale by t — arithmetic identity
        // checked through the grid machinery at t = 2
        let grid = FourierGrid::standard();
        let d1 = hebisch_decompose(smooth_even_bump, &grid, 10).unwrap();
        let d2 = hebisch_decompose(|x| smooth_even_bump(2.0 * x), &grid, 10).unwrap();
        // the dilated profile is supported in [-1, 1] and still decomposes
        assert!(d2.reconstruction_error < 1e-8);
        assert_eq!(d1.pieces.len(), d2.pieces.len());
    }
}
