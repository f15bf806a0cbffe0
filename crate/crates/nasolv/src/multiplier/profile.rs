//! Spectral multiplier profiles.
//!
//! A multiplier is a bounded Borel function `F : [0, ∞) → ℂ`; operations view
//! it either on the `Δ`-side (`λ`) or on the `√Δ`-side through
//! `f(s) = F(s²)`, always evenly extended. Built-ins cover the test bank:
//!
//! * `exp:t` — the heat multiplier `e^{-tλ}`;
//! * `imagpower:γ` — the oscillating power `λ^{iγ}`;
//! * `psi` — the fixed dyadic bump with `Σ_j ψ(2^jλ) = 1`;
//! * band-limited shapes given by an even piecewise-polynomial Fourier
//!   transform profile `a` on `[0, r]` — `f(s) = ∫₀^r a(τ) cos(sτ) dτ`, so
//!   `supp f̂ ⊂ [-r, r]` exactly and the `H³` spherical kernel reduces to
//!   `-a'` (see the spherical module).

use rustfft::num_complex::Complex64;
use serde::Serialize;

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`, `C^∞` in between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let g = (-1.0 / x).exp();
        let h = (-1.0 / (1.0 - x)).exp();
        g / (g + h)
    }
}

/// The dyadic partition bump `ψ`, supported in `[1/2, 2] ⊂ [1/4, 4]`, built
/// from a smooth low-pass `L` (1 on `[0,1]`, 0 on `[2,∞)`) as
/// `ψ(λ) = L(λ) - L(2λ)`; telescoping gives `Σ_j ψ(2^jλ) = 1` for `λ > 0`.
pub fn psi_bump(lambda: f64) -> f64 {
    lowpass(lambda) - lowpass(2.0 * lambda)
}

fn lowpass(lambda: f64) -> f64 {
    1.0 - smooth_step(lambda - 1.0)
}

/// Band-limited `√Δ`-side shapes: the Fourier transform of `f` is
/// `π a(|τ|/r)` with `a` one of the even polynomial windows below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BandShape {
    /// `a(x) = 1 - x` (Fejér).
    Triangle,
    /// `a(x) = 1 - x²` (Welch).
    Parabola,
    /// `a(x) = (1 + cos πx)/2` (Hann).
    Hann,
    /// `a(x) = (1-x)²(1+2x)` (cubic smoothstep).
    Cubic,
    /// `a(x) = (1-x²)²` (biweight).
    Biweight,
}

impl BandShape {
    pub fn window(&self, x: f64) -> f64 {
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        match self {
            BandShape::Triangle => 1.0 - x,
            BandShape::Parabola => 1.0 - x * x,
            BandShape::Hann => 0.5 * (1.0 + (std::f64::consts::PI * x).cos()),
            BandShape::Cubic => (1.0 - x).powi(2) * (1.0 + 2.0 * x),
            BandShape::Biweight => (1.0 - x * x).powi(2),
        }
    }

    /// Derivative of the window (piecewise polynomial, zero outside `[0,1)`).
    pub fn window_deriv(&self, x: f64) -> f64 {
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        match self {
            BandShape::Triangle => -1.0,
            BandShape::Parabola => -2.0 * x,
            BandShape::Hann => -0.5 * std::f64::consts::PI * (std::f64::consts::PI * x).sin(),
            BandShape::Cubic => -6.0 * x * (1.0 - x),
            BandShape::Biweight => -4.0 * x * (1.0 - x * x),
        }
    }

    pub const ALL: [BandShape; 5] = [
        BandShape::Triangle,
        BandShape::Parabola,
        BandShape::Hann,
        BandShape::Cubic,
        BandShape::Biweight,
    ];
}

/// Even band-limited profile on the `√Δ` side with band `[-r, r]`.
#[derive(Debug, Clone, Serialize)]
pub struct BandLimitedProfile {
    pub shape: BandShape,
    pub band: f64,
}

impl BandLimitedProfile {
    pub fn new(shape: BandShape, band: f64) -> Self {
        assert!(band > 0.0);
        BandLimitedProfile { shape, band }
    }

    /// `f(s) = ∫₀^r a(τ/r) cos(sτ) dτ` by panel quadrature (the integrand is
    /// a fixed polynomial times a cosine; 8 panels of 32 points per unit of
    /// `rs` keep machine accuracy).
    pub fn eval_sqrt_side(&self, s: f64) -> f64 {
        let rule = crate::quad::GlRule::new(32);
        let panels = ((self.band * s.abs() / 4.0).ceil() as usize).max(4);
        rule.integrate_panels(0.0, self.band, panels, |tau| {
            self.shape.window(tau / self.band) * (s * tau).cos()
        })
    }
}

/// A general sampled or built-in multiplier of `Δ`.
#[derive(Debug, Clone)]
pub enum MultiplierProfile {
    /// `F(λ) = e^{-tλ}`.
    Exp { t: f64 },
    /// `F(λ) = λ^{iγ}` (modulus one, oscillating).
    ImagPower { gamma: f64 },
    /// The dyadic bump `ψ`.
    Psi,
    /// Values sampled on a uniform λ-grid `[0, λ_max]`; evaluated by linear
    /// interpolation, zero beyond the grid.
    Sampled { lambda_max: f64, values: Vec<Complex64> },
}

impl MultiplierProfile {
    pub fn eval(&self, lambda: f64) -> Complex64 {
        match self {
            MultiplierProfile::Exp { t } => Complex64::new((-t * lambda).exp(), 0.0),
            MultiplierProfile::ImagPower { gamma } => {
                if lambda <= 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let phase = gamma * lambda.ln();
                    Complex64::new(phase.cos(), phase.sin())
                }
            }
            MultiplierProfile::Psi => Complex64::new(psi_bump(lambda), 0.0),
            MultiplierProfile::Sampled { lambda_max, values } => {
                if lambda < 0.0 || lambda > *lambda_max || values.len() < 2 {
                    return Complex64::new(0.0, 0.0);
                }
                let pos = lambda / lambda_max * (values.len() - 1) as f64;
                let i = (pos.floor() as usize).min(values.len() - 2);
                let s = pos - i as f64;
                values[i] * (1.0 - s) + values[i + 1] * s
            }
        }
    }

    /// `f(s) = F(s²)` on the `√Δ` side.
    pub fn eval_sqrt_side(&self, s: f64) -> Complex64 {
        self.eval(s * s)
    }

    /// Parse the CLI syntax `exp`, `exp:t`, `imagpower:g`, `psi`.
    pub fn parse(spec: &str) -> Result<Self, crate::Error> {
        if spec == "psi" {
            return Ok(MultiplierProfile::Psi);
        }
        if spec == "exp" {
            return Ok(MultiplierProfile::Exp { t: 1.0 });
        }
        if let Some(t) = spec.strip_prefix("exp:") {
            let t: f64 = t
                .parse()
                .map_err(|_| crate::Error::invalid(format!("bad multiplier `{spec}`")))?;
            return Ok(MultiplierProfile::Exp { t });
        }
        if let Some(g) = spec.strip_prefix("imagpower:") {
            let gamma: f64 = g
                .parse()
                .map_err(|_| crate::Error::invalid(format!("bad multiplier `{spec}`")))?;
            return Ok(MultiplierProfile::ImagPower { gamma });
        }
        Err(crate::Error::invalid(format!(
            "unknown multiplier `{spec}` (expected exp[:t], imagpower:g, psi)"
        )))
    }
}
