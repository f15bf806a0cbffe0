//! Closed-form solution of the reparametrization system
//!
//! ```text
//! v̇ = e^{2u},    u̇ = ν,    ν̇ = -2 H₀ᴺ e^{2u},
//! v(0) = 0,  u(0) = u₀,  ν(0) = ν₀,
//! ```
//!
//! which couples a cogeodesic on `N` (of constant Hamiltonian `H₀ᴺ`) to the
//! cogeodesic it induces on `G`. The solution splits into three branches:
//! `H₀ᴺ > 0` (tanh/log-cosh profile), `H₀ᴺ = 0, ν₀ ≠ 0` (pure exponential)
//! and `H₀ᴺ = 0, ν₀ = 0` (constant `u`). In every branch `v` is a strictly
//! increasing diffeomorphism onto its range, and
//!
//! ```text
//! e^{2u(t)} = e^{2u₀} + 2 v(t) (ν₀ - H₀ᴺ v(t))
//! ```
//!
//! holds identically.

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReparamBranch {
    PositiveH,
    ZeroHNuNonzero,
    ZeroHNuZero,
}

/// The solved reparametrization, exposing `v`, `u`, `ν` and the inverse of `v`.
#[derive(Debug, Clone)]
pub struct ReparamSolution {
    pub branch: ReparamBranch,
    /// `ω = √(ν₀² + 2 H₀ᴺ e^{2u₀})` (positive-Hamiltonian branch only).
    pub omega: f64,
    pub t_star: f64,
    pub u_star: f64,
    pub u0: f64,
    pub nu0: f64,
    pub h0n: f64,
}

impl ReparamSolution {
    pub fn v(&self, t: f64) -> f64 {
        match self.branch {
            ReparamBranch::PositiveH => {
                (self.omega * (self.omega * (t - self.t_star)).tanh() + self.nu0)
                    / (2.0 * self.h0n)
            }
            ReparamBranch::ZeroHNuNonzero => {
                (2.0 * self.u0).exp() * ((2.0 * self.nu0 * t).exp_m1()) / (2.0 * self.nu0)
            }
            ReparamBranch::ZeroHNuZero => (2.0 * self.u0).exp() * t,
        }
    }

    pub fn u(&self, t: f64) -> f64 {
        match self.branch {
            ReparamBranch::PositiveH => {
                self.u_star - (self.omega * (t - self.t_star)).cosh().ln()
            }
            _ => self.u0 + self.nu0 * t,
        }
    }

    pub fn nu(&self, t: f64) -> f64 {
        match self.branch {
            ReparamBranch::PositiveH => -self.omega * (self.omega * (t - self.t_star)).tanh(),
            _ => self.nu0,
        }
    }

    /// Inverse of `v`; `Err` when `target` is outside the range of `v`.
    pub fn v_inverse(&self, target: f64) -> Result<f64, Error> {
        match self.branch {
            ReparamBranch::PositiveH => {
                let arg = (2.0 * self.h0n * target - self.nu0) / self.omega;
                if arg.abs() >= 1.0 {
                    return Err(Error::invalid(format!(
                        "{target} is outside the range of v (|arg| = {} >= 1)",
                        arg.abs()
                    )));
                }
                Ok(self.t_star + arg.atanh() / self.omega)
            }
            ReparamBranch::ZeroHNuNonzero => {
                let arg = 2.0 * self.nu0 * target * (-2.0 * self.u0).exp();
                if arg <= -1.0 {
                    return Err(Error::invalid(format!("{target} outside the range of v")));
                }
                Ok(arg.ln_1p() / (2.0 * self.nu0))
            }
            ReparamBranch::ZeroHNuZero => Ok(target * (-2.0 * self.u0).exp()),
        }
    }
}

/// Solve the reparametrization system for initial data `(u₀, ν₀, H₀ᴺ)`.
pub fn reparam_solve(u0: f64, nu0: f64, h0n: f64) -> Result<ReparamSolution, Error> {
    if h0n < 0.0 {
        return Err(Error::invalid(format!("H0^N must be >= 0, got {h0n}")));
    }
    if h0n > 0.0 {
        let omega = (nu0 * nu0 + 2.0 * h0n * (2.0 * u0).exp()).sqrt();
        let u_star = (omega / (2.0 * h0n).sqrt()).ln();
        let t_star = (nu0 / omega).atanh() / omega;
        Ok(ReparamSolution {
            branch: ReparamBranch::PositiveH,
            omega,
            t_star,
            u_star,
            u0,
            nu0,
            h0n,
        })
    } else if nu0 != 0.0 {
        Ok(ReparamSolution {
            branch: ReparamBranch::ZeroHNuNonzero,
            omega: nu0.abs(),
            t_star: 0.0,
            u_star: u0,
            u0,
            nu0,
            h0n: 0.0,
        })
    } else {
        Ok(ReparamSolution {
            branch: ReparamBranch::ZeroHNuZero,
            omega: 0.0,
            t_star: 0.0,
            u_star: u0,
            u0,
            nu0: 0.0,
            h0n: 0.0,
        })
    }
}

/// The unique `ν₀` for which the reparametrized flow reaches `u = u₁` exactly
/// when `v = T`:  `ν₀ = (2T)^{-1}(e^{2u₁} - e^{2u₀}) + H₀ᴺ T`.
pub fn reach_condition(u0: f64, u1: f64, big_t: f64, h0n: f64) -> f64 {
    ((2.0 * u1).exp() - (2.0 * u0).exp()) / (2.0 * big_t) + h0n * big_t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ode_residual(sol: &ReparamSolution, t: f64) -> f64 {
        // central differences against the right-hand sides
        let h = 1e-6;
        let dv = (sol.v(t + h) - sol.v(t - h)) / (2.0 * h);
        let du = (sol.u(t + h) - sol.u(t - h)) / (2.0 * h);
        let dnu = (sol.nu(t + h) - sol.nu(t - h)) / (2.0 * h);
        let e2u = (2.0 * sol.u(t)).exp();
        (dv - e2u)
            .abs()
            .max((du - sol.nu(t)).abs())
            .max((dnu + 2.0 * sol.h0n * e2u).abs())
    }

    #[test]
    fn trivial_branch() {
        let s = reparam_solve(0.0, 0.0, 0.0).unwrap();
        assert_eq!(s.branch, ReparamBranch::ZeroHNuZero);
        for t in [0.0, 0.3, 2.0, -1.0] {
            assert!((s.v(t) - t).abs() < 1e-15);
            assert!(s.u(t) == 0.0 && s.nu(t) == 0.0);
        }
    }

    #[test]
    fn exponential_branch() {
        let s = reparam_solve(0.0, 1.0, 0.0).unwrap();
        assert_eq!(s.branch, ReparamBranch::ZeroHNuNonzero);
        for t in [0.0, 0.5, 1.0, 2.0] {
            assert!((s.v(t) - ((2.0 * t).exp() - 1.0) / 2.0).abs() < 1e-12);
            assert!((s.u(t) - t).abs() < 1e-15);
        }
    }

    #[test]
    fn positive_h_branch_matches_closed_form() {
        // u0 = 0, nu0 = 0, H0N = 1/2: omega = 1, t* = 0, u* = 0, u(t) = -log cosh t
        let s = reparam_solve(0.0, 0.0, 0.5).unwrap();
        assert_eq!(s.branch, ReparamBranch::PositiveH);
        assert!((s.omega - 1.0).abs() < 1e-15);
        assert!(s.t_star.abs() < 1e-15 && s.u_star.abs() < 1e-15);
        for t in [0.0, 0.4, 1.3] {
            assert!((s.u(t) + t.cosh().ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn initial_conditions_and_ode_residuals() {
        let cases = [
            (0.3, -0.7, 1.3),
            (-1.0, 2.0, 0.01),
            (0.0, 0.0, 0.5),
            (1.5, -0.2, 0.0),
            (0.7, 0.0, 0.0),
        ];
        for (u0, nu0, h0n) in cases {
            let s = reparam_solve(u0, nu0, h0n).unwrap();
            assert!(s.v(0.0).abs() < 1e-12);
            assert!((s.u(0.0) - u0).abs() < 1e-12);
            assert!((s.nu(0.0) - nu0).abs() < 1e-12);
            for t in [-0.8, -0.1, 0.2, 0.9, 1.7] {
                assert!(ode_residual(&s, t) < 1e-7, "residual too large at t={t}");
            }
            // v strictly increasing
            let mut prev = s.v(-1.0);
            for i in 1..40 {
                let cur = s.v(-1.0 + 0.1 * i as f64);
                assert!(cur > prev);
                prev = cur;
            }
        }
    }

    #[test]
    fn reach_condition_examples_and_forward_check() {
        assert_eq!(reach_condition(0.0, 0.0, 1.0, 0.0), 0.0);
        // (0, 1, 1, 0) -> (e^2 - 1)/2
        let nu = reach_condition(0.0, 1.0, 1.0, 0.0);
        assert!((nu - (2.0f64.exp() - 1.0) / 2.0).abs() < 1e-12);
        // (0, 0, 2, 1/2) -> 1
        assert!((reach_condition(0.0, 0.0, 2.0, 0.5) - 1.0).abs() < 1e-14);

        // forward check: with the returned nu0, v hits T with u = u1
        let cases = [
            (0.0, 1.0, 1.0, 0.0),
            (0.0, 0.0, 2.0, 0.5),
            (-0.5, 0.8, 3.0, 0.2),
            (1.0, -1.0, 0.7, 2.0),
        ];
        for (u0, u1, big_t, h0n) in cases {
            let nu0 = reach_condition(u0, u1, big_t, h0n);
            let s = reparam_solve(u0, nu0, h0n).unwrap();
            let tau = s.v_inverse(big_t).unwrap();
            assert!((s.v(tau) - big_t).abs() < 1e-9 * (1.0 + big_t));
            assert!((s.u(tau) - u1).abs() < 1e-9, "u({tau}) = {} != {u1}", s.u(tau));
        }
    }

    #[test]
    fn exp2u_identity() {
        // e^{2u(t)} = e^{2u0} + 2 v(t)(nu0 - H0N v(t)) at 100 sample times
        let cases = [(0.3, -0.7, 1.3), (0.0, 2.0, 0.0), (1.0, 0.0, 0.4)];
        for (u0, nu0, h0n) in cases {
            let s = reparam_solve(u0, nu0, h0n).unwrap();
            for i in 0..100 {
                let t = -1.0 + 0.03 * i as f64;
                let lhs = (2.0 * s.u(t)).exp();
                let v = s.v(t);
                let rhs = (2.0 * u0).exp() + 2.0 * v * (nu0 - h0n * v);
                assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
            }
        }
    }

    #[test]
    fn negative_h0n_rejected() {
        assert!(reparam_solve(0.0, 0.0, -1.0).is_err());
    }
}
