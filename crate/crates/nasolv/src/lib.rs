//! Numerical analysis on solvable extensions `G = N ⋊ ℝ` of stratified
//! groups: Carnot–Carathéodory geometry, a Calderón–Zygmund theory built on
//! product-type admissible sets, heat kernels via subordination, and
//! Plancherel/multiplier kernel estimates — each operation paired with an
//! independent oracle so every formula in the library is checked against a
//! second computational route.
//!
//! The library is organized by subject:
//!
//! * [`group`] — the stratified group `N` (abelian and Heisenberg models) and
//!   the extension `G` with its Haar measures and modular function;
//! * [`metric`] — CC distances on `N` and `G`, Hamilton–Jacobi geodesics, the
//!   closed-form reparametrization coupling them, ball volumes and radial
//!   integral formulas;
//! * [`cz`] — dyadic systems on `N`, admissible product sets, quasi-partitions,
//!   the dyadic maximal operator and the stopping-time Calderón–Zygmund
//!   decomposition with full property verification;
//! * [`heat`] — the heat kernel on `G` evaluated through the subordination
//!   formula, its horizontal gradient and L¹ gradient bounds;
//! * [`multiplier`] — Plancherel density, spherical kernel synthesis for
//!   `Q = 2`, band-limited decompositions, Mihlin–Hörmander norms and the
//!   kernel estimates behind the multiplier theorem;
//! * [`verify`] — the umbrella invariant suite used by the CLI.
//!
//! A narrative guide with runnable examples lives in `book/`; its code
//! snippets are compiled as doc-tests through the [`guide`] module.

pub mod cz;
pub mod group;
pub mod guide;
pub mod heat;
pub mod metric;
pub mod multiplier;
pub mod quad;
pub mod verify;

use std::fmt;

/// Library error type.
#[derive(Debug, Clone)]
pub enum Error {
    /// Invalid argument or inconsistent input (dimension mismatch, bad range).
    Invalid(String),
    /// An iterative or quadrature procedure failed to converge; carries the
    /// residual or error estimate reached.
    Convergence { what: String, residual: f64 },
    /// A construction ran out of room (dyadic levels, window coverage).
    Exhausted(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn convergence(what: impl Into<String>, residual: f64) -> Self {
        Error::Convergence { what: what.into(), residual }
    }

    pub(crate) fn exhausted(msg: impl Into<String>) -> Self {
        Error::Exhausted(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
            Error::Convergence { what, residual } => {
                write!(f, "{what} did not converge (residual {residual:e})")
            }
            Error::Exhausted(m) => write!(f, "construction exhausted: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub use group::{GPoint, GroupKind, GroupModel, NPoint};
