//! Plancherel theory and spectral-multiplier kernel estimates.
//!
//! The L² theory of multipliers of `Δ` reduces to the real hyperbolic space
//! `ℝ^Q ⋊ ℝ` regardless of the stratified group: kernel L² norms are
//! integrals against the Plancherel density `c_Δ |𝐜_Q(s)|^{-2}` ([`plancherel`]),
//! and for `Q = 2` the kernels themselves are synthesized through the
//! elementary `H³` spherical functions ([`spherical`]). На top of these sit
//! the band-limited machinery of Hebisch decompositions ([`hebisch`]), the
//! mixed Mihlin–Hörmander norms ([`mh`]) and the kernel estimates driving
//! the multiplier theorem ([`bounds`]).

pub mod bounds;
pub mod hebisch;
pub mod mh;
pub mod plancherel;
pub mod profile;
pub mod spherical;

pub use bounds::{
    dyadic_multiplier_demo, l1_l2_check, l1_l2_scan, scaled_kernel, translation_l1,
    weighted_kernel_bounds, DyadicRow, L1L2Row, WeightedBoundsReport,
};
pub use hebisch::{
    hebisch_decompose, quadratic_spline_bump, smooth_even_bump, FourierGrid,
    HebischDecomposition, HebischPiece,
};
pub use mh::{mh_norm, sobolev_norm, MhNorm, MhRegime};
pub use plancherel::{
    calibrate_c_delta, kernel_l2_norm, plancherel_density, KernelL2, C_DELTA_Q2,
};
pub use profile::{psi_bump, smooth_step, BandLimitedProfile, BandShape, MultiplierProfile};
pub use spherical::{
    heat_multiplier_kernel, spherical_kernel_banded, spherical_kernel_quadrature, RadialKernel,
    C_CAL_H3,
};
