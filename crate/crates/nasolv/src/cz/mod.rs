//! Calderón–Zygmund machinery on `G`.
//!
//! The group has exponential volume growth, so metric balls cannot serve as
//! the decomposition sets: the measure of a `2r`-ball is not comparable to
//! that of an `r`-ball. The substitute is the family of *admissible sets*
//! `Q_α^k × (u₀ - r, u₀ + r)` — a dyadic cube in `N` times an interval in the
//! `A`-direction — whose cube scale is pinned to `r` and `e^{u₀}` by the
//! [`admissible`] window conditions. With the constants of [`constants`]
//! validated, these sets split into at most `J` admissible children of
//! comparable measure, and the stopping-time argument of [`decompose`]
//! produces Calderón–Zygmund decompositions at every positive height.
//!
//! Submodules: [`constants`] (the `(M, r₀, η)` constraints), [`dyadic`]
//! (cube hierarchies, exact and net-based), [`func`] (discrete carriers),
//! [`admissible`] (sets and children), [`partition`] (big quasi-partitions),
//! [`maximal`] (the dyadic maximal operator), [`decompose`] (the CZ
//! decomposition and its verifier), [`atoms`] (atom/BMO validators) and
//! [`checks`] (the empirical geometry constants `C₁`, `C*`).

pub mod admissible;
pub mod atoms;
pub mod checks;
pub mod constants;
pub mod decompose;
pub mod dyadic;
pub mod func;
pub mod maximal;
pub mod partition;

pub use admissible::{children, is_admissible, is_strongly_admissible, AdmissibleSet, SetKind};
pub use atoms::{atom_check, bmo_oscillation, AtomReport};
pub use checks::{measure_c1, measure_c_star, sample_admissible_sets};
pub use constants::{c2_constant, validate_constants, AdmissibilityConstants, ConstantsReport};
pub use decompose::{cz_decompose, verify_decomposition, CzDecomposition, CzPart, PropertyCheck};
pub use dyadic::{EuclideanDyadic, NetDyadic};
pub use func::{DiscretizedFunction, GridCarrier, Window};
pub use maximal::maximal_operator;
pub use partition::big_quasi_partition;
