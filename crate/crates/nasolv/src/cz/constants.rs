//! Admissibility constants `(M, r₀, η)` and the six compatibility constraints
//! they must satisfy for the splitting lemma to produce admissible children:
//!
//! ```text
//! (1)  1 < r₀ < 2 log 2
//! (2)  M > 1
//! (3)  e^{r₀} e^{2M} r₀ ≤ e^{2M r₀}
//! (4)  6M > log η - log 2 + r₀/2
//! (5)  η e^{4M r₀} < 2 e^{8M} inf{ r e^{-r/2} : r₀ < r ≤ 2r₀ }
//! (6)  η < 4 e^{(4M-1) r₀}
//! ```
//!
//! together with `C₂ = max{2, (C_N² η)^Q}`, the parent/child measure ratio
//! bound. The CZ constant of the space is `κ₀ = max{C₁, C₂, C*}`, where `C₁`
//! and `C*` are measured empirically over the window.

use serde::Serialize;

/// One validated constraint: name, signed slack (in log scale where the
/// constraint is multiplicative) and verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub slack: f64,
    pub pass: bool,
}

/// Report of [`validate_constants`].
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub m: f64,
    pub r0: f64,
    pub eta: f64,
    pub checks: Vec<ConstraintCheck>,
    pub all_pass: bool,
}

impl ConstantsReport {
    pub fn failed_names(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect()
    }
}

/// Evaluate the six constraints with per-inequality slack.
pub fn validate_constants(m: f64, r0: f64, eta: f64) -> ConstantsReport {
    let ln2 = std::f64::consts::LN_2;
    let mut checks = Vec::new();

    let s1 = (r0 - 1.0).min(2.0 * ln2 - r0);
    checks.push(ConstraintCheck { name: "1 < r0 < 2 log 2", slack: s1, pass: s1 > 0.0 });

    let s2 = m - 1.0;
    checks.push(ConstraintCheck { name: "M > 1", slack: s2, pass: s2 > 0.0 });

    // log form: 2 M r0 - (r0 + 2M + log r0) >= 0
    let s3 = 2.0 * m * r0 - (r0 + 2.0 * m + r0.ln());
    checks.push(ConstraintCheck {
        name: "e^{r0} e^{2M} r0 <= e^{2M r0}",
        slack: s3,
        pass: s3 >= 0.0,
    });

    let s4 = 6.0 * m - (eta.ln() - ln2 + r0 / 2.0);
    checks.push(ConstraintCheck {
        name: "6M > log eta - log 2 + r0/2",
        slack: s4,
        pass: s4 > 0.0,
    });

    // inf of r e^{-r/2} on (r0, 2 r0]: the function increases up to r = 2 and
    // decreases after, so the infimum sits at an endpoint
    let h = |r: f64| r * (-r / 2.0).exp();
    let inf = h(r0).min(h(2.0 * r0));
    let s5 = (2.0 * (8.0 * m).exp() * inf).ln() - (eta * (4.0 * m * r0).exp()).ln();
    checks.push(ConstraintCheck {
        name: "eta e^{4M r0} < 2 e^{8M} inf r e^{-r/2}",
        slack: s5,
        pass: s5 > 0.0,
    });

    let s6 = (4.0 * ((4.0 * m - 1.0) * r0).exp()).ln() - eta.ln();
    checks.push(ConstraintCheck { name: "eta < 4 e^{(4M-1) r0}", slack: s6, pass: s6 > 0.0 });

    let all_pass = checks.iter().all(|c| c.pass);
    ConstantsReport { m, r0, eta, checks, all_pass }
}

/// `C₂ = max{2, (C_N² η)^Q}`.
pub fn c2_constant(c_n: f64, eta: f64, q: u32) -> f64 {
    2f64.max((c_n * c_n * eta).powi(q as i32))
}

/// The full constant set used by the CZ machinery.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityConstants {
    pub m: f64,
    pub r0: f64,
    pub eta: f64,
    pub c_n: f64,
    pub j: usize,
    pub c1: f64,
    pub c2: f64,
    pub c_star: f64,
    pub kappa0: f64,
}

impl AdmissibilityConstants {
    /// Constants for the Euclidean dyadic system on abelian `ℝ^Q`:
    /// `C_N = max{2, √Q}`, `J = 2^Q`. `C₁` and `C*` start at the measured
    /// placeholders 1 and are filled in by [`measure_c1_cstar`].
    ///
    /// [`measure_c1_cstar`]: crate::cz::measure_c1_cstar
    pub fn euclidean(m: f64, r0: f64, eta: f64, q: u32) -> Result<Self, crate::Error> {
        let report = validate_constants(m, r0, eta);
        if !report.all_pass {
            return Err(crate::Error::invalid(format!(
                "admissibility constraints failed: {:?}",
                report.failed_names()
            )));
        }
        let c_n = 2f64.max((q as f64).sqrt());
        let c2 = c2_constant(c_n, eta, q);
        Ok(AdmissibilityConstants {
            m,
            r0,
            eta,
            c_n,
            j: 2usize.pow(q),
            c1: 1.0,
            c2,
            c_star: 1.0,
            kappa0: c2,
        })
    }

    /// Install measured `C₁`, `C*` and recompute `κ₀ = max{C₁, C₂, C*}`.
    pub fn with_measured(mut self, c1: f64, c_star: f64) -> Self {
        self.c1 = c1;
        self.c_star = c_star;
        self.kappa0 = self.c1.max(self.c2).max(self.c_star);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_constants_pass_all_six() {
        let r = validate_constants(3.5, 1.2, 2.0);
        assert!(r.all_pass, "failed: {:?}", r.failed_names());
        // constraint (3) reduces to 0.4 M >= r0 + ln r0 = 1.38232...; slack ~ 0.0177
        let c3 = &r.checks[2];
        assert!(c3.pass && (c3.slack - (1.4 - 1.2 - 1.2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn small_m_fails_m_gt_1() {
        let r = validate_constants(0.5, 1.2, 2.0);
        assert!(!r.all_pass);
        assert!(r.failed_names().contains(&"M > 1"));
    }

    #[test]
    fn large_r0_fails_range() {
        let r = validate_constants(3.5, 1.5, 2.0);
        assert!(!r.all_pass);
        assert!(r.failed_names().contains(&"1 < r0 < 2 log 2"));
    }

    #[test]
    fn c2_formula() {
        // C_N = 2, eta = 2, Q = 2: (4 * 2)^2 = 64
        assert_eq!(c2_constant(2.0, 2.0, 2), 64.0);
        assert_eq!(c2_constant(1.0, 1.0, 5), 2.0);
    }

    #[test]
    fn euclidean_constants_build() {
        let c = AdmissibilityConstants::euclidean(3.5, 1.2, 2.0, 2).unwrap();
        assert_eq!(c.c_n, 2.0);
        assert_eq!(c.j, 4);
        assert_eq!(c.c2, 64.0);
        assert!(AdmissibilityConstants::euclidean(0.9, 1.2, 2.0, 2).is_err());
        let c = c.with_measured(1.0e13, 40.0);
        assert_eq!(c.kappa0, 1.0e13);
    }
}
