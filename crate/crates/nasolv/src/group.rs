//! The stratified group `N` and its solvable extension `G = N ⋊ ℝ`.
//!
//! Points of `N` are represented in exponential coordinates, in which the
//! group law is polynomial (Baker–Campbell–Hausdorff truncates exactly for
//! nilpotency step ≤ 2) and Lebesgue measure is a bi-invariant Haar measure.
//! The one-parameter dilation group `δ_t` acts coordinate-wise with integer
//! weights, and `A = ℝ` acts on `N` through `u ↦ δ_{e^u}`, giving the
//! semidirect product
//!
//! ```text
//! (z, u) · (z', u') = (z · δ_{e^u} z', u + u')
//! ```
//!
//! with right Haar measure `dz du` and modular function `m(z,u) = e^{-Qu}`.
//!
//! Two concrete models are provided: abelian `ℝ^Q` and the first Heisenberg
//! group (step 2, homogeneous dimension 4).

use crate::Error;

/// Which concrete stratified group backs a [`GroupModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// `ℝ^Q` with the identity dilation weights.
    Abelian { q: u32 },
    /// First Heisenberg group: coordinates (x, y, w), bracket [X₁, X₂] = X₃.
    Heisenberg1,
}

/// Descriptor of the stratified group `N`: dimensions, dilation weights and
/// the first-layer bracket table.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupModel {
    pub kind: GroupKind,
    /// Topological dimension of `N`.
    pub dim: usize,
    /// Homogeneous dimension `Q` (trace of the dilation derivation).
    pub homogeneous_dim: u32,
    /// Nilpotency step.
    pub step: u32,
    /// Dilation weight of each exponential coordinate (the layer it lives in).
    pub dilation_weights: Vec<u32>,
    /// Horizontal rank: number of first-layer directions.
    pub horizontal_rank: usize,
    /// Bracket table: `bracket[i][j][k]` is the X_k-coefficient of [X_i, X_j]
    /// for first-layer i, j. All zero for abelian models.
    pub structure_constants: Vec<Vec<Vec<f64>>>,
}

impl GroupModel {
    pub fn abelian(q: u32) -> Result<Self, Error> {
        if q < 2 {
            return Err(Error::invalid(format!(
                "homogeneous dimension must be >= 2, got {q}"
            )));
        }
        let d = q as usize;
        Ok(GroupModel {
            kind: GroupKind::Abelian { q },
            dim: d,
            homogeneous_dim: q,
            step: 1,
            dilation_weights: vec![1; d],
            horizontal_rank: d,
            structure_constants: vec![vec![vec![0.0; d]; d]; d],
        })
    }

    pub fn heisenberg1() -> Self {
        let mut sc = vec![vec![vec![0.0; 3]; 3]; 3];
        sc[0][1][2] = 1.0;
        sc[1][0][2] = -1.0;
        GroupModel {
            kind: GroupKind::Heisenberg1,
            dim: 3,
            homogeneous_dim: 4,
            step: 2,
            dilation_weights: vec![1, 1, 2],
            horizontal_rank: 2,
            structure_constants: sc,
        }
    }

    /// Parse the config syntax `abelian:Q` or `heisenberg1`.
    pub fn parse(spec: &str) -> Result<Self, Error> {
        if spec == "heisenberg1" {
            return Ok(GroupModel::heisenberg1());
        }
        if let Some(q) = spec.strip_prefix("abelian:") {
            let q: u32 = q
                .parse()
                .map_err(|_| Error::invalid(format!("bad group spec `{spec}`")))?;
            return GroupModel::abelian(q);
        }
        Err(Error::invalid(format!(
            "unknown group `{spec}` (expected `abelian:Q` or `heisenberg1`)"
        )))
    }

    fn check_dim(&self, z: &NPoint) -> Result<(), Error> {
        if z.coords.len() != self.dim {
            return Err(Error::invalid(format!(
                "point dimension {} does not match model dimension {}",
                z.coords.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Group law on `N` in exponential coordinates: `z + z' + ½[z, z']`
    /// (the BCH series, exact for step ≤ 2).
    pub fn n_multiply(&self, z: &NPoint, z2: &NPoint) -> Result<NPoint, Error> {
        self.check_dim(z)?;
        self.check_dim(z2)?;
        let mut out = vec![0.0; self.dim];
        for k in 0..self.dim {
            out[k] = z.coords[k] + z2.coords[k];
        }
        if self.step >= 2 {
            let h = self.horizontal_rank;
            for i in 0..h {
                for j in 0..h {
                    let c = z.coords[i] * z2.coords[j];
                    if c != 0.0 {
                        for k in 0..self.dim {
                            out[k] += 0.5 * c * self.structure_constants[i][j][k];
                        }
                    }
                }
            }
        }
        Ok(NPoint::new(out))
    }

    /// Inverse on `N` is coordinate negation (BCH is odd).
    pub fn n_inverse(&self, z: &NPoint) -> NPoint {
        NPoint::new(z.coords.iter().map(|c| -c).collect())
    }

    /// Automorphic dilation `δ_t`, scaling coordinate `i` by `t^{weight_i}`.
    pub fn n_dilate(&self, t: f64, z: &NPoint) -> Result<NPoint, Error> {
        self.check_dim(z)?;
        if !(t > 0.0) {
            return Err(Error::invalid(format!("dilation parameter must be > 0, got {t}")));
        }
        Ok(NPoint::new(
            z.coords
                .iter()
                .zip(&self.dilation_weights)
                .map(|(c, &w)| c * t.powi(w as i32))
                .collect(),
        ))
    }

    /// Group law on `G = N ⋊ ℝ`.
    pub fn g_multiply(&self, x: &GPoint, y: &GPoint) -> Result<GPoint, Error> {
        let scaled = self.n_dilate(x.u.exp(), &y.z)?;
        Ok(GPoint {
            z: self.n_multiply(&x.z, &scaled)?,
            u: x.u + y.u,
        })
    }

    /// Inverse on `G`: `(z,u)^{-1} = (δ_{e^{-u}}(-z), -u)`.
    pub fn g_inverse(&self, x: &GPoint) -> Result<GPoint, Error> {
        Ok(GPoint {
            z: self.n_dilate((-x.u).exp(), &self.n_inverse(&x.z))?,
            u: -x.u,
        })
    }

    /// Modular function `m(z, u) = e^{-Qu}` of `G` (left Haar = m · right Haar).
    pub fn modular(&self, x: &GPoint) -> f64 {
        (-(self.homogeneous_dim as f64) * x.u).exp()
    }

    /// The horizontal frame X_1(z), …, X_q(z) as column vectors in ℝ^d.
    ///
    /// For abelian models this is the standard basis; for Heisenberg1 the
    /// left-invariant fields X₁ = ∂x − (y/2)∂w, X₂ = ∂y + (x/2)∂w.
    pub fn horizontal_frame(&self, z: &NPoint) -> Vec<Vec<f64>> {
        match self.kind {
            GroupKind::Abelian { .. } => (0..self.dim)
                .map(|j| {
                    let mut e = vec![0.0; self.dim];
                    e[j] = 1.0;
                    e
                })
                .collect(),
            GroupKind::Heisenberg1 => {
                let (x, y) = (z.coords[0], z.coords[1]);
                vec![vec![1.0, 0.0, -0.5 * y], vec![0.0, 1.0, 0.5 * x]]
            }
        }
    }

    /// Identity of `N`.
    pub fn n_zero(&self) -> NPoint {
        NPoint::new(vec![0.0; self.dim])
    }

    /// Identity of `G`.
    pub fn g_zero(&self) -> GPoint {
        GPoint { z: self.n_zero(), u: 0.0 }
    }
}

/// A point of `N` in exponential coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct NPoint {
    pub coords: Vec<f64>,
}

impl NPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        NPoint { coords }
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// A point `(z, u)` of `G = N ⋊ ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GPoint {
    pub z: NPoint,
    pub u: f64,
}

impl GPoint {
    pub fn new(z: NPoint, u: f64) -> Self {
        GPoint { z, u }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rand_npoint(model: &GroupModel, rng: &mut ChaCha8Rng) -> NPoint {
        NPoint::new((0..model.dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
    }

    fn rand_gpoint(model: &GroupModel, rng: &mut ChaCha8Rng) -> GPoint {
        GPoint::new(rand_npoint(model, rng), rng.gen_range(-1.5..1.5))
    }

    #[test]
    fn abelian_multiply_is_addition() {
        let m = GroupModel::abelian(2).unwrap();
        let p = m
            .n_multiply(&NPoint::new(vec![1.0, 2.0]), &NPoint::new(vec![3.0, 4.0]))
            .unwrap();
        assert_eq!(p.coords, vec![4.0, 6.0]);
    }

    /// Matrix model of H¹: (x, y, w) ↦ unitriangular [[1, x, w + xy/2], [0, 1, y], [0, 0, 1]].
    /// Multiplying matrices and mapping back gives an independent check of BCH.
    fn heis_matrix_mul(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
        let (a12, a23, a13) = (a[0], a[1], a[2] + a[0] * a[1] / 2.0);
        let (b12, b23, b13) = (b[0], b[1], b[2] + b[0] * b[1] / 2.0);
        let c12 = a12 + b12;
        let c23 = a23 + b23;
        let c13 = a13 + b13 + a12 * b23;
        [c12, c23, c13 - c12 * c23 / 2.0]
    }

    #[test]
    fn heisenberg_bch_matches_matrix_model() {
        let m = GroupModel::heisenberg1();
        let p = m
            .n_multiply(&NPoint::new(vec![1.0, 0.0, 0.0]), &NPoint::new(vec![0.0, 1.0, 0.0]))
            .unwrap();
        assert_eq!(p.coords, vec![1.0, 1.0, 0.5]);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = rand_npoint(&m, &mut rng);
            let b = rand_npoint(&m, &mut rng);
            let p = m.n_multiply(&a, &b).unwrap();
            let q = heis_matrix_mul(
                &[a.coords[0], a.coords[1], a.coords[2]],
                &[b.coords[0], b.coords[1], b.coords[2]],
            );
            for k in 0..3 {
                assert!((p.coords[k] - q[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_is_negation() {
        let m = GroupModel::heisenberg1();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let z = rand_npoint(&m, &mut rng);
            let p = m.n_multiply(&z, &m.n_inverse(&z)).unwrap();
            assert!(p.euclidean_norm() < 1e-12);
        }
    }

    #[test]
    fn associativity_random_triples() {
        for m in [GroupModel::abelian(2).unwrap(), GroupModel::heisenberg1()] {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..1000 {
                let (a, b, c) = (
                    rand_npoint(&m, &mut rng),
                    rand_npoint(&m, &mut rng),
                    rand_npoint(&m, &mut rng),
                );
                let l = m.n_multiply(&m.n_multiply(&a, &b).unwrap(), &c).unwrap();
                let r = m.n_multiply(&a, &m.n_multiply(&b, &c).unwrap()).unwrap();
                for k in 0..m.dim {
                    assert!((l.coords[k] - r.coords[k]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn g_associativity_and_inverse() {
        for m in [GroupModel::abelian(2).unwrap(), GroupModel::heisenberg1()] {
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..1000 {
                let (a, b, c) = (
                    rand_gpoint(&m, &mut rng),
                    rand_gpoint(&m, &mut rng),
                    rand_gpoint(&m, &mut rng),
                );
                let l = m.g_multiply(&m.g_multiply(&a, &b).unwrap(), &c).unwrap();
                let r = m.g_multiply(&a, &m.g_multiply(&b, &c).unwrap()).unwrap();
                for k in 0..m.dim {
                    assert!((l.z.coords[k] - r.z.coords[k]).abs() < 1e-11);
                }
                assert!((l.u - r.u).abs() < 1e-12);
                let e = m.g_multiply(&a, &m.g_inverse(&a).unwrap()).unwrap();
                assert!(e.z.euclidean_norm() < 1e-12 && e.u.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dilation_is_automorphism_and_weights() {
        let m = GroupModel::heisenberg1();
        let z = NPoint::new(vec![1.0, 1.0, 1.0]);
        let d = m.n_dilate(2.0, &z).unwrap();
        assert_eq!(d.coords, vec![2.0, 2.0, 4.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (a, b) = (rand_npoint(&m, &mut rng), rand_npoint(&m, &mut rng));
            let t = rng.gen_range(0.1..3.0);
            let l = m.n_dilate(t, &m.n_multiply(&a, &b).unwrap()).unwrap();
            let r = m
                .n_multiply(&m.n_dilate(t, &a).unwrap(), &m.n_dilate(t, &b).unwrap())
                .unwrap();
            for k in 0..3 {
                assert!((l.coords[k] - r.coords[k]).abs() < 1e-11);
            }
        }
        // identity dilation
        let same = m.n_dilate(1.0, &z).unwrap();
        assert_eq!(same.coords, z.coords);
    }

    #[test]
    fn g_law_examples() {
        let m = GroupModel::abelian(2).unwrap();
        // pure A-direction composes additively
        let a = GPoint::new(m.n_zero(), 0.7);
        let b = GPoint::new(m.n_zero(), 0.5);
        let p = m.g_multiply(&a, &b).unwrap();
        assert!(p.z.euclidean_norm() == 0.0 && (p.u - 1.2).abs() < 1e-15);
        // e^{uD} acts by scaling: ((1,0), ln 2) * ((1,0), 0) = ((3,0), ln 2)
        let x = GPoint::new(NPoint::new(vec![1.0, 0.0]), 2.0f64.ln());
        let y = GPoint::new(NPoint::new(vec![1.0, 0.0]), 0.0);
        let p = m.g_multiply(&x, &y).unwrap();
        assert!((p.z.coords[0] - 3.0).abs() < 1e-14 && (p.u - 2.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn modular_values_and_multiplicativity() {
        let m2 = GroupModel::abelian(2).unwrap();
        let m4 = GroupModel::heisenberg1();
        assert!((m2.modular(&GPoint::new(m2.n_zero(), 0.0)) - 1.0).abs() < 1e-15);
        assert!((m2.modular(&GPoint::new(m2.n_zero(), 1.0)) - (-2.0f64).exp()).abs() < 1e-15);
        assert!((m4.modular(&GPoint::new(m4.n_zero(), -1.0)) - 4.0f64.exp()).abs() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let (x, y) = (rand_gpoint(&m2, &mut rng), rand_gpoint(&m2, &mut rng));
            let lhs = m2.modular(&m2.g_multiply(&x, &y).unwrap());
            let rhs = m2.modular(&x) * m2.modular(&y);
            assert!((lhs / rhs - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parse_specs() {
        assert_eq!(GroupModel::parse("abelian:3").unwrap().homogeneous_dim, 3);
        assert_eq!(GroupModel::parse("heisenberg1").unwrap().homogeneous_dim, 4);
        assert!(GroupModel::parse("abelian:1").is_err());
        assert!(GroupModel::parse("nonsense").is_err());
    }
}
