//! Carnot–Carathéodory metric structure of `N` and `G = N ⋊ ℝ`.
//!
//! The distance on `G` has the closed form
//!
//! ```text
//! ϱ((z₀,u₀), (z₁,u₁)) = arccosh( cosh(u₀-u₁) + e^{-(u₀+u₁)} d_N(z₀,z₁)²/2 ),
//! ```
//!
//! reducing every `G`-distance to the distance on `N` and a hyperbolic
//! profile in the `A`-direction. [`hj`] supplies the Hamilton–Jacobi flows
//! used to cross-check this formula by shooting, [`reparam`] the closed-form
//! coupling between `N`- and `G`-geodesics, [`heisenberg`] the exact CC
//! distance on the first Heisenberg group, and [`radial`] the volume and
//! radial-integration formulas.

pub mod heisenberg;
pub mod hj;
pub mod radial;
pub mod reparam;

use crate::quad::arccosh1p;
use crate::{Error, GPoint, GroupKind, GroupModel, NPoint};

/// CC distance on `N`: Euclidean for abelian models, the closed-form geodesic
/// inversion for Heisenberg1. Left-invariant by construction.
pub fn cc_distance_n(model: &GroupModel, z: &NPoint, z2: &NPoint) -> Result<f64, Error> {
    let delta = model.n_multiply(&model.n_inverse(z), z2)?;
    match model.kind {
        GroupKind::Abelian { .. } => Ok(delta.euclidean_norm()),
        GroupKind::Heisenberg1 => heisenberg::heisenberg_distance_from_origin(&delta),
    }
}

/// CC distance on `G` via the closed formula; `arccosh` evaluated in a
/// cancellation-free form so nearby points keep full precision.
pub fn cc_distance_g(model: &GroupModel, x: &GPoint, y: &GPoint) -> Result<f64, Error> {
    let dn = cc_distance_n(model, &x.z, &y.z)?;
    let du = x.u - y.u;
    // cosh(du) - 1 = 2 sinh^2(du/2)
    let excess = 2.0 * (du / 2.0).sinh().powi(2) + (-(x.u + y.u)).exp() * dn * dn / 2.0;
    Ok(arccosh1p(excess))
}

/// Distance of `x` from the identity of `G`.
pub fn norm_g(model: &GroupModel, x: &GPoint) -> Result<f64, Error> {
    cc_distance_g(model, &model.g_zero(), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rand_gpoint(model: &GroupModel, rng: &mut ChaCha8Rng, scale: f64) -> GPoint {
        GPoint::new(
            NPoint::new((0..model.dim).map(|_| rng.gen_range(-scale..scale)).collect()),
            rng.gen_range(-scale..scale),
        )
    }

    #[test]
    fn euclidean_distance_on_abelian_n() {
        let m = GroupModel::abelian(2).unwrap();
        let d = cc_distance_n(&m, &NPoint::new(vec![0.0, 0.0]), &NPoint::new(vec![3.0, 4.0]))
            .unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn vertical_distance_is_u_difference() {
        let m = GroupModel::abelian(2).unwrap();
        let a = GPoint::new(m.n_zero(), 1.7);
        let b = GPoint::new(m.n_zero(), 0.0);
        assert!((cc_distance_g(&m, &a, &b).unwrap() - 1.7).abs() < 1e-12);
    }

    #[test]
    fn distance_example_arccosh3() {
        let m = GroupModel::abelian(2).unwrap();
        let a = GPoint::new(NPoint::new(vec![2.0, 0.0]), 0.0);
        let d = norm_g(&m, &a).unwrap();
        assert!((d - 3.0f64.acosh()).abs() < 1e-12);
        assert!((d - 1.76274717).abs() < 1e-7);
    }

    #[test]
    fn left_invariance() {
        for m in [GroupModel::abelian(2).unwrap(), GroupModel::heisenberg1()] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..200 {
                let g = rand_gpoint(&m, &mut rng, 1.5);
                let x = rand_gpoint(&m, &mut rng, 1.5);
                let y = rand_gpoint(&m, &mut rng, 1.5);
                let d0 = cc_distance_g(&m, &x, &y).unwrap();
                let d1 = cc_distance_g(
                    &m,
                    &m.g_multiply(&g, &x).unwrap(),
                    &m.g_multiply(&g, &y).unwrap(),
                )
                .unwrap();
                assert!((d0 - d1).abs() < 1e-10 * (1.0 + d0));
            }
        }
    }

    #[test]
    fn symmetry_and_inverse_symmetry() {
        let m = GroupModel::heisenberg1();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let x = rand_gpoint(&m, &mut rng, 1.2);
            let y = rand_gpoint(&m, &mut rng, 1.2);
            let d0 = cc_distance_g(&m, &x, &y).unwrap();
            let d1 = cc_distance_g(&m, &y, &x).unwrap();
            assert!((d0 - d1).abs() < 1e-11 * (1.0 + d0));
            let n0 = norm_g(&m, &x).unwrap();
            let n1 = norm_g(&m, &m.g_inverse(&x).unwrap()).unwrap();
            assert!((n0 - n1).abs() < 1e-11 * (1.0 + n0));
        }
    }

    #[test]
    fn triangle_inequality_random_triples() {
        for m in [GroupModel::abelian(2).unwrap(), GroupModel::heisenberg1()] {
            let mut rng = ChaCha8Rng::seed_from_u64(13);
            for _ in 0..1000 {
                let x = rand_gpoint(&m, &mut rng, 1.5);
                let y = rand_gpoint(&m, &mut rng, 1.5);
                let z = rand_gpoint(&m, &mut rng, 1.5);
                let dxy = cc_distance_g(&m, &x, &y).unwrap();
                let dyz = cc_distance_g(&m, &y, &z).unwrap();
                let dxz = cc_distance_g(&m, &x, &z).unwrap();
                assert!(dxz <= dxy + dyz + 1e-10);
            }
        }
    }

    #[test]
    fn closed_form_matches_shooting_oracle() {
        let m = GroupModel::abelian(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for i in 0..6 {
            let target = rand_gpoint(&m, &mut rng, 1.3);
            let exact = norm_g(&m, &target).unwrap();
            let shot = hj::shoot_distance_g(&m, &target, 100 + i, 50).unwrap();
            assert!(
                (exact - shot.length).abs() <= 1e-4 * (1.0 + exact),
                "closed {exact} vs shooting {}",
                shot.length
            );
        }
    }

    #[test]
    fn heisenberg_n_distance_against_n_shooting() {
        use hj::{hj_flow_n, HjStateN};
        // shoot on N to a few targets and compare min length with closed form
        let m = GroupModel::heisenberg1();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..4 {
            let target = NPoint::new(vec![
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-0.4..0.4),
            ]);
            let exact = cc_distance_n(&m, &m.n_zero(), &target).unwrap();
            // multiple-start Newton on the N-level endpoint map
            let mut best = f64::INFINITY;
            for s in 0..40 {
                let mut zeta: Vec<f64> =
                    (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
                if s == 0 {
                    zeta = vec![target.coords[0], target.coords[1], 0.0];
                }
                for _ in 0..60 {
                    let end = hj_flow_n(&m, &HjStateN { z: m.n_zero(), zeta: zeta.clone() }, 1.0, 800)
                        .unwrap();
                    let f: Vec<f64> = end
                        .z
                        .coords
                        .iter()
                        .zip(&target.coords)
                        .map(|(a, b)| a - b)
                        .collect();
                    let fnorm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if fnorm < 1e-9 {
                        break;
                    }
                    let mut jac = vec![vec![0.0; 3]; 3];
                    for j in 0..3 {
                        let mut zj = zeta.clone();
                        zj[j] += 1e-6;
                        let ej = hj_flow_n(&m, &HjStateN { z: m.n_zero(), zeta: zj }, 1.0, 800)
                            .unwrap();
                        for i in 0..3 {
                            jac[i][j] = (ej.z.coords[i] - end.z.coords[i]) / 1e-6;
                        }
                    }
                    // Gauss elimination inline
                    let mut a = jac.clone();
                    let mut x = f.clone();
                    let mut ok = true;
                    for c in 0..3 {
                        let piv = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
                        if a[piv][c].abs() < 1e-13 {
                            ok = false;
                            break;
                        }
                        a.swap(c, piv);
                        x.swap(c, piv);
                        for r in c + 1..3 {
                            let f2 = a[r][c] / a[c][c];
                            for k in c..3 {
                                a[r][k] -= f2 * a[c][k];
                            }
                            x[r] -= f2 * x[c];
                        }
                    }
                    if !ok {
                        break;
                    }
                    for c in (0..3).rev() {
                        x[c] /= a[c][c];
                        for r in 0..c {
                            x[r] -= a[r][c] * x[c];
                        }
                    }
                    for j in 0..3 {
                        zeta[j] -= x[j].clamp(-2.0, 2.0);
                    }
                }
                let end = hj_flow_n(&m, &HjStateN { z: m.n_zero(), zeta: zeta.clone() }, 1.0, 800)
                    .unwrap();
                let res: f64 = end
                    .z
                    .coords
                    .iter()
                    .zip(&target.coords)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if res < 1e-8 {
                    let h = hj::hamiltonian_n(&m, &HjStateN { z: m.n_zero(), zeta });
                    best = best.min((2.0 * h).sqrt());
                }
            }
            assert!(
                (best - exact).abs() < 2e-4 * (1.0 + exact),
                "closed-form {exact} vs N-shooting {best} for {:?}",
                target
            );
        }
    }

    #[test]
    fn homogeneity_of_n_distance() {
        let m = GroupModel::heisenberg1();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..50 {
            let z = NPoint::new(vec![
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-0.5..0.5),
            ]);
            let t = rng.gen_range(0.2..2.5);
            let d = cc_distance_n(&m, &m.n_zero(), &z).unwrap();
            let dt = cc_distance_n(&m, &m.n_zero(), &m.n_dilate(t, &z).unwrap()).unwrap();
            assert!((dt - t * d).abs() < 1e-8 * (1.0 + dt));
        }
    }
}
