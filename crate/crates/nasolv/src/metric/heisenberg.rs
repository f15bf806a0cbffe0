//! Carnot–Carathéodory distance on the first Heisenberg group.
//!
//! In exponential coordinates with `ṫ = (x ẏ - y ẋ)/2` along horizontal
//! curves, the geodesics from the origin project to circular arcs in the
//! plane. For a target `(x, y, w)` with planar distance `r = √(x²+y²)` and
//! height `w`, the minimizing arc has turning angle `θ ∈ [0, 2π]` solving
//!
//! ```text
//! (θ - sin θ) / (8 sin²(θ/2)) = |w| / r²,
//! ```
//!
//! monotone in `θ`, and the distance is `r θ / (2 sin(θ/2))`. The limits are
//! the straight line (`w = 0`, distance `r`) and the vertical axis (`r = 0`,
//! distance `√(4π|w|)`, a full circle enclosing area `|w|`).

use crate::{Error, NPoint};

/// Ratio `(θ - sin θ)/(8 sin²(θ/2))`, strictly increasing on (0, 2π).
fn twist_ratio(theta: f64) -> f64 {
    let s = (theta / 2.0).sin();
    (theta - theta.sin()) / (8.0 * s * s)
}

/// CC distance from the origin on H¹. Bisection on the twist parameter to
/// absolute tolerance 1e-10 on θ (distance inherits the accuracy).
pub fn heisenberg_distance_from_origin(z: &NPoint) -> Result<f64, Error> {
    let (x, y, w) = (z.coords[0], z.coords[1], z.coords[2]);
    let r = x.hypot(y);
    let a = w.abs();
    if a < 1e-300 {
        return Ok(r);
    }
    if r < 1e-15 * (1.0 + a.sqrt()) {
        return Ok((4.0 * std::f64::consts::PI * a).sqrt());
    }
    let q = a / (r * r);
    let mut lo = 1e-12;
    let mut hi = 2.0 * std::f64::consts::PI - 1e-12;
    if twist_ratio(hi) < q {
        // numerically indistinguishable from the vertical axis
        return Ok((4.0 * std::f64::consts::PI * a).sqrt());
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if twist_ratio(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    Ok(r * theta / (2.0 * (theta / 2.0).sin()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GroupModel;

    #[test]
    fn horizontal_line() {
        let d = heisenberg_distance_from_origin(&NPoint::new(vec![1.0, 0.0, 0.0])).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        let d = heisenberg_distance_from_origin(&NPoint::new(vec![3.0, 4.0, 0.0])).unwrap();
        assert!((d - 5.0).abs() < 1e-12);
    }

    #[test]
    fn vertical_axis() {
        // full circle of enclosed area |w|: length sqrt(4 pi |w|); at w = 1/pi this is 2
        let d = heisenberg_distance_from_origin(&NPoint::new(vec![0.0, 0.0, 1.0 / std::f64::consts::PI]))
            .unwrap();
        assert!((d - 2.0).abs() < 1e-10);
    }

    #[test]
    fn twist_ratio_monotone() {
        let mut prev = twist_ratio(1e-6);
        for i in 1..2000 {
            let th = 2.0 * std::f64::consts::PI * i as f64 / 2000.5;
            let cur = twist_ratio(th.max(1e-6));
            assert!(cur >= prev);
            prev = cur;
        }
    }

    #[test]
    fn dilation_homogeneity() {
        let m = GroupModel::heisenberg1();
        let z = NPoint::new(vec![0.7, -0.3, 0.4]);
        let d1 = heisenberg_distance_from_origin(&z).unwrap();
        for t in [0.5, 2.0, 3.7] {
            let zt = m.n_dilate(t, &z).unwrap();
            let dt = heisenberg_distance_from_origin(&zt).unwrap();
            assert!((dt - t * d1).abs() < 1e-9 * (1.0 + dt));
        }
    }
}
