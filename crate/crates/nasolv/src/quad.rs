//! Quadrature building blocks: Gauss–Legendre rules, composite panels and a
//! doubling-based adaptive driver.
//!
//! Everything downstream (ball volumes, subordination integrals, spherical
//! synthesis) is built on these primitives, so they are kept deliberately
//! small and deterministic: nodes are computed once per order by Newton
//! iteration on the Legendre recurrence and cached by the caller.

/// Gauss–Legendre nodes and weights on `[-1, 1]` for a given order.
///
/// Newton iteration on P_n with the three-term recurrence; accurate to
/// machine precision for the orders used here (n <= 128).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-type initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_pd(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Legendre polynomial P_n(x) and its derivative.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A reusable Gauss–Legendre rule of fixed order.
#[derive(Debug, Clone)]
pub struct GlRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GlRule {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        GlRule { nodes, weights }
    }

    /// Integrate `f` over `[a, b]` with a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + h * x);
        }
        acc * h
    }

    /// Integrate over `[a, b]` split into `panels` equal panels.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let mut acc = 0.0;
        let h = (b - a) / panels as f64;
        for i in 0..panels {
            acc += self.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, &mut f);
        }
        acc
    }

    /// Nodes and weights of the composite rule on `[a, b]` with `panels` panels.
    pub fn panel_nodes(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::with_capacity(panels * self.nodes.len());
        let mut ws = Vec::with_capacity(panels * self.nodes.len());
        let h = (b - a) / panels as f64;
        for i in 0..panels {
            let lo = a + i as f64 * h;
            let c = lo + 0.5 * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                xs.push(c + 0.5 * h * x);
                ws.push(w * 0.5 * h);
            }
        }
        (xs, ws)
    }
}

/// Adaptive integration on `[a, b]` by panel doubling until two successive
/// refinements agree to `rel_tol` (relative to the scale of the result).
///
/// Returns `(value, estimated_error)`; `Err` carries the last estimate when
/// the budget is exhausted without convergence.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    rule: &GlRule,
    a: f64,
    b: f64,
    rel_tol: f64,
    mut f: F,
) -> Result<(f64, f64), (f64, f64)> {
    let mut panels = 1usize;
    let mut prev = rule.integrate_panels(a, b, panels, &mut f);
    for _ in 0..14 {
        panels *= 2;
        let cur = rule.integrate_panels(a, b, panels, &mut f);
        let err = (cur - prev).abs();
        if err <= rel_tol * cur.abs().max(1e-300) {
            return Ok((cur, err));
        }
        prev = cur;
    }
    Err((prev, f64::INFINITY))
}

/// Gamma function at half-integer arguments `x = twice_x / 2`, exactly via the
/// recursion from Γ(1/2) = √π and Γ(1) = 1. This covers every Gamma value the
/// radial formulas and the Plancherel density need.
pub fn gamma_half_int(twice_x: u32) -> f64 {
    assert!(twice_x >= 1, "gamma argument must be positive");
    if twice_x == 1 {
        return std::f64::consts::PI.sqrt();
    }
    if twice_x == 2 {
        return 1.0;
    }
    (twice_x as f64 / 2.0 - 1.0) * gamma_half_int(twice_x - 2)
}

/// Numerically stable arccosh: `arccosh(1 + d)` evaluated via `ln(1 + x)`
/// so that nearby points (d → 0) lose no precision to cancellation.
pub fn arccosh1p(d: f64) -> f64 {
    debug_assert!(d >= -1e-12);
    let d = d.max(0.0);
    let s = (d * (d + 2.0)).sqrt();
    (d + s).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_exactness_on_polynomials() {
        let rule = GlRule::new(8);
        // degree 15 is integrated exactly by an 8-point rule
        let val = rule.integrate(0.0, 1.0, |x| x.powi(15));
        assert!((val - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn gl_panels_sum_to_interval() {
        let rule = GlRule::new(16);
        let (xs, ws) = rule.panel_nodes(-2.0, 3.0, 7);
        let total: f64 = ws.iter().sum();
        assert!((total - 5.0).abs() < 1e-12);
        assert!(xs.iter().all(|&x| (-2.0..=3.0).contains(&x)));
    }

    #[test]
    fn adaptive_converges_on_gaussian() {
        let rule = GlRule::new(16);
        let (v, _) = integrate_adaptive(&rule, -8.0, 8.0, 1e-12, |x| (-x * x).exp()).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn gamma_half_integers() {
        let pi = std::f64::consts::PI;
        assert!((gamma_half_int(1) - pi.sqrt()).abs() < 1e-15); // Γ(1/2)
        assert!((gamma_half_int(2) - 1.0).abs() < 1e-15); // Γ(1)
        assert!((gamma_half_int(3) - pi.sqrt() / 2.0).abs() < 1e-15); // Γ(3/2)
        assert!((gamma_half_int(8) - 6.0).abs() < 1e-12); // Γ(4) = 3!
        assert!((gamma_half_int(7) - 15.0 * pi.sqrt() / 8.0).abs() < 1e-12); // Γ(7/2)
    }

    #[test]
    fn arccosh_stable_near_one() {
        let d = 1e-14;
        let v = arccosh1p(d);
        // arccosh(1+d) ~ sqrt(2d) for small d
        assert!((v / (2.0 * d).sqrt() - 1.0).abs() < 1e-6);
        assert!((arccosh1p(1.0) - 3.0f64.ln() - 0.0).abs() < 2.0); // finite, sane
        assert!((arccosh1p(f64::cosh(2.0) - 1.0) - 2.0).abs() < 1e-12);
    }
}
