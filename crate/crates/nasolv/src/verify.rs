//! The umbrella invariant suite: every module-level property in one runnable
//! battery, returning structured results the CLI renders deterministically.
//!
//! Each check pins its tolerance in code; a check either passes or carries
//! the offending values in its detail string. Sample counts scale down in
//! quick mode but the tolerances never change.

use crate::cz::{self, AdmissibilityConstants, DiscretizedFunction, EuclideanDyadic, GridCarrier};
use crate::heat::{h3_oracle_kernel, inner_integral, HeatEvaluator};
use crate::metric::hj::{lift_geodesic, shoot_distance_g, HjCurveN, HjStateN};
use crate::metric::radial::{ball_volume_g, mc_ball_volume_g, unit_ball_volume_n};
use crate::metric::{cc_distance_g, cc_distance_n, norm_g};
use crate::multiplier::{
    calibrate_c_delta, hebisch_decompose, kernel_l2_norm, mh_norm, psi_bump, smooth_even_bump,
    spherical_kernel_banded, BandLimitedProfile, BandShape, FourierGrid, MhRegime, C_DELTA_Q2,
};
use crate::quad::arccosh1p;
use crate::{GPoint, GroupModel, NPoint};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(module: &'static str, name: &'static str, pass: bool, detail: String) -> Self {
        CheckResult { module, name, pass, detail }
    }
}

/// Configuration of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Reduced sample counts for smoke runs; tolerances are unchanged.
    pub quick: bool,
    pub m: f64,
    pub r0: f64,
    pub eta: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 7, quick: false, m: 3.5, r0: 1.2, eta: 2.0 }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.6e}")
}

/// Run the full battery. Deterministic for a fixed config.
pub fn verify_all(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    group_checks(cfg, &mut out);
    metric_checks(cfg, &mut out);
    cz_checks(cfg, &mut out);
    heat_checks(cfg, &mut out);
    multiplier_checks(cfg, &mut out);
    out
}

fn group_checks(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let n = if cfg.quick { 100 } else { 1000 };
    for model in [GroupModel::abelian(2).unwrap(), GroupModel::heisenberg1()] {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x67);
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let p = |rng: &mut ChaCha8Rng| {
                GPoint::new(
                    NPoint::new((0..model.dim).map(|_| rng.gen_range(-2.0..2.0)).collect()),
                    rng.gen_range(-1.5..1.5),
                )
            };
            let (a, b, c) = (p(&mut rng), p(&mut rng), p(&mut rng));
            let l = model.g_multiply(&model.g_multiply(&a, &b).unwrap(), &c).unwrap();
            let r = model.g_multiply(&a, &model.g_multiply(&b, &c).unwrap()).unwrap();
            for k in 0..model.dim {
                worst = worst.max((l.z.coords[k] - r.z.coords[k]).abs());
            }
            worst = worst.max((l.u - r.u).abs());
        }
        out.push(CheckResult::new(
            "group",
            if model.dim == 2 { "associativity_abelian" } else { "associativity_heisenberg" },
            worst < 1e-11,
            format!("worst residual {}", fmt(worst)),
        ));
    }

    // right-invariance of the reference measure under discretized integration
    let model = GroupModel::abelian(2).unwrap();
    let f = |x: &GPoint| {
        (-(x.z.coords[0] * x.z.coords[0] + x.z.coords[1] * x.z.coords[1] + x.u * x.u)).exp()
    };
    let grid_int = |y: &GPoint| {
        let n = 60;
        let h = 12.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = GPoint::new(
                        NPoint::new(vec![
                            -6.0 + (i as f64 + 0.5) * h,
                            -6.0 + (j as f64 + 0.5) * h,
                        ]),
                        -6.0 + (k as f64 + 0.5) * h,
                    );
                    acc += f(&model.g_multiply(&x, y).unwrap()) * h * h * h;
                }
            }
        }
        acc
    };
    let base = grid_int(&model.g_zero());
    let shifted = grid_int(&GPoint::new(NPoint::new(vec![0.4, -0.2]), 0.3));
    out.push(CheckResult::new(
        "group",
        "right_invariance_of_measure",
        (shifted / base - 1.0).abs() < 0.02,
        format!("ratio {}", fmt(shifted / base)),
    ));

    // dilation homogeneity on boxes: exact integer weights
    let model = GroupModel::heisenberg1();
    let t: f64 = 1.5;
    let box_vol = 2.0 * 3.0 * 0.5;
    let image_vol = (2.0 * t) * (3.0 * t) * (0.5 * t * t);
    let q_scale = t.powi(model.homogeneous_dim as i32);
    out.push(CheckResult::new(
        "group",
        "dilation_volume_scaling",
        ((image_vol / box_vol) / q_scale - 1.0).abs() < 1e-12,
        format!("t^Q = {} vs measured {}", fmt(q_scale), fmt(image_vol / box_vol)),
    ));
}

fn metric_checks(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let model = GroupModel::abelian(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1234);

    // closed-form distance vs shooting
    let pairs = if cfg.quick { 8 } else { 100 };
    let mut worst: f64 = 0.0;
    let mut failures = 0usize;
    for i in 0..pairs {
        let target = GPoint::new(
            NPoint::new(vec![rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)]),
            rng.gen_range(-1.5..1.5),
        );
        let exact = norm_g(&model, &target).unwrap();
        match shoot_distance_g(&model, &target, cfg.seed ^ (3000 + i as u64), 50) {
            Ok(s) => worst = worst.max((s.length - exact).abs() / (1.0 + exact)),
            Err(_) => failures += 1,
        }
    }
    out.push(CheckResult::new(
        "metric",
        "distance_vs_shooting_abelian",
        worst < 1e-4 && failures == 0,
        format!("worst rel dev {}, {failures} failures", fmt(worst)),
    ));

    // Heisenberg distances through lifted numeric N-geodesics
    let hmodel = GroupModel::heisenberg1();
    let hpairs = if cfg.quick { 5 } else { 30 };
    let mut worst_h: f64 = 0.0;
    let mut skipped = 0usize;
    for _ in 0..hpairs {
        let x = GPoint::new(
            NPoint::new(vec![
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-0.4..0.4),
            ]),
            rng.gen_range(-0.8..0.8),
        );
        let y = GPoint::new(
            NPoint::new(vec![
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-0.4..0.4),
            ]),
            rng.gen_range(-0.8..0.8),
        );
        // work at the origin: w = x^{-1} y
        let w = hmodel.g_multiply(&hmodel.g_inverse(&x).unwrap(), &y).unwrap();
        let closed = cc_distance_g(&hmodel, &x, &y).unwrap();
        // numeric N-geodesic from 0 to w.z by shooting on N
        match shoot_n_geodesic(&hmodel, &w.z, cfg.seed ^ 0x5151, 40) {
            Some(curve) => {
                let lift = lift_geodesic(&hmodel, &curve, 0.0, w.u).unwrap();
                worst_h = worst_h.max((lift.length() - closed).abs() / (1.0 + closed));
            }
            None => skipped += 1,
        }
    }
    out.push(CheckResult::new(
        "metric",
        "distance_vs_lifted_geodesics_heisenberg",
        worst_h < 1e-4 && skipped <= hpairs / 10,
        format!("worst rel dev {}, {skipped} skipped", fmt(worst_h)),
    ));

    // triangle inequality and left-invariance
    let triples = if cfg.quick { 100 } else { 1000 };
    let mut tri_ok = true;
    let mut inv_worst: f64 = 0.0;
    for model in [GroupModel::abelian(2).unwrap(), GroupModel::heisenberg1()] {
        for _ in 0..triples {
            let p = |rng: &mut ChaCha8Rng| {
                GPoint::new(
                    NPoint::new((0..model.dim).map(|_| rng.gen_range(-1.5..1.5)).collect()),
                    rng.gen_range(-1.5..1.5),
                )
            };
            let (x, y, z) = (p(&mut rng), p(&mut rng), p(&mut rng));
            let dxy = cc_distance_g(&model, &x, &y).unwrap();
            let dyz = cc_distance_g(&model, &y, &z).unwrap();
            let dxz = cc_distance_g(&model, &x, &z).unwrap();
            if dxz > dxy + dyz + 1e-10 {
                tri_ok = false;
            }
            let g = p(&mut rng);
            let d1 = cc_distance_g(
                &model,
                &model.g_multiply(&g, &x).unwrap(),
                &model.g_multiply(&g, &y).unwrap(),
            )
            .unwrap();
            inv_worst = inv_worst.max((d1 - dxy).abs() / (1.0 + dxy));
        }
    }
    out.push(CheckResult::new("metric", "triangle_inequality", tri_ok, String::new()));
    out.push(CheckResult::new(
        "metric",
        "left_invariance",
        inv_worst < 1e-10,
        format!("worst rel dev {}", fmt(inv_worst)),
    ));

    // length relation for lifted geodesics + reparametrization identity
    let mut worst_len: f64 = 0.0;
    for _ in 0..(if cfg.quick { 3 } else { 10 }) {
        let zeta: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let curve = HjCurveN::integrate(&hmodel, &HjStateN { z: hmodel.n_zero(), zeta }, 1.0, 400);
        let (u0, u1) = (rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
        let lift = lift_geodesic(&hmodel, &curve, u0, u1).unwrap();
        let ln = curve.length();
        let want = ((1.0 + (2.0 * (u1 - u0)).exp() + ((-u0).exp() * ln).powi(2))
            / (2.0 * (u1 - u0).exp()))
        .acosh();
        worst_len = worst_len.max((lift.length() - want).abs() / (1.0 + want));
    }
    out.push(CheckResult::new(
        "metric",
        "length_relation",
        worst_len < 1e-8,
        format!("worst rel dev {}", fmt(worst_len)),
    ));

    let mut worst_rep: f64 = 0.0;
    for (u0, nu0, h0n) in [(0.3, -0.7, 1.3), (0.0, 2.0, 0.0), (1.0, 0.0, 0.4)] {
        let s = crate::metric::reparam::reparam_solve(u0, nu0, h0n).unwrap();
        for i in 0..100 {
            let t = -1.0 + 0.03 * i as f64;
            let lhs = (2.0 * s.u(t)).exp();
            let v = s.v(t);
            let rhs = (2.0 * u0).exp() + 2.0 * v * (nu0 - h0n * v);
            worst_rep = worst_rep.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
        }
    }
    out.push(CheckResult::new(
        "metric",
        "reparametrization_identity",
        worst_rep < 1e-10,
        format!("worst rel dev {}", fmt(worst_rep)),
    ));

    // volume monotonicity and the two asymptotic regimes
    let vn = std::f64::consts::PI;
    let mut prev = 0.0;
    let mut mono = true;
    let mut small_ratios: Vec<f64> = Vec::new();
    let mut large_ratios: Vec<f64> = Vec::new();
    for i in 1..=50 {
        let r = 0.1 * i as f64;
        let v = ball_volume_g(2, vn, r).unwrap();
        if v <= prev {
            mono = false;
        }
        prev = v;
        if r <= 1.0 {
            small_ratios.push(v / r.powi(3));
        } else {
            large_ratios.push(v / (2.0 * r).exp());
        }
    }
    let sspread = small_ratios.iter().cloned().fold(0.0f64, f64::max)
        / small_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let lspread = large_ratios.iter().cloned().fold(0.0f64, f64::max)
        / large_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(CheckResult::new(
        "metric",
        "volume_monotone_two_regimes",
        mono && sspread < 3.0 && lspread < 30.0,
        format!("small-regime spread {}, large-regime spread {}", fmt(sspread), fmt(lspread)),
    ));

    // Monte Carlo volume cross-check at one radius
    let samples = if cfg.quick { 40_000 } else { 400_000 };
    let (mc, ci) = mc_ball_volume_g(&model, 1.0, cfg.seed, samples).unwrap();
    let exact = crate::metric::radial::ball_volume_g_q2_closed(vn, 1.0);
    out.push(CheckResult::new(
        "metric",
        "volume_monte_carlo",
        (mc - exact).abs() < (3.0 * ci).max(0.02 * exact),
        format!("mc {} vs exact {} (ci {})", fmt(mc), fmt(exact), fmt(ci)),
    ));
    let _ = unit_ball_volume_n(&hmodel, cfg.seed, if cfg.quick { 20_000 } else { 100_000 });
}

/// Multiple-start Newton on the N-level endpoint map; returns the shortest
/// converged HJ-curve.
fn shoot_n_geodesic(model: &GroupModel, target: &NPoint, seed: u64, starts: usize) -> Option<HjCurveN> {
    use crate::metric::hj::hj_flow_n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for s in 0..starts {
        let mut zeta: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
        if s == 0 {
            zeta = vec![target.coords[0], target.coords[1], 0.0];
        }
        for _ in 0..60 {
            let end = hj_flow_n(model, &HjStateN { z: model.n_zero(), zeta: zeta.clone() }, 1.0, 600)
                .unwrap();
            let f: Vec<f64> = end
                .z
                .coords
                .iter()
                .zip(&target.coords)
                .map(|(a, b)| a - b)
                .collect();
            if f.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-10 {
                break;
            }
            let mut jac = vec![vec![0.0; 3]; 3];
            for j in 0..3 {
                let mut zj = zeta.clone();
                zj[j] += 1e-6;
                let ej = hj_flow_n(model, &HjStateN { z: model.n_zero(), zeta: zj }, 1.0, 600)
                    .unwrap();
                for i in 0..3 {
                    jac[i][j] = (ej.z.coords[i] - end.z.coords[i]) / 1e-6;
                }
            }
            if !newton_step(&mut jac, &f, &mut zeta) {
                break;
            }
        }
        let end = hj_flow_n(model, &HjStateN { z: model.n_zero(), zeta: zeta.clone() }, 1.0, 600)
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
            let h = crate::metric::hj::hamiltonian_n(
                model,
                &HjStateN { z: model.n_zero(), zeta: zeta.clone() },
            );
            let len = (2.0 * h).sqrt();
            if best.as_ref().map_or(true, |(l, _)| len < *l) {
                best = Some((len, zeta));
            }
            if s >= 12 && best.is_some() {
                break;
            }
        }
    }
    best.map(|(_, zeta)| {
        HjCurveN::integrate(model, &HjStateN { z: model.n_zero(), zeta }, 1.0, 800)
    })
}

fn newton_step(a: &mut [Vec<f64>], f: &[f64], x: &mut [f64]) -> bool {
    let n = f.len();
    let mut rhs = f.to_vec();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[piv][c].abs() < 1e-13 {
            return false;
        }
        a.swap(c, piv);
        rhs.swap(c, piv);
        for r in c + 1..n {
            let fct = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= fct * a[c][k];
            }
            rhs[r] -= fct * rhs[c];
        }
    }
    for c in (0..n).rev() {
        rhs[c] /= a[c][c];
        for r in 0..c {
            rhs[r] -= a[r][c] * rhs[c];
        }
    }
    for (xi, d) in x.iter_mut().zip(&rhs) {
        *xi -= d.clamp(-2.0, 2.0);
    }
    true
}

fn cz_checks(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let report = cz::validate_constants(cfg.m, cfg.r0, cfg.eta);
    out.push(CheckResult::new(
        "cz",
        "constants_six_constraints",
        report.all_pass,
        format!(
            "slacks: {}",
            report
                .checks
                .iter()
                .map(|c| format!("{:.4}", c.slack))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));
    let constants = match AdmissibilityConstants::euclidean(cfg.m, cfg.r0, cfg.eta, 2) {
        Ok(c) => c,
        Err(e) => {
            out.push(CheckResult::new("cz", "constants_build", false, e.to_string()));
            return;
        }
    };
    let carrier = GridCarrier::new(2, 16, 0, 32, 0.125, -2.0);
    let system = EuclideanDyadic::new(2, -8, 120).unwrap();
    let model = GroupModel::abelian(2).unwrap();

    // empirical C1 and C*
    let nsets = if cfg.quick { 15 } else { 100 };
    let sets = cz::sample_admissible_sets(&carrier, &constants, cfg.seed ^ 0x31, nsets);
    let c1 = cz::measure_c1(&model, &sets, cfg.seed ^ 0x32, 40).unwrap();
    let c_star =
        cz::measure_c_star(&model, &sets[..nsets.min(12)], cfg.seed ^ 0x33, 400).unwrap();
    let constants = constants.with_measured(c1 * 1.05, c_star * 1.05);
    out.push(CheckResult::new(
        "cz",
        "empirical_c1_cstar",
        c1.is_finite() && c_star.is_finite() && c_star >= 0.5,
        format!("C1 {} C* {} kappa0 {}", fmt(c1), fmt(c_star), fmt(constants.kappa0)),
    ));

    // enlargement bound against the configured C*
    let more = cz::sample_admissible_sets(&carrier, &constants, cfg.seed ^ 0x34, 8);
    let c_star2 = cz::measure_c_star(&model, &more, cfg.seed ^ 0x35, 400).unwrap();
    out.push(CheckResult::new(
        "cz",
        "enlargement_measure_bound",
        c_star2 <= constants.c_star * 1.2,
        format!("fresh C* {} vs configured {}", fmt(c_star2), fmt(constants.c_star)),
    ));

    // ball-rectangle inclusions
    let mut incl_ok = true;
    let mut worst_ratio: f64 = 0.0;
    for r in [0.3, 1.0, 2.0] {
        let w = cz::checks::check_product_in_ball(&model, &constants, r, cfg.seed ^ 0x36, 300)
            .unwrap();
        worst_ratio = worst_ratio.max(w);
        if !w.is_finite() {
            incl_ok = false;
        }
    }
    for r in [0.5, 1.0] {
        if cz::checks::check_ball_in_product(&model, r, cfg.seed ^ 0x37, 200).unwrap() > 0 {
            incl_ok = false;
        }
    }
    out.push(CheckResult::new(
        "cz",
        "ball_rectangle_inclusions",
        incl_ok,
        format!("max rho/r over product sets {}", fmt(worst_ratio)),
    ));

    // decomposition battery
    let funcs = if cfg.quick { 4 } else { 50 };
    let mut all_ok = true;
    let mut worst_name = String::new();
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max: f64 = 0.0;
    for sf in 0..funcs {
        let f = DiscretizedFunction::random(carrier.clone(), cfg.seed ^ (0x4000 + sf as u64));
        let base = f.l1_norm() / carrier.window().measure();
        for mult in [0.25, 0.5, 1.0, 2.0] {
            match cz::cz_decompose(&f, mult * base, &constants, &system) {
                Ok(dec) => {
                    ratio_min = ratio_min.min(dec.diagnostics.child_ratio_min);
                    ratio_max = ratio_max.max(dec.diagnostics.child_ratio_max);
                    for c in cz::verify_decomposition(&f, &dec, &constants) {
                        if !c.pass {
                            all_ok = false;
                            worst_name = format!("{} (f {sf}, alpha x{mult})", c.name);
                        }
                    }
                }
                Err(e) => {
                    all_ok = false;
                    worst_name = e.to_string();
                }
            }
        }
    }
    out.push(CheckResult::new(
        "cz",
        "decomposition_properties",
        all_ok,
        if all_ok { format!("{funcs} functions x 4 heights clean") } else { worst_name },
    ));
    out.push(CheckResult::new(
        "cz",
        "child_measure_ratios",
        ratio_min >= 1.0 / constants.c2 - 1e-12 && ratio_max <= 1.0 + 1e-12,
        format!("observed [{}, {}]", fmt(ratio_min), fmt(ratio_max)),
    ));

    // maximal operator weak type
    let f = DiscretizedFunction::random(carrier.clone(), cfg.seed ^ 0x77);
    let partition = cz::big_quasi_partition(1.0, &carrier, &constants, &system).unwrap();
    let mvals = cz::maximal_operator(&f, &partition, &constants, &system).unwrap();
    let l1 = f.l1_norm();
    let w = carrier.cell_weight();
    let mut weak_ok = true;
    let mut dominated = true;
    for k in 1..=10 {
        let a = l1 / carrier.window().measure() * 0.3 * k as f64;
        let mu: f64 = mvals.iter().filter(|&&v| v > a).count() as f64 * w;
        if mu * a > l1 * (1.0 + 1e-9) {
            weak_ok = false;
        }
    }
    for (v, m) in f.values.iter().zip(&mvals) {
        if v.abs() > m * (1.0 + 1e-9) + 1e-14 {
            dominated = false;
        }
    }
    out.push(CheckResult::new("cz", "maximal_weak_type", weak_ok && dominated, String::new()));

    // nested family (condition for the Hardy space)
    let nested = cz::checks::check_nested_family(&carrier, &constants, &system, cfg.seed, 30);
    out.push(CheckResult::new(
        "cz",
        "nested_family",
        nested.is_ok(),
        nested.err().map(|e| e.to_string()).unwrap_or_default(),
    ));

    // net system on a Heisenberg gauge-ball sample
    let hmodel = GroupModel::heisenberg1();
    let npts = if cfg.quick { 300 } else { 900 };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x88);
    let pts: Vec<NPoint> = (0..npts)
        .map(|_| {
            NPoint::new(vec![
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-0.3..0.3),
            ])
        })
        .collect();
    let dist = |a: usize, b: usize| cc_distance_n(&hmodel, &pts[a], &pts[b]).unwrap();
    match cz::NetDyadic::build(pts.len(), dist, cfg.eta, -3, 1) {
        Ok(net) => {
            let ver = net.verify(pts.len());
            out.push(CheckResult::new(
                "cz",
                "net_dyadic_heisenberg",
                ver.is_ok() && net.achieved_c_n.is_finite(),
                format!("achieved C_N {} J {}", fmt(net.achieved_c_n), net.achieved_j),
            ));
        }
        Err(e) => out.push(CheckResult::new("cz", "net_dyadic_heisenberg", false, e.to_string())),
    }
}

fn heat_checks(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let model = GroupModel::abelian(2).unwrap();
    let times: &[f64] = if cfg.quick { &[1.0] } else { &[1.0, 2.0, 4.0] };
    let mut worst_mass: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for &t in times {
        let ev = HeatEvaluator::new(&model, t, 1e-8).unwrap();
        worst_mass = worst_mass.max((ev.mass() - 1.0).abs());
        worst_oracle = worst_oracle.max(ev.l1_distance_to_h3_oracle().unwrap());
    }
    out.push(CheckResult::new(
        "heat",
        "unit_mass",
        worst_mass < 1e-3,
        format!("worst |mass-1| {}", fmt(worst_mass)),
    ));
    out.push(CheckResult::new(
        "heat",
        "h3_oracle_l1",
        worst_oracle < 1e-2,
        format!("worst L1 distance {}", fmt(worst_oracle)),
    ));

    // positivity + pointwise bound at random points
    let ev = HeatEvaluator::new(&model, 1.0, 1e-8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x99);
    let h0 = ev.kernel_radial(0.0, 0.0);
    let mut bound_ok = true;
    for _ in 0..200 {
        let z2 = rng.gen_range(0.0..20.0);
        let u = rng.gen_range(-3.0..3.0);
        let h = ev.kernel_radial(z2, u);
        if h < 0.0 || h > (-u).exp() * h0 * (1.0 + 1e-9) {
            bound_ok = false;
        }
    }
    out.push(CheckResult::new("heat", "positivity_and_center_bound", bound_ok, String::new()));

    // semigroup
    let semi = ev.semigroup_l1_error().unwrap();
    out.push(CheckResult::new(
        "heat",
        "semigroup_l1",
        semi < 5e-3,
        format!("||h1*h1 - h2||_1 ~ {}", fmt(semi)),
    ));

    // inner-integral envelope
    let mut env_ok = true;
    for &alpha in &[0.5, 1.0] {
        let c = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&th| inner_integral(alpha, th) * th.exp())
            .fold(0.0f64, f64::max);
        for &th in &[0.5, 1.5, 3.0, 6.0] {
            if inner_integral(alpha, th) > 1.02 * c * (-th as f64).exp() {
                env_ok = false;
            }
        }
    }
    out.push(CheckResult::new("heat", "inner_integral_envelope", env_ok, String::new()));

    // gradient scaling (full range only in non-quick mode)
    let times: &[f64] = if cfg.quick { &[1.0, 4.0] } else { &[1.0, 4.0, 16.0, 64.0] };
    let mut scaled = Vec::new();
    for &t in times {
        let ev = HeatEvaluator::new(&model, t, 1e-6).unwrap();
        scaled.push(t.sqrt() * ev.grad_l1_norm());
    }
    let smax = scaled.iter().cloned().fold(0.0f64, f64::max);
    let smin = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(CheckResult::new(
        "heat",
        "gradient_t_half_scaling",
        smax / smin < 2.0,
        format!(
            "sqrt(t)*norm in [{}, {}] over t in {times:?}",
            fmt(smin),
            fmt(smax)
        ),
    ));

    // small-time Gaussian-type envelope at t = T_MIN
    let ev = HeatEvaluator::new(&model, crate::heat::T_MIN, 1e-8).unwrap();
    let mut decay_ok = true;
    let mut prev = ev.kernel_radial(2.0 * (1.0f64.cosh() - 1.0), 0.0);
    for i in 2..=6 {
        let rho = i as f64;
        let cur = ev.kernel_radial(2.0 * (rho.cosh() - 1.0), 0.0);
        if cur > prev * (-0.5f64).exp() {
            decay_ok = false; // must decay at least like e^{-rho/2} on this range
        }
        prev = cur;
    }
    out.push(CheckResult::new("heat", "small_time_envelope", decay_ok, String::new()));
}

fn multiplier_checks(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let model = GroupModel::abelian(2).unwrap();

    // Plancherel calibration and heat cross-check
    let c_delta = calibrate_c_delta(&model, 1e-8).unwrap();
    out.push(CheckResult::new(
        "multiplier",
        "c_delta_calibration",
        (c_delta / C_DELTA_Q2 - 1.0).abs() < 1e-3,
        format!("calibrated {} vs 1/(4 pi^2) {}", fmt(c_delta), fmt(C_DELTA_Q2)),
    ));

    let mut worst: f64 = 0.0;
    for t in [1.0f64, 2.0] {
        let k = kernel_l2_norm(2, C_DELTA_Q2, |s| (-2.0 * t * s * s).exp(), 12.0, 1e-6)
            .unwrap();
        let direct = (8.0 * std::f64::consts::PI * t).powf(-0.75);
        worst = worst.max((k.exact / direct - 1.0).abs());
    }
    out.push(CheckResult::new(
        "multiplier",
        "plancherel_vs_heat_l2",
        worst < 0.01,
        format!("worst rel dev {}", fmt(worst)),
    ));

    // finite propagation + Fejer closed forms
    let mut prop_ok = true;
    for r in [0.5, 2.0] {
        let p = BandLimitedProfile::new(BandShape::Triangle, r);
        let k = spherical_kernel_banded(&p, r + 2.0, 800);
        for rho in [r * 1.0001, r * 1.5, r + 1.0] {
            if k.eval(rho).norm() > 1e-8 {
                prop_ok = false;
            }
        }
        if (k.l1_norm() / r - 1.0).abs() > 1e-3 {
            prop_ok = false;
        }
    }
    out.push(CheckResult::new("multiplier", "finite_propagation_support", prop_ok, String::new()));

    // Hebisch decomposition
    let grid = FourierGrid::standard();
    let d = hebisch_decompose(smooth_even_bump, &grid, 12).unwrap();
    out.push(CheckResult::new(
        "multiplier",
        "hebisch_reconstruction",
        d.reconstruction_error < 1e-8 && d.worst_band_leak < 1e-10,
        format!(
            "reconstruction {} band leak {}",
            fmt(d.reconstruction_error),
            fmt(d.worst_band_leak)
        ),
    ));
    let spline =
        hebisch_decompose(crate::multiplier::quadratic_spline_bump, &grid, 12).unwrap();
    let slope = spline.tail_slope(3.0, 3.0, 4, 12);
    out.push(CheckResult::new(
        "multiplier",
        "hebisch_tail_slope",
        slope <= -3.8,
        format!("lambda^3 tail slope {}", fmt(slope)),
    ));

    // two-sided comparison over the multiplier bank
    let mut ratios = Vec::new();
    for shape in BandShape::ALL {
        for r in [0.5, 1.0, 2.0, 4.0] {
            let p = BandLimitedProfile::new(shape, r);
            if let Ok(k) = kernel_l2_norm(
                2,
                C_DELTA_Q2,
                |s| {
                    let v = p.eval_sqrt_side(s);
                    v * v
                },
                40.0 / r + 20.0,
                0.05,
            ) {
                if k.comparison > 0.0 {
                    ratios.push(k.exact / k.comparison);
                }
            }
        }
    }
    let rmax = ratios.iter().cloned().fold(0.0f64, f64::max);
    let rmin = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(CheckResult::new(
        "multiplier",
        "two_sided_comparison",
        ratios.len() >= 18 && rmax / rmin < 25.0,
        format!("{} profiles, ratio range [{}, {}]", ratios.len(), fmt(rmin), fmt(rmax)),
    ));

    // MH dilation law: modulus-one power has t-independent local norms
    let f = |lam: f64| {
        if lam <= 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            let p = 2.0 * lam.ln();
            Complex64::new(p.cos(), p.sin())
        }
    };
    let lo = mh_norm(f, 2.0, MhRegime::Low, 4, &grid).value;
    let hi = mh_norm(f, 2.0, MhRegime::High, 4, &grid).value;
    let one = |_: f64| Complex64::new(1.0, 0.0);
    let base = mh_norm(one, 2.0, MhRegime::High, 4, &grid).value;
    let psi_vals: Vec<Complex64> =
        (0..grid.n).map(|i| Complex64::new(psi_bump(grid.x(i)), 0.0)).collect();
    let psi_norm = crate::multiplier::sobolev_norm(&grid, &psi_vals, 2.0);
    out.push(CheckResult::new(
        "multiplier",
        "mh_norm_dilation_law",
        (lo / hi - 1.0).abs() < 1e-6 && (base / psi_norm - 1.0).abs() < 1e-10,
        format!("imagpower low/high {}, psi base ratio {}", fmt(lo / hi), fmt(base / psi_norm)),
    ));

    let _ = arccosh1p(0.0);
    let _ = h3_oracle_kernel(1.0, 1.0, 0.0);
}
