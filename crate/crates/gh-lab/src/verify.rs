//! Named verification checks covering every identity the library implements,
//! grouped into suites, with deterministic seeding and machine-readable
//! reports.

use crate::atlas::{
    boundary_map, from_global, from_patch, metric_complex, to_global, to_patch, AxisKind,
    BoundaryImage, PatchPoint,
};
use crate::charts::{connection_generic, gauge_difference, ChartId};
use crate::error::{GhError, GhResult};
use crate::field::{check_harmonic, star_dv, CenterConfig, RealPoint};
use crate::metric::{
    complex_structure, kahler_form_labeled, metric_real, ricci_numeric, symplectic_jacobian,
    ComplexStructureLabel, FiberPoint,
};
use crate::numerics::{
    cyclic_to_lex, exterior_derivative, gradient_complex, hessian2, mat_mul, Dual, Scalar,
};
use crate::phase::{
    classify, family_kahler_form, family_moment, family_potential, PhaseClassification,
    PhaseParameter,
};
use crate::sampling::{sample_fiber_point, sample_off_axis};
use crate::symplectic::{
    build_polytope, complex_potential_hessian, g_matrices, invert_moment,
    kahler_potential, legendre_transform, metric_symplectic, moment_actions, moment_map,
    resolved_cone_complex, resolved_cone_hessian, resolved_cone_potential, CanonicalConeCoords,
    HessianPotentials, SymplecticPoint,
};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const SUITES: [&str; 9] = [
    "harmonic", "connection", "kahler", "hessian", "legendre", "atlas", "ricci", "phase", "all",
];

/// One registered identity check.
pub struct CheckDef {
    pub name: &'static str,
    /// The mathematical statement being verified, spelled out.
    pub identity: &'static str,
    pub suite: &'static str,
    pub tolerance: f64,
    run: fn(&VerifyContext) -> (usize, f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub identity: String,
    pub suite: String,
    pub points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Shared inputs of a verification run. The configured centers are used
/// whenever a check needs their n; sweeps over other n fall back to evenly
/// spaced centers.
pub struct VerifyContext {
    pub centers: Vec<f64>,
    pub seed: u64,
}

impl VerifyContext {
    pub fn new(centers: Vec<f64>, seed: u64) -> Self {
        VerifyContext { centers, seed }
    }

    fn config_for(&self, n: usize) -> CenterConfig {
        if self.centers.len() == n {
            CenterConfig::new(self.centers.clone()).unwrap()
        } else {
            CenterConfig::new((0..n).map(|i| i as f64 * 0.8).collect()).unwrap()
        }
    }

    /// Check-local deterministic generator: base seed mixed with an FNV hash
    /// of the check name, so checks are independent and reorderable.
    fn rng(&self, name: &str) -> ChaCha8Rng {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in name.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

pub fn registry() -> Vec<CheckDef> {
    vec![
        CheckDef {
            name: "harmonic-potential",
            identity: "laplacian of V = 1/2 sum 1/r_j vanishes off the centers",
            suite: "harmonic",
            tolerance: 1e-8,
            run: run_harmonic,
        },
        CheckDef {
            name: "monopole-equation",
            identity: "d(alpha) + *dV = 0 on both charts",
            suite: "connection",
            tolerance: 1e-7,
            run: run_monopole,
        },
        CheckDef {
            name: "gauge-jump-integer",
            identity: "(alpha_N - alpha_S) on the unit angular field equals n",
            suite: "connection",
            tolerance: 1e-10,
            run: run_gauge_jump,
        },
        CheckDef {
            name: "gauge-jump-variance",
            identity: "variance of the gauge jump over sample points",
            suite: "connection",
            tolerance: 1e-18,
            run: run_gauge_variance,
        },
        CheckDef {
            name: "kahler-triple-closed",
            identity: "d(omega_i) = 0 for the hyperkahler triple",
            suite: "kahler",
            tolerance: 1e-6,
            run: run_kahler_closed,
        },
        CheckDef {
            name: "metric-compatibility",
            identity: "g(JX, JY) = g(X, Y) and omega(X, Y) = g(JX, Y)",
            suite: "kahler",
            tolerance: 1e-10,
            run: run_compatibility,
        },
        CheckDef {
            name: "hessian-matches-metric",
            identity: "Hess(psi) in (mu1, mu2) equals the symplectic matrix G",
            suite: "hessian",
            tolerance: 1e-8,
            run: run_hessian_vs_g,
        },
        CheckDef {
            name: "g-inverse-identity",
            identity: "G . G^{-1} = I for the closed-form pair",
            suite: "hessian",
            tolerance: 1e-10,
            run: run_g_inverse,
        },
        CheckDef {
            name: "pullback-symplectic",
            identity: "symplectic metric pulled back through d(mu, theta) equals the real metric",
            suite: "hessian",
            tolerance: 1e-8,
            run: run_pullback_symplectic,
        },
        CheckDef {
            name: "pullback-complex",
            identity: "patch metric pulled back through d(alpha, beta) equals the real metric",
            suite: "hessian",
            tolerance: 1e-8,
            run: run_pullback_complex,
        },
        CheckDef {
            name: "legendre-duality",
            identity: "mu . grad(psi) - psi equals the Kahler potential with matched constants",
            suite: "legendre",
            tolerance: 1e-9,
            run: run_legendre,
        },
        CheckDef {
            name: "cone-hessian-agreement",
            identity: "root-of-unity cone Hessian matches differenced gradients and the n = 2 closed form",
            suite: "legendre",
            tolerance: 1e-8,
            run: run_cone_hessian,
        },
        CheckDef {
            name: "cone-imaginary-residue",
            identity: "the root-of-unity sum is real on the cone interior",
            suite: "legendre",
            tolerance: 1e-10,
            run: run_cone_imag,
        },
        CheckDef {
            name: "n1-patch-identity",
            identity: "single-center patch metric is the identity (flat C^2)",
            suite: "atlas",
            tolerance: 1e-9,
            run: run_n1_identity,
        },
        CheckDef {
            name: "chart-round-trip",
            identity: "global complex coordinates invert back to the fiber point",
            suite: "atlas",
            tolerance: 1e-9,
            run: run_chart_round_trip,
        },
        CheckDef {
            name: "moment-round-trip",
            identity: "moment coordinates invert back to the fiber point",
            suite: "atlas",
            tolerance: 1e-9,
            run: run_moment_round_trip,
        },
        CheckDef {
            name: "moment-containment",
            identity: "the moment image lies inside the half-plane polytope",
            suite: "atlas",
            tolerance: 1e-9,
            run: run_containment,
        },
        CheckDef {
            name: "boundary-piece-images",
            identity: "patch axes map onto their labeled boundary pieces L_i",
            suite: "atlas",
            tolerance: 1e-8,
            run: run_boundary_pieces,
        },
        CheckDef {
            name: "n1-patch-ricci",
            identity: "numerical Ricci of the single-center patch metric vanishes",
            suite: "ricci",
            tolerance: 1e-6,
            run: run_n1_ricci,
        },
        CheckDef {
            name: "ricci-flatness",
            identity: "numerical Ricci of the multi-center metric vanishes",
            suite: "ricci",
            tolerance: 1e-4,
            run: run_ricci_flat,
        },
        CheckDef {
            name: "phase-classification",
            identity: "phase labels match the sign of |beta|^2 (1+|alpha|^2)^2 - b^2",
            suite: "phase",
            tolerance: 0.5,
            run: run_phase_classification,
        },
        CheckDef {
            name: "phase-case1-real",
            identity: "outside the shell the potential and moments are real",
            suite: "phase",
            tolerance: 1e-12,
            run: run_phase_case1,
        },
        CheckDef {
            name: "phase-case2-imaginary",
            identity: "inside the shell the potential, moments, and form are purely imaginary",
            suite: "phase",
            tolerance: 1e-10,
            run: run_phase_case2,
        },
        CheckDef {
            name: "phase-shell-continuity",
            identity: "family moments vanish continuously at the shell",
            suite: "phase",
            tolerance: 1e-5,
            run: run_phase_continuity,
        },
        CheckDef {
            name: "phase-image-convex",
            identity: "real-parameter moment image satisfies its three half-plane bounds",
            suite: "phase",
            tolerance: 1e-9,
            run: run_phase_image_real,
        },
        CheckDef {
            name: "phase-image-cone",
            identity: "outside-shell moment image satisfies the cone inequalities",
            suite: "phase",
            tolerance: 1e-9,
            run: run_phase_image_cone,
        },
        CheckDef {
            name: "phase-middle-implied",
            identity: "the middle cone inequality follows from the outer two",
            suite: "phase",
            tolerance: 0.5,
            run: run_phase_middle,
        },
    ]
}

/// Runs one suite (or `all`), returning results sorted by check name.
pub fn run_suite(ctx: &VerifyContext, suite: &str) -> GhResult<Vec<CheckResult>> {
    if !SUITES.contains(&suite) {
        return Err(GhError::InvalidInput(format!(
            "unknown suite '{suite}'; expected one of {}",
            SUITES.join(", ")
        )));
    }
    let checks: Vec<CheckDef> = registry()
        .into_iter()
        .filter(|c| suite == "all" || c.suite == suite)
        .collect();
    // checks are independent (each seeds its own generator), so run them in
    // parallel; sorting afterwards keeps the report order-independent
    let mut results: Vec<CheckResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = checks
            .iter()
            .map(|c| {
                scope.spawn(move || {
                    let (points, max_residual) = (c.run)(ctx);
                    CheckResult {
                        name: c.name.to_string(),
                        identity: c.identity.to_string(),
                        suite: c.suite.to_string(),
                        points,
                        max_residual,
                        tolerance: c.tolerance,
                        pass: max_residual <= c.tolerance,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    results.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(results)
}

/// Aligned text report; residuals are always shown.
pub fn report_text(results: &[CheckResult]) -> String {
    let name_w = results.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
    let mut out = format!(
        "{:<name_w$}  {:>8}  {:>12}  {:>9}  {}\n",
        "check", "points", "max-resid", "tol", "status"
    );
    for r in results {
        out.push_str(&format!(
            "{:<name_w$}  {:>8}  {:>12.3e}  {:>9.1e}  {}\n",
            r.name,
            r.points,
            r.max_residual,
            r.tolerance,
            if r.pass { "pass" } else { "FAIL" }
        ));
    }
    out
}

pub fn report_json(results: &[CheckResult]) -> String {
    serde_json::to_string_pretty(results).expect("report serialization")
}

fn max2(a: f64, b: f64) -> f64 {
    a.max(b)
}

fn run_harmonic(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("harmonic-potential");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3, 5] {
        let config = ctx.config_for(n);
        for _ in 0..100 {
            // the fourth-derivative truncation error scales like h^2 / r^5,
            // so keep a healthy margin from the centers
            let p = sample_off_axis(&config, &mut rng, 0.6);
            let r = check_harmonic(&config, &p).unwrap();
            worst = max2(worst, r.residual);
            points += 1;
        }
    }
    (points, worst)
}

fn run_monopole(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("monopole-equation");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        for _ in 0..100 {
            let p = sample_off_axis(&config, &mut rng, 0.5);
            for chart in [ChartId::South, ChartId::North] {
                let form = |q: &[f64]| {
                    connection_generic(config.centers(), chart, q[0], q[1], q[2]).to_vec()
                };
                let da = exterior_derivative(3, 1, &form, &[p.x, p.y, p.z], 1e-5).unwrap();
                let sdv = cyclic_to_lex(&star_dv(&config, &p).unwrap());
                for i in 0..3 {
                    worst = max2(worst, (da[i] + sdv[i]).abs());
                }
                points += 1;
            }
        }
    }
    (points, worst)
}

fn gauge_samples(ctx: &VerifyContext) -> Vec<(usize, f64)> {
    let mut rng = ctx.rng("gauge-jump");
    let mut out = Vec::new();
    for n in [1usize, 2, 4] {
        let config = ctx.config_for(n);
        for _ in 0..100 {
            let p = sample_off_axis(&config, &mut rng, 0.1);
            out.push((n, gauge_difference(&config, &p).unwrap()));
        }
    }
    out
}

fn run_gauge_jump(ctx: &VerifyContext) -> (usize, f64) {
    let samples = gauge_samples(ctx);
    let worst = samples
        .iter()
        .map(|(n, g)| (g - *n as f64).abs())
        .fold(0.0, f64::max);
    (samples.len(), worst)
}

fn run_gauge_variance(ctx: &VerifyContext) -> (usize, f64) {
    let samples = gauge_samples(ctx);
    let mut worst = 0.0f64;
    for n in [1usize, 2, 4] {
        let vals: Vec<f64> = samples.iter().filter(|(m, _)| *m == n).map(|(_, g)| *g).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>() / vals.len() as f64;
        worst = max2(worst, var);
    }
    (samples.len(), worst)
}

fn run_kahler_closed(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("kahler-triple-closed");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        for _ in 0..34 {
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.25);
            for label in [
                ComplexStructureLabel::J1,
                ComplexStructureLabel::J2,
                ComplexStructureLabel::J3,
            ] {
                let form = |q: &[f64]| {
                    let fq = FiberPoint {
                        phi: q[0],
                        base: RealPoint::new(q[1], q[2], q[3]),
                        chart: fp.chart,
                    };
                    let w = kahler_form_labeled(&config, &fq, label).unwrap();
                    vec![w[0][1], w[0][2], w[0][3], w[1][2], w[1][3], w[2][3]]
                };
                let dw = exterior_derivative(
                    4,
                    2,
                    &form,
                    &[fp.phi, fp.base.x, fp.base.y, fp.base.z],
                    1e-5,
                )
                .unwrap();
                for c in &dw {
                    worst = max2(worst, c.abs());
                }
                points += 1;
            }
        }
    }
    (points, worst)
}

fn run_compatibility(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("metric-compatibility");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        for _ in 0..10 {
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.2);
            let g = metric_real(&config, &fp).unwrap();
            for label in [
                ComplexStructureLabel::J1,
                ComplexStructureLabel::J2,
                ComplexStructureLabel::J3,
            ] {
                let j = complex_structure(&config, &fp, label).unwrap();
                let w = kahler_form_labeled(&config, &fp, label).unwrap();
                // g(JX, JY) = g(X, Y): J^T g J = g; omega(X, Y) = g(JX, Y):
                // omega = J^T g
                let pulled = g.congruence(&j);
                worst = max2(worst, pulled.max_abs_diff(&g));
                let mut jt = [[0.0; 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        jt[a][b] = j[b][a];
                    }
                }
                let jg = mat_mul(4, &jt, g.as_array());
                for a in 0..4 {
                    for b in 0..4 {
                        worst = max2(worst, (w[a][b] - jg[a][b]).abs());
                    }
                }
                points += 1;
            }
        }
    }
    (points, worst)
}

fn run_hessian_vs_g(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("hessian-matches-metric");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        for _ in 0..50 {
            let p = sample_off_axis(&config, &mut rng, 0.15);
            let (mu1, mu2) = moment_actions(&config, &p).unwrap();
            let sp = SymplecticPoint::actions(mu1, mu2);
            let hess =
                complex_potential_hessian(&config, &HessianPotentials::zero(), &sp).unwrap();
            let (g, _) = g_matrices(&config, &p).unwrap();
            worst = max2(worst, hess.max_abs_diff(&g));
            points += 1;
        }
    }
    (points, worst)
}

fn run_g_inverse(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("g-inverse-identity");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        for _ in 0..50 {
            let p = sample_off_axis(&config, &mut rng, 0.15);
            let (g, g_up) = g_matrices(&config, &p).unwrap();
            let prod = g.mul(&g_up);
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = max2(worst, (prod[i][j] - want).abs());
                }
            }
            points += 1;
        }
    }
    (points, worst)
}

fn run_pullback_symplectic(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("pullback-symplectic");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2] {
        let config = ctx.config_for(n);
        for _ in 0..20 {
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.2);
            let g_real = metric_real(&config, &fp).unwrap();
            let sp = moment_map(&config, &fp).unwrap();
            let g_sym = metric_symplectic(&config, &sp).unwrap();
            let jac = symplectic_jacobian(&config, &fp).unwrap();
            let pulled = g_sym.congruence(&jac);
            worst = max2(worst, pulled.max_abs_diff(&g_real));
            points += 1;
        }
    }
    (points, worst)
}

/// Exact Jacobian of the patch coordinates with respect to (phi, x, y, z),
/// through dual-number differentiation of alpha = z2^i / z1, beta =
/// z1 / z2^{i-1}.
fn patch_jacobian(config: &CenterConfig, fp: &FiberPoint, patch: usize) -> [[f64; 4]; 4] {
    let centers = config.centers().to_vec();
    let at = [fp.phi, fp.base.x, fp.base.y, fp.base.z];
    let z12 = |v: &[Dual<Complex64, 4>; 4]| {
        let (phi, x, y, z) = (v[0], v[1], v[2], v[3]);
        let i = Dual::constant(Complex64::new(0.0, 1.0));
        let half = Dual::constant(Complex64::new(0.5, 0.0));
        let mut s = i * phi;
        for &c in &centers {
            let d = z - Dual::constant(Complex64::new(c, 0.0));
            let r = (x * x + y * y + d * d).sqrt();
            s = s + half * (r - d).ln();
        }
        (s.exp(), x + i * y)
    };
    let powu = |mut w: Dual<Complex64, 4>, k: usize| {
        let mut acc = Dual::constant(Complex64::new(1.0, 0.0));
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * w;
            }
            w = w * w;
            k >>= 1;
        }
        acc
    };
    let ga = gradient_complex::<4>(
        |v| {
            let (z1, z2) = z12(v);
            powu(z2, patch) / z1
        },
        &at,
    );
    let gb = gradient_complex::<4>(
        |v| {
            let (z1, z2) = z12(v);
            z1 / powu(z2, patch - 1)
        },
        &at,
    );
    let mut jac = [[0.0; 4]; 4];
    for col in 0..4 {
        jac[0][col] = ga[col].re;
        jac[1][col] = ga[col].im;
        jac[2][col] = gb[col].re;
        jac[3][col] = gb[col].im;
    }
    jac
}

fn run_pullback_complex(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("pullback-complex");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2] {
        let config = ctx.config_for(n);
        for _ in 0..20 {
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.2);
            let g_real = metric_real(&config, &fp).unwrap();
            for patch in 1..=n {
                let h = match metric_complex(&config, &fp, patch) {
                    Ok(h) => h,
                    Err(_) => continue,
                };
                let jac = patch_jacobian(&config, &fp, patch);
                let pulled = h.realify().congruence(&jac);
                worst = max2(worst, pulled.max_abs_diff(&g_real));
                points += 1;
            }
        }
    }
    (points, worst)
}

fn run_legendre(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("legendre-duality");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        let matched = HessianPotentials::legendre_matched(n);
        for _ in 0..30 {
            let p = sample_off_axis(&config, &mut rng, 0.15);
            let (mu1, mu2) = moment_actions(&config, &p).unwrap();
            let sp = SymplecticPoint::actions(mu1, mu2);
            let lhs = legendre_transform(&config, &HessianPotentials::zero(), &sp).unwrap();
            let rhs = kahler_potential(&config, &matched, &sp).unwrap();
            worst = max2(worst, (lhs - rhs).abs());
            points += 1;
        }
    }
    (points, worst)
}

/// Exact gradient of the root-of-unity potential at (y1, y2).
fn cone_gradient(n: usize, b: f64, y1: f64, y2: f64) -> [Complex64; 2] {
    gradient_complex::<2>(|v| resolved_cone_complex(n, b, v[0], v[1]), &[y1, y2])
}

fn run_cone_hessian(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("cone-hessian-agreement");
    let mut worst = 0.0f64;
    let mut points = 0;
    let b = 0.7;
    for n in [2usize, 3, 4] {
        for _ in 0..20 {
            let y1: f64 = rng.gen_range(0.2..2.0);
            let y2 = rng.gen_range((b - y1).max(0.0) + 0.2..(b - y1).max(0.0) + 2.2);
            let y = CanonicalConeCoords { y1, y2 };
            let (h, _) = resolved_cone_hessian(n, b, &y).unwrap();
            if n == 2 {
                // independent closed form for the double cover
                let closed = hessian2(
                    |v| resolved_cone_n2_generic(b, v[0], v[1]),
                    &[y.y1, y.y2],
                );
                for i in 0..2 {
                    for j in 0..2 {
                        worst = max2(worst, (h.get(i, j) - closed[i][j]).abs());
                    }
                }
            }
            // Richardson-extrapolated differences of the exact gradient
            for j in 0..2 {
                let step = 1e-3;
                let fd = |s: f64| {
                    let (a1, a2) = if j == 0 { (s, 0.0) } else { (0.0, s) };
                    let gp = cone_gradient(n, b, y.y1 + a1, y.y2 + a2);
                    let gm = cone_gradient(n, b, y.y1 - a1, y.y2 - a2);
                    [
                        (gp[0] - gm[0]).re / (2.0 * s),
                        (gp[1] - gm[1]).re / (2.0 * s),
                    ]
                };
                let coarse = fd(step);
                let fine = fd(step / 2.0);
                for i in 0..2 {
                    let oracle = (4.0 * fine[i] - coarse[i]) / 3.0;
                    worst = max2(worst, (h.get(i, j) - oracle).abs());
                }
            }
            points += 1;
        }
    }
    (points, worst)
}

fn resolved_cone_n2_generic(
    b: f64,
    y1: Dual<Dual<f64, 2>, 2>,
    y2: Dual<Dual<f64, 2>, 2>,
) -> Dual<Dual<f64, 2>, 2> {
    type D = Dual<Dual<f64, 2>, 2>;
    let half = D::constant(Dual::constant(0.5));
    let bb = D::constant(Dual::constant(b));
    let s = y1 + y2;
    y1 * y1.ln() + y2 * y2.ln() - s * s.ln()
        + half * (s - bb) * (s - bb).ln()
        + half * (s + bb) * (s + bb).ln()
}

fn run_cone_imag(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("cone-imaginary-residue");
    let mut worst = 0.0f64;
    let mut points = 0;
    let b = 0.6;
    for n in [2usize, 3, 4] {
        for _ in 0..20 {
            let y1: f64 = rng.gen_range(0.3..2.0);
            let y2 = rng.gen_range((b - y1).max(0.0) + 0.3..(b - y1).max(0.0) + 2.0);
            let y = CanonicalConeCoords { y1, y2 };
            let (_, imag) = resolved_cone_potential(n, b, &y).unwrap();
            worst = max2(worst, imag);
            points += 1;
        }
    }
    (points, worst)
}

fn run_n1_identity(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("n1-patch-identity");
    let config = ctx.config_for(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.1);
        let h = metric_complex(&config, &fp, 1).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let want = if a == b { 1.0 } else { 0.0 };
                worst = max2(worst, (h.m[a][b] - Complex64::new(want, 0.0)).norm());
            }
        }
    }
    (50, worst)
}

fn run_chart_round_trip(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("chart-round-trip");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        for _ in 0..20 {
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.1);
            let g = to_global(&config, &fp).unwrap();
            let back = from_global(&config, &g).unwrap();
            worst = max2(worst, (back.base.x - fp.base.x).abs());
            worst = max2(worst, (back.base.y - fp.base.y).abs());
            worst = max2(worst, (back.base.z - fp.base.z).abs());
            worst = max2(worst, (back.phi - fp.phi).abs());
            // patch transitions also invert
            for i in 1..=n {
                if let Ok(pp) = to_patch(&g, i, n) {
                    let gg = from_patch(&pp);
                    worst = max2(worst, (gg.z1 - g.z1).norm());
                    worst = max2(worst, (gg.z2 - g.z2).norm());
                }
            }
            points += 1;
        }
    }
    (points, worst)
}

fn run_moment_round_trip(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("moment-round-trip");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        for _ in 0..20 {
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.1);
            let sp = moment_map(&config, &fp).unwrap();
            let back = invert_moment(&config, &sp).unwrap();
            worst = max2(worst, (back.base.x - fp.base.x).abs());
            worst = max2(worst, (back.base.y - fp.base.y).abs());
            worst = max2(worst, (back.base.z - fp.base.z).abs());
            worst = max2(worst, (back.phi - fp.phi).abs());
            points += 1;
        }
    }
    (points, worst)
}

fn run_containment(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("moment-containment");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        let poly = build_polytope(&config);
        let count = if n == 2 { 10_000 } else { 2_000 };
        for _ in 0..count {
            let p = sample_off_axis(&config, &mut rng, 1e-4);
            let (mu1, mu2) = moment_actions(&config, &p).unwrap();
            let slack = poly.slack(mu1, mu2);
            worst = max2(worst, (-slack).max(0.0));
            points += 1;
        }
    }
    (points, worst)
}

fn run_boundary_pieces(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("boundary-piece-images");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [1usize, 2, 3] {
        let config = ctx.config_for(n);
        let poly = build_polytope(&config);
        for patch in 1..=n {
            for (axis, want) in [(AxisKind::Alpha, patch + 1), (AxisKind::Beta, patch)] {
                for _ in 0..5 {
                    let sample = Complex64::from_polar(
                        rng.gen_range(0.3..1.2),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    );
                    match boundary_map(&config, patch, axis, sample).unwrap() {
                        BoundaryImage::Piece { mu1, mu2, label } => {
                            if label != want {
                                worst = f64::INFINITY;
                            }
                            // residual against the supporting line of L_want
                            let hp = &poly.halfplanes[want - 1];
                            worst = max2(worst, hp.slack(mu1, mu2).abs());
                        }
                        BoundaryImage::Vertex { .. } => worst = f64::INFINITY,
                    }
                    points += 1;
                }
            }
        }
    }
    (points, worst)
}

fn run_n1_ricci(ctx: &VerifyContext) -> (usize, f64) {
    let config = ctx.config_for(1);
    let mut rng = ctx.rng("n1-patch-ricci");
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let q = [
            rng.gen_range(0.5..1.0),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(0.5..1.0),
            rng.gen_range(-0.5..0.5),
        ];
        let g = |q: &[f64; 4]| {
            let alpha = Complex64::new(q[0], q[1]);
            let beta = Complex64::new(q[2], q[3]);
            let global = from_patch(&PatchPoint { patch: 1, alpha, beta });
            let fp = from_global(&config, &global).unwrap();
            let h = metric_complex(&config, &fp, 1).unwrap();
            *h.realify().as_array()
        };
        let r = crate::metric::ricci_of(&g, &q, 1e-4).unwrap();
        worst = max2(worst, r.max_abs());
    }
    (3, worst)
}

fn run_ricci_flat(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("ricci-flatness");
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [2usize, 3] {
        let config = ctx.config_for(n);
        for _ in 0..10 {
            // second differences of Christoffel symbols lose accuracy fast
            // near the centers; keep the sweep at generic points
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.7);
            let r = ricci_numeric(&config, &fp, 1e-4).unwrap();
            worst = max2(worst, r.max_abs());
            points += 1;
        }
    }
    (points, worst)
}

fn run_phase_classification(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("phase-classification");
    let b = 1.1;
    let p = PhaseParameter::imaginary(b);
    let mut mismatches = 0usize;
    let mut points = 0;
    for _ in 0..2_000 {
        let alpha = Complex64::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..6.0));
        let beta = Complex64::from_polar(rng.gen_range(0.0..2.5), rng.gen_range(0.0..6.0));
        let diff = beta.norm_sqr() * (1.0 + alpha.norm_sqr()).powi(2) - b * b;
        let want = if diff.abs() <= 1e-12 {
            PhaseClassification::OnShell
        } else if diff > 0.0 {
            PhaseClassification::OutsideShell
        } else {
            PhaseClassification::InsideShell
        };
        if classify(&p, alpha, beta) != want {
            mismatches += 1;
        }
        points += 1;
    }
    if classify(&PhaseParameter::real(1.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        != PhaseClassification::RealKahler
    {
        mismatches += 1;
    }
    if classify(&PhaseParameter::zero(), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
        != PhaseClassification::Degenerate
    {
        mismatches += 1;
    }
    (points + 2, mismatches as f64)
}

fn run_phase_case1(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("phase-case1-real");
    let b = 0.9;
    let p = PhaseParameter::imaginary(b);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let alpha = Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.0));
        let beta = Complex64::from_polar(rng.gen_range(1.0..2.5), rng.gen_range(0.0..6.0));
        if classify(&p, alpha, beta) != PhaseClassification::OutsideShell {
            continue;
        }
        let psi = family_potential(&p, alpha, beta).unwrap();
        worst = max2(worst, psi.im.abs());
        let m = family_moment(&p, alpha, beta).unwrap();
        worst = max2(worst, m.mu1.im.abs());
        worst = max2(worst, m.mu2.im.abs());
    }
    (100, worst)
}

fn run_phase_case2(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("phase-case2-imaginary");
    let b = 1.4;
    let p = PhaseParameter::imaginary(b);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a_mod = rng.gen_range(0.0..1.0);
        let max_mod = 0.9 * b / (1.0 + a_mod * a_mod);
        let alpha = Complex64::new(a_mod, 0.0);
        let beta = Complex64::new(rng.gen_range(0.05..1.0) * max_mod, 0.0);
        let psi = family_potential(&p, alpha, beta).unwrap();
        worst = max2(worst, psi.re.abs());
        let m = family_moment(&p, alpha, beta).unwrap();
        worst = max2(worst, m.mu1.re.abs());
        worst = max2(worst, m.mu2.re.abs());
        let h = family_kahler_form(&p, alpha, beta).unwrap();
        worst = max2(worst, h.max_real_residual());
    }
    (100, worst)
}

fn run_phase_continuity(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("phase-shell-continuity");
    let b = 1.3;
    let p = PhaseParameter::imaginary(b);
    // distance measured through the vanishing sqrt factor; its square must
    // clear the on-shell tolerance
    let delta = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let alpha = Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.0));
        let w = 1.0 + alpha.norm_sqr();
        let t_out = (b * b + delta * delta) / (w * w);
        let t_in = (b * b - delta * delta) / (w * w);
        let m_out = family_moment(&p, alpha, Complex64::new(t_out.sqrt(), 0.0)).unwrap();
        let m_in = family_moment(&p, alpha, Complex64::new(t_in.sqrt(), 0.0)).unwrap();
        worst = max2(worst, (m_out.mu1 - m_in.mu1).norm());
        worst = max2(worst, (m_out.mu2 - m_in.mu2).norm());
    }
    (40, worst)
}

fn run_phase_image_real(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("phase-image-convex");
    let c = 1.1;
    let p = PhaseParameter::real(c);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let alpha = Complex64::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.0));
        let beta = Complex64::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.0));
        let m = family_moment(&p, alpha, beta).unwrap();
        let (m1, m2) = (m.mu1.re, m.mu2.re);
        worst = max2(worst, (-m2).max(0.0));
        worst = max2(worst, (0.5 * c - m2 - m1).max(0.0));
        worst = max2(worst, (-m2 - 2.0 * m1).max(0.0));
    }
    (10_000, worst)
}

fn run_phase_image_cone(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("phase-image-cone");
    let b = 0.9;
    let p = PhaseParameter::imaginary(b);
    let mut worst = 0.0f64;
    let mut points = 0;
    while points < 5_000 {
        let alpha = Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..6.0));
        let beta = Complex64::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.0));
        if classify(&p, alpha, beta) != PhaseClassification::OutsideShell {
            continue;
        }
        let m = family_moment(&p, alpha, beta).unwrap();
        let (m1, m2) = (m.mu1.re, m.mu2.re);
        worst = max2(worst, (-m2).max(0.0));
        worst = max2(worst, (-m2 - m1).max(0.0));
        worst = max2(worst, (-m2 - 2.0 * m1).max(0.0));
        points += 1;
    }
    (points, worst)
}

fn run_phase_middle(ctx: &VerifyContext) -> (usize, f64) {
    let mut rng = ctx.rng("phase-middle-implied");
    let mut violations = 0usize;
    for _ in 0..10_000 {
        let m2 = rng.gen_range(0.0..3.0);
        let m1 = rng.gen_range(-0.5 * m2..3.0);
        if m2 + m1 < 0.0 {
            violations += 1;
        }
    }
    (10_000, violations as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_names_unique_and_suites_valid() {
        let reg = registry();
        let names: HashSet<&str> = reg.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), reg.len(), "duplicate check names");
        for c in &reg {
            assert!(SUITES.contains(&c.suite), "unknown suite {}", c.suite);
            assert_ne!(c.suite, "all");
            assert!(!c.identity.is_empty());
        }
        // every non-aggregate suite is populated
        for s in SUITES.iter().filter(|s| **s != "all") {
            assert!(reg.iter().any(|c| c.suite == *s), "empty suite {s}");
        }
    }

    #[test]
    fn all_suite_covers_registry_once() {
        let ctx = VerifyContext::new(vec![0.0, 1.0], 7);
        let all = run_suite(&ctx, "all").unwrap();
        assert_eq!(all.len(), registry().len());
        let mut names: Vec<&str> = all.iter().map(|r| r.name.as_str()).collect();
        names.dedup();
        assert_eq!(names.len(), all.len());
        // sorted by name
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn unknown_suite_rejected() {
        let ctx = VerifyContext::new(vec![0.0], 1);
        assert!(run_suite(&ctx, "bogus").is_err());
    }

    #[test]
    fn harmonic_suite_passes_and_is_deterministic() {
        let ctx = VerifyContext::new(vec![0.0, 1.0], 42);
        let a = run_suite(&ctx, "harmonic").unwrap();
        assert!(a.iter().all(|r| r.pass), "{}", report_text(&a));
        let b = run_suite(&ctx, "harmonic").unwrap();
        assert_eq!(report_json(&a), report_json(&b));
    }

    #[test]
    fn reports_render() {
        let ctx = VerifyContext::new(vec![0.0, 1.0], 3);
        let results = run_suite(&ctx, "connection").unwrap();
        let text = report_text(&results);
        assert!(text.contains("gauge-jump-integer"));
        assert!(text.contains("pass") || text.contains("FAIL"));
        let json = report_json(&results);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(parsed.as_array().unwrap().len() >= 3);
    }
}
