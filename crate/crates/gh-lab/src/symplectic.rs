//! Action-angle coordinates: the moment map and its polytope image, the
//! metric in symplectic coordinates with its Hessian coefficient matrices,
//! the symplectic potential, the Kähler potential, and Legendre duality.

use crate::error::{GhError, GhResult};
use crate::field::{potential, radii, CenterConfig, RealPoint};
use crate::metric::FiberPoint;
use crate::numerics::{solve_monotone, Dual, RealScalar, Scalar, SymMat};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative cylindrical radius below which the angle theta2 and the Hessian
/// matrices degenerate.
const AXIS_EPS: f64 = 1e-12;

/// Action-angle coordinates (mu1, mu2, theta1, theta2).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SymplecticPoint {
    pub mu1: f64,
    pub mu2: f64,
    pub theta1: f64,
    pub theta2: f64,
}

impl SymplecticPoint {
    pub fn actions(mu1: f64, mu2: f64) -> Self {
        SymplecticPoint {
            mu1,
            mu2,
            theta1: 0.0,
            theta2: 0.0,
        }
    }
}

/// One inequality a*mu1 + b*mu2 + k >= 0 of the polytope.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub k: f64,
}

impl HalfPlane {
    pub fn slack(&self, mu1: f64, mu2: f64) -> f64 {
        self.a * mu1 + self.b * mu2 + self.k
    }
}

/// The image of the moment map: an unbounded convex region cut out by n+1
/// halfplanes l_0 .. l_n, with n vertices and boundary pieces L_1 .. L_{n+1}
/// (piece L_m lies on the line of l_{m-1}).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentPolytope {
    pub halfplanes: Vec<HalfPlane>,
    pub vertices: Vec<[f64; 2]>,
    centers: Vec<f64>,
}

impl MomentPolytope {
    /// Minimum slack over all halfplanes; negative outside.
    pub fn slack(&self, mu1: f64, mu2: f64) -> f64 {
        self.halfplanes
            .iter()
            .map(|h| h.slack(mu1, mu2))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, mu1: f64, mu2: f64, margin: f64) -> bool {
        self.slack(mu1, mu2) >= margin
    }

    /// Index m of the boundary piece L_m (1-based) containing the point, if
    /// it lies within `tol` of the boundary. L_1 and L_{n+1} are rays; the
    /// pieces in between are the segments joining consecutive vertices.
    pub fn boundary_piece(&self, mu1: f64, mu2: f64, tol: f64) -> Option<usize> {
        let n = self.centers.len();
        for m in 1..=n + 1 {
            if self.halfplanes[m - 1].slack(mu1, mu2).abs() > tol {
                continue;
            }
            // mu1 = -z decreases along the axis; piece L_m covers
            // z in [c_{m-1}, c_m] (with c_0 = -inf, c_{n+1} = +inf).
            let upper_ok = m == 1 || mu1 <= -self.centers[m - 2] + tol;
            let lower_ok = m == n + 1 || mu1 >= -self.centers[m - 1] - tol;
            if upper_ok && lower_ok {
                return Some(m);
            }
        }
        None
    }

    /// Vertex list as CSV with a header row.
    pub fn vertices_csv(&self) -> String {
        let mut out = String::from("mu1,mu2\n");
        for v in &self.vertices {
            out.push_str(&format!("{},{}\n", v[0], v[1]));
        }
        out
    }
}

/// The n+1 inequalities and n vertices of the moment image.
pub fn build_polytope(config: &CenterConfig) -> MomentPolytope {
    let n = config.n();
    let mut halfplanes = Vec::with_capacity(n + 1);
    let mut partial = 0.0;
    halfplanes.push(HalfPlane { a: 0.0, b: 1.0, k: 0.0 });
    for m in 1..=n {
        partial += config.centers()[m - 1];
        halfplanes.push(HalfPlane {
            a: m as f64,
            b: 1.0,
            k: partial,
        });
    }
    // Vertex m: intersection of l_{m-1} and l_m by a 2x2 solve.
    let mut vertices = Vec::with_capacity(n);
    for m in 1..=n {
        let (p, q) = (halfplanes[m - 1], halfplanes[m]);
        let det = p.a * q.b - q.a * p.b;
        let mu1 = (-p.k * q.b + q.k * p.b) / det;
        let mu2 = (-p.a * q.k + q.a * p.k) / det;
        vertices.push([mu1, mu2]);
    }
    MomentPolytope {
        halfplanes,
        vertices,
        centers: config.centers().to_vec(),
    }
}

/// Moment map: mu1 = -z, mu2 = 1/2 sum (r_j + z - c_j), theta1 = phi,
/// theta2 = arg(x + iy).
pub fn moment_map(config: &CenterConfig, fp: &FiberPoint) -> GhResult<SymplecticPoint> {
    let p = fp.base;
    let (rs, _) = radii(config, &p)?;
    let mu2 = rs
        .iter()
        .zip(config.centers())
        .map(|(r, c)| 0.5 * (r + p.z - c))
        .sum();
    Ok(SymplecticPoint {
        mu1: -p.z,
        mu2,
        theta1: fp.phi,
        theta2: p.y.atan2(p.x),
    })
}

/// Moment actions of a base point alone.
pub fn moment_actions(config: &CenterConfig, p: &RealPoint) -> GhResult<(f64, f64)> {
    let fp = FiberPoint {
        phi: 0.0,
        base: *p,
        chart: crate::charts::ChartId::South,
    };
    let sp = moment_map(config, &fp)?;
    Ok((sp.mu1, sp.mu2))
}

fn interior_check(config: &CenterConfig, mu1: f64, mu2: f64) -> GhResult<()> {
    let poly = build_polytope(config);
    if poly.slack(mu1, mu2) <= 0.0 {
        return Err(GhError::OutsidePolytope);
    }
    Ok(())
}

/// Cylindrical radius rho at fixed z = -mu1 from the action mu2, over any
/// scalar type. A float-level bracketed solve supplies the seed; a short
/// Newton iteration in the generic arithmetic transports derivatives, using
/// the closed-form slope d mu2 / d rho = V * rho.
pub fn solve_rho_generic<T: RealScalar>(centers: &[f64], mu1: T, mu2: T) -> GhResult<T> {
    let z = -mu1;
    let zv = z.value();
    let m2 = mu2.value();
    let f = |rho: f64| -> f64 {
        centers
            .iter()
            .map(|&c| {
                let d = zv - c;
                0.5 * ((rho * rho + d * d).sqrt() + d)
            })
            .sum::<f64>()
            - m2
    };
    let hi = 2.0 * m2 + centers.iter().map(|&c| (zv - c).abs()).sum::<f64>() + 1.0;
    let seed = solve_monotone(f, [0.0, hi], 1e-14)?;
    if seed <= 0.0 {
        return Err(GhError::OutsidePolytope);
    }
    let mut rho = T::from_f64(seed);
    let half = T::from_f64(0.5);
    for _ in 0..5 {
        let mut val = -mu2;
        let mut slope = T::zero();
        for &c in centers {
            let d = z - T::from_f64(c);
            let r = (rho * rho + d * d).sqrt();
            val = val + half * (r + d);
            slope = slope + half * rho / r;
        }
        rho = rho - val / slope;
    }
    Ok(rho)
}

/// Base point (rho, z) from the actions. n = 1 and n = 2 use the closed
/// forms; larger n goes through the bracketed solve.
pub fn invert_actions(config: &CenterConfig, mu1: f64, mu2: f64) -> GhResult<(f64, f64)> {
    interior_check(config, mu1, mu2)?;
    let z = -mu1;
    let cs = config.centers();
    let rho2 = match config.n() {
        1 => 4.0 * mu2 * (mu2 - (z - cs[0])),
        2 => {
            let d1 = z - cs[0];
            let d2 = z - cs[1];
            let denom = 2.0 * mu2 - d1 - d2;
            4.0 * mu2 * (mu2 - d1) * (mu2 - d2) * (mu2 - d1 - d2) / (denom * denom)
        }
        _ => {
            let r = solve_rho_generic::<f64>(cs, mu1, mu2)?;
            r * r
        }
    };
    if rho2 <= 0.0 {
        return Err(GhError::OutsidePolytope);
    }
    Ok((rho2.sqrt(), z))
}

/// Full inverse of the moment map, back to a South-chart fiber point.
pub fn invert_moment(config: &CenterConfig, sp: &SymplecticPoint) -> GhResult<FiberPoint> {
    let (rho, z) = invert_actions(config, sp.mu1, sp.mu2)?;
    Ok(FiberPoint {
        phi: sp.theta1,
        base: RealPoint::new(rho * sp.theta2.cos(), rho * sp.theta2.sin(), z),
        chart: crate::charts::ChartId::South,
    })
}

/// Hessian coefficient matrices (G_ij, G^ij) of the symplectic potential at
/// a base point, assembled from V, rho and the auxiliary sum
/// S = sum 1/(r_j (r_j - (z - c_j))).
pub fn g_matrices(config: &CenterConfig, p: &RealPoint) -> GhResult<(SymMat, SymMat)> {
    let (rs, rho) = radii(config, p)?;
    if rho < AXIS_EPS * config.scale() {
        return Err(GhError::Degenerate(
            "Hessian matrices blow up on the axis (rho = 0)".into(),
        ));
    }
    let v = potential(config, p)?;
    let s: f64 = rs
        .iter()
        .zip(config.centers())
        .map(|(r, c)| 1.0 / (r * (r - (p.z - c))))
        .sum();
    let rho2 = rho * rho;
    let g = SymMat::from_fn(2, |i, j| match (i, j) {
        (0, 0) => 2.0 * v + rho2 * s * s / (2.0 * v),
        (1, 1) => 2.0 / (v * rho2),
        _ => s / v,
    });
    let g_up = SymMat::from_fn(2, |i, j| match (i, j) {
        (0, 0) => 1.0 / (2.0 * v),
        (1, 1) => v * rho2 / 2.0 + (rho2 * s) * (rho2 * s) / (8.0 * v),
        _ => -rho2 * s / (4.0 * v),
    });
    Ok((g, g_up))
}

/// The metric in the frame (d mu1, d mu2, d theta1, d theta2):
/// g = 1/2 G_ij dmu_i dmu_j + 2 G^ij dtheta_i dtheta_j.
pub fn metric_symplectic(config: &CenterConfig, sp: &SymplecticPoint) -> GhResult<SymMat> {
    let fp = invert_moment(config, sp)?;
    let (g, g_up) = g_matrices(config, &fp.base)?;
    Ok(SymMat::from_fn(4, |i, j| {
        if i < 2 && j < 2 {
            0.5 * g.get(i, j)
        } else if i >= 2 && j >= 2 {
            2.0 * g_up.get(i - 2, j - 2)
        } else {
            0.0
        }
    }))
}

/// The linear constants left free by the potential integrations.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HessianPotentials {
    pub c1: f64,
    pub c2: f64,
}

impl HessianPotentials {
    pub fn zero() -> Self {
        HessianPotentials { c1: 0.0, c2: 0.0 }
    }

    /// Constants for which the Kähler potential equals the Legendre
    /// transform of the zero-constant symplectic potential: C1 = n, C2 = 2.
    /// For n = 1 this reproduces mu1 + 2 mu2; for n = 2 it is the
    /// C1 = C2 = 2 normalization.
    pub fn legendre_matched(n: usize) -> Self {
        HessianPotentials {
            c1: n as f64,
            c2: 2.0,
        }
    }
}

/// The symplectic potential over any scalar type:
/// psi = 1/2 sum [(r+d) log(r+d) + (r-d) log(r-d)] + C1 mu1 + C2 mu2,
/// with d_j = z - c_j and z = -mu1.
pub fn complex_potential_generic<T: RealScalar>(
    centers: &[f64],
    pot: &HessianPotentials,
    mu1: T,
    mu2: T,
) -> GhResult<T> {
    let rho = solve_rho_generic(centers, mu1, mu2)?;
    let z = -mu1;
    let half = T::from_f64(0.5);
    let mut psi = T::from_f64(pot.c1) * mu1 + T::from_f64(pot.c2) * mu2;
    for &c in centers {
        let d = z - T::from_f64(c);
        let r = (rho * rho + d * d).sqrt();
        psi = psi + half * ((r + d) * (r + d).ln() + (r - d) * (r - d).ln());
    }
    Ok(psi)
}

/// The symplectic potential psi(mu1, mu2).
pub fn complex_potential(
    config: &CenterConfig,
    pot: &HessianPotentials,
    sp: &SymplecticPoint,
) -> GhResult<f64> {
    interior_check(config, sp.mu1, sp.mu2)?;
    complex_potential_generic(config.centers(), pot, sp.mu1, sp.mu2)
}

/// The Kähler potential over any scalar type:
/// psi_dual = -sum c_j log(r_j - (z - c_j)) + C1 mu1 + C2 mu2.
pub fn kahler_potential_generic<T: RealScalar>(
    centers: &[f64],
    pot: &HessianPotentials,
    mu1: T,
    mu2: T,
) -> GhResult<T> {
    let rho = solve_rho_generic(centers, mu1, mu2)?;
    let z = -mu1;
    let mut psi = T::from_f64(pot.c1) * mu1 + T::from_f64(pot.c2) * mu2;
    for &c in centers {
        let d = z - T::from_f64(c);
        let r = (rho * rho + d * d).sqrt();
        psi = psi - T::from_f64(c) * (r - d).ln();
    }
    Ok(psi)
}

/// The Kähler potential psi_dual(mu1, mu2).
pub fn kahler_potential(
    config: &CenterConfig,
    pot: &HessianPotentials,
    sp: &SymplecticPoint,
) -> GhResult<f64> {
    interior_check(config, sp.mu1, sp.mu2)?;
    kahler_potential_generic(config.centers(), pot, sp.mu1, sp.mu2)
}

/// First partial derivatives of psi, via forward-mode duals through the
/// rho-solve.
pub fn complex_potential_gradient(
    config: &CenterConfig,
    pot: &HessianPotentials,
    sp: &SymplecticPoint,
) -> GhResult<[f64; 2]> {
    interior_check(config, sp.mu1, sp.mu2)?;
    let m1 = Dual::<f64, 2>::var(sp.mu1, 0);
    let m2 = Dual::<f64, 2>::var(sp.mu2, 1);
    Ok(complex_potential_generic(config.centers(), pot, m1, m2)?.d)
}

/// Hessian of psi via nested duals; independent of the linear constants.
pub fn complex_potential_hessian(
    config: &CenterConfig,
    pot: &HessianPotentials,
    sp: &SymplecticPoint,
) -> GhResult<SymMat> {
    interior_check(config, sp.mu1, sp.mu2)?;
    type D2 = Dual<Dual<f64, 2>, 2>;
    let m1: D2 = Dual::var(Dual::var(sp.mu1, 0), 0);
    let m2: D2 = Dual::var(Dual::var(sp.mu2, 1), 1);
    let out = complex_potential_generic(config.centers(), pot, m1, m2)?;
    let h = [
        [out.d[0].d[0], out.d[0].d[1]],
        [out.d[1].d[0], out.d[1].d[1]],
    ];
    Ok(SymMat::from_full(2, [
        [h[0][0], h[0][1], 0.0, 0.0],
        [h[1][0], h[1][1], 0.0, 0.0],
        [0.0; 4],
        [0.0; 4],
    ]))
}

/// Legendre transform mu . grad psi - psi of the symplectic potential. The
/// result is independent of the constants in `pot` and equals the Kähler
/// potential with the legendre_matched constants.
pub fn legendre_transform(
    config: &CenterConfig,
    pot: &HessianPotentials,
    sp: &SymplecticPoint,
) -> GhResult<f64> {
    let grad = complex_potential_gradient(config, pot, sp)?;
    let psi = complex_potential(config, pot, sp)?;
    Ok(sp.mu1 * grad[0] + sp.mu2 * grad[1] - psi)
}

/// Canonical cone coordinates for the resolved-cone potential.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CanonicalConeCoords {
    pub y1: f64,
    pub y2: f64,
}

impl CanonicalConeCoords {
    pub fn y(&self) -> f64 {
        self.y1 + self.y2
    }
}

fn cone_interior_check(b: f64, y: &CanonicalConeCoords) -> GhResult<()> {
    if y.y1 <= 0.0 || y.y2 <= 0.0 || y.y() <= b {
        return Err(GhError::OutsidePolytope);
    }
    Ok(())
}

/// Resolved-cone potential value; returns the real value and the magnitude
/// of the leftover imaginary part of the root-of-unity sum.
pub fn resolved_cone_potential(
    n: usize,
    b: f64,
    y: &CanonicalConeCoords,
) -> GhResult<(f64, f64)> {
    if n < 2 {
        return Err(GhError::InvalidInput("resolved cone needs n >= 2".into()));
    }
    cone_interior_check(b, y)?;
    let z = resolved_cone_complex::<Dual<Complex64, 1>>(
        n,
        b,
        Dual::constant(Complex64::new(y.y1, 0.0)),
        Dual::constant(Complex64::new(y.y2, 0.0)),
    )
    .val;
    Ok((z.re, z.im.abs()))
}

/// Complex-arithmetic evaluation of the resolved-cone potential, usable with
/// dual-over-complex scalars for derivatives in (y1, y2).
pub fn resolved_cone_complex<T: Scalar>(n: usize, b: f64, y1: T, y2: T) -> T {
    let y = y1 + y2;
    let one = T::one();
    let mut psi = y1 * (y1.ln() - one) + y2 * (y2.ln() - one) - y * (y.ln() - one);
    let inv_n = T::from_f64(1.0 / n as f64);
    for j in 0..n {
        let angle = std::f64::consts::TAU * j as f64 / n as f64;
        let xi = complex_constant::<T>(b * angle.cos(), b * angle.sin());
        let w = y - xi;
        psi = psi + inv_n * w * (w.ln() - one);
    }
    psi
}

/// Embeds a complex constant into a Scalar built over Complex64; for purely
/// real scalar types only the real part survives, so callers needing the
/// root-of-unity sum must use a complex-based T.
pub fn complex_constant<T: Scalar>(re: f64, im: f64) -> T {
    // i = sqrt(-1) through the Scalar interface: exp(ln(-1)/2) would be
    // branch-fragile, so build it as sqrt of from_f64(-1). For f64-based T
    // this is NaN, which is the desired loud failure for misuse.
    let i = T::from_f64(-1.0).sqrt();
    T::from_f64(re) + i * T::from_f64(im)
}

/// Hessian of the resolved-cone potential in (y1, y2), with the imaginary
/// residual of the entries.
pub fn resolved_cone_hessian(n: usize, b: f64, y: &CanonicalConeCoords) -> GhResult<(SymMat, f64)> {
    if n < 2 {
        return Err(GhError::InvalidInput("resolved cone needs n >= 2".into()));
    }
    cone_interior_check(b, y)?;
    let h = crate::numerics::hessian2_complex(
        |v| resolved_cone_complex(n, b, v[0], v[1]),
        &[y.y1, y.y2],
    );
    let imag = h
        .iter()
        .flatten()
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    let m = SymMat::from_full(2, [
        [h[0][0].re, h[0][1].re, 0.0, 0.0],
        [h[1][0].re, h[1][1].re, 0.0, 0.0],
        [0.0; 4],
        [0.0; 4],
    ]);
    Ok((m, imag))
}

/// The n = 2 closed-form potential on the resolved cone:
/// y1 ln y1 + y2 ln y2 - y ln y + 1/2 (y-b) ln(y-b) + 1/2 (y+b) ln(y+b).
pub fn resolved_cone_n2(b: f64, y: &CanonicalConeCoords) -> GhResult<f64> {
    cone_interior_check(b, y)?;
    let (y1, y2) = (y.y1, y.y2);
    let s = y1 + y2;
    Ok(y1 * y1.ln() + y2 * y2.ln() - s * s.ln()
        + 0.5 * (s - b) * (s - b).ln()
        + 0.5 * (s + b) * (s + b).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::ChartId;
    use crate::metric::{contract_form, kahler_form, metric_real, symplectic_jacobian};
    use crate::numerics::hessian2;
    use crate::sampling::{sample_fiber_point, sample_off_axis};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(cs: &[f64]) -> CenterConfig {
        CenterConfig::new(cs.to_vec()).unwrap()
    }

    fn sample_interior(
        config: &CenterConfig,
        rng: &mut impl Rng,
        margin: f64,
    ) -> SymplecticPoint {
        let p = sample_off_axis(config, rng, margin);
        let (mu1, mu2) = moment_actions(config, &p).unwrap();
        SymplecticPoint {
            mu1,
            mu2,
            theta1: rng.gen_range(0.0..std::f64::consts::TAU),
            theta2: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        }
    }

    #[test]
    fn moment_map_examples() {
        let sp = moment_map(&cfg(&[0.0]), &FiberPoint::south(0.0, 0.0, 0.0, -2.0)).unwrap();
        assert!((sp.mu1 - 2.0).abs() < 1e-15);
        assert!(sp.mu2.abs() < 1e-15);
        let sp = moment_map(&cfg(&[0.0]), &FiberPoint::south(0.0, 3.0, 4.0, 0.0)).unwrap();
        assert!(sp.mu1.abs() < 1e-15);
        assert!((sp.mu2 - 2.5).abs() < 1e-15);
        let sp = moment_map(&cfg(&[0.0, 1.0]), &FiberPoint::south(0.0, 0.0, 0.0, 2.0)).unwrap();
        assert!((sp.mu1 + 2.0).abs() < 1e-15);
        assert!((sp.mu2 - 3.0).abs() < 1e-15);
    }

    #[test]
    fn polytope_n1() {
        let poly = build_polytope(&cfg(&[0.0]));
        assert_eq!(poly.halfplanes.len(), 2);
        assert_eq!(poly.vertices, vec![[0.0, 0.0]]);
        assert!(poly.contains(1.0, 1.0, 0.0));
        assert!(!poly.contains(1.0, -0.1, 0.0));
    }

    #[test]
    fn polytope_n2() {
        let poly = build_polytope(&cfg(&[0.0, 1.0]));
        assert_eq!(poly.halfplanes.len(), 3);
        let h = &poly.halfplanes;
        assert_eq!((h[1].a, h[1].b, h[1].k), (1.0, 1.0, 0.0));
        assert_eq!((h[2].a, h[2].b, h[2].k), (2.0, 1.0, 1.0));
        assert_eq!(poly.vertices, vec![[0.0, 0.0], [-1.0, 1.0]]);
    }

    #[test]
    fn image_containment() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in [1usize, 2, 3] {
            let centers: Vec<f64> = (0..n).map(|i| 0.7 * i as f64).collect();
            let config = cfg(&centers);
            let poly = build_polytope(&config);
            for _ in 0..500 {
                let p = sample_off_axis(&config, &mut rng, 1e-3);
                let (m1, m2) = moment_actions(&config, &p).unwrap();
                assert!(poly.slack(m1, m2) >= -1e-9, "slack {}", poly.slack(m1, m2));
            }
        }
    }

    #[test]
    fn axis_segments_map_to_boundary() {
        let config = cfg(&[0.0, 1.0, 2.5]);
        let poly = build_polytope(&config);
        // below c_1: L_1, between centers: L_2, L_3, above c_n: L_4
        let cases = [(-1.0, 1), (0.5, 2), (1.7, 3), (3.0, 4)];
        for (z, want) in cases {
            let p = RealPoint::new(0.0, 0.0, z);
            let (m1, m2) = moment_actions(&config, &p).unwrap();
            assert_eq!(poly.boundary_piece(m1, m2, 1e-10), Some(want), "z = {z}");
        }
        // interior points are on no piece
        let (m1, m2) = moment_actions(&config, &RealPoint::new(1.0, 0.0, 0.5)).unwrap();
        assert_eq!(poly.boundary_piece(m1, m2, 1e-10), None);
    }

    #[test]
    fn invert_n1_closed_form() {
        let (rho, z) = invert_actions(&cfg(&[0.0]), 1.0, 1.0).unwrap();
        assert!((z + 1.0).abs() < 1e-15);
        assert!((rho * rho - 8.0).abs() < 1e-12);
    }

    #[test]
    fn invert_n2_matches_root_find() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let config = cfg(&[0.0, 1.0]);
        for _ in 0..30 {
            let sp = sample_interior(&config, &mut rng, 0.05);
            let (rho, _) = invert_actions(&config, sp.mu1, sp.mu2).unwrap();
            let rho_solve = solve_rho_generic::<f64>(config.centers(), sp.mu1, sp.mu2).unwrap();
            assert!((rho - rho_solve).abs() < 1e-10, "{rho} vs {rho_solve}");
        }
    }

    #[test]
    fn moment_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for n in [1usize, 2, 3] {
            let centers: Vec<f64> = (0..n).map(|i| 0.6 * i as f64).collect();
            let config = cfg(&centers);
            for _ in 0..20 {
                let sp = sample_interior(&config, &mut rng, 0.05);
                let fp = invert_moment(&config, &sp).unwrap();
                let back = moment_map(&config, &fp).unwrap();
                assert!((back.mu1 - sp.mu1).abs() < 1e-9);
                assert!((back.mu2 - sp.mu2).abs() < 1e-9);
                assert!((back.theta1 - sp.theta1).abs() < 1e-9);
                assert!((back.theta2 - sp.theta2).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn outside_polytope_rejected() {
        let config = cfg(&[0.0]);
        assert!(matches!(
            invert_actions(&config, 1.0, -0.5),
            Err(GhError::OutsidePolytope)
        ));
        assert!(matches!(
            invert_actions(&config, -2.0, 1.0),
            Err(GhError::OutsidePolytope)
        ));
    }

    #[test]
    fn g_matrices_inverse_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for n in [1usize, 2, 3] {
            let centers: Vec<f64> = (0..n).map(|i| 0.5 + 0.8 * i as f64).collect();
            let config = cfg(&centers);
            for _ in 0..30 {
                let p = sample_off_axis(&config, &mut rng, 0.05);
                let (g, g_up) = g_matrices(&config, &p).unwrap();
                let prod = g.mul(&g_up);
                for i in 0..2 {
                    for j in 0..2 {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((prod[i][j] - want).abs() < 1e-10);
                    }
                }
                assert!(g.is_positive_definite());
            }
        }
    }

    #[test]
    fn g22_closed_value() {
        // n=1: at (mu1, mu2) = (1, 1), G_22 = 1/mu2 + 1/(mu1+mu2) = 1.5
        let config = cfg(&[0.0]);
        let (rho, z) = invert_actions(&config, 1.0, 1.0).unwrap();
        let p = RealPoint::new(rho, 0.0, z);
        let (g, _) = g_matrices(&config, &p).unwrap();
        assert!((g.get(1, 1) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn axis_degenerate() {
        let config = cfg(&[0.0]);
        assert!(matches!(
            g_matrices(&config, &RealPoint::new(0.0, 0.0, -1.0)),
            Err(GhError::Degenerate(_))
        ));
    }

    #[test]
    fn bridge_identity() {
        // sum (r_j + z - c_j)/r_j = rho^2 sum 1/(r_j (r_j - (z - c_j)))
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let config = cfg(&[-0.3, 0.4, 1.2]);
        for _ in 0..50 {
            let p = sample_off_axis(&config, &mut rng, 0.05);
            let (rs, rho) = radii(&config, &p).unwrap();
            let lhs: f64 = rs
                .iter()
                .zip(config.centers())
                .map(|(r, c)| (r + p.z - c) / r)
                .sum();
            let rhs: f64 = rho
                * rho
                * rs
                    .iter()
                    .zip(config.centers())
                    .map(|(r, c)| 1.0 / (r * (r - (p.z - c))))
                    .sum::<f64>();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn hessian_matches_g() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for n in [1usize, 2, 3] {
            let centers: Vec<f64> = (0..n).map(|i| 0.9 * i as f64 - 0.2).collect();
            let config = cfg(&centers);
            for _ in 0..15 {
                let sp = sample_interior(&config, &mut rng, 0.1);
                let h = complex_potential_hessian(&config, &HessianPotentials::zero(), &sp)
                    .unwrap();
                let fp = invert_moment(&config, &sp).unwrap();
                let (g, _) = g_matrices(&config, &fp.base).unwrap();
                assert!(
                    h.max_abs_diff(&g) < 1e-8,
                    "n={n} Hess-G diff {}",
                    h.max_abs_diff(&g)
                );
            }
        }
    }

    #[test]
    fn hessian_ignores_linear_constants() {
        let config = cfg(&[0.0, 1.0]);
        let sp = SymplecticPoint::actions(0.3, 1.1);
        let a = complex_potential_hessian(&config, &HessianPotentials::zero(), &sp).unwrap();
        let shifted = HessianPotentials { c1: 5.0, c2: -3.0 };
        let b = complex_potential_hessian(&config, &shifted, &sp).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn first_partials_closed_form() {
        // d psi / d mu1 = sum log(r_j - (z-c_j)) + n, d psi / d mu2 = 2 log rho + 2
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let config = cfg(&[0.0, 0.7]);
        for _ in 0..20 {
            let sp = sample_interior(&config, &mut rng, 0.1);
            let g =
                complex_potential_gradient(&config, &HessianPotentials::zero(), &sp).unwrap();
            let fp = invert_moment(&config, &sp).unwrap();
            let (rs, rho) = radii(&config, &fp.base).unwrap();
            let want1: f64 = rs
                .iter()
                .zip(config.centers())
                .map(|(r, c)| (r - (fp.base.z - c)).ln())
                .sum::<f64>()
                + config.n() as f64;
            let want2 = 2.0 * rho.ln() + 2.0;
            assert!((g[0] - want1).abs() < 1e-9, "{} vs {}", g[0], want1);
            assert!((g[1] - want2).abs() < 1e-9, "{} vs {}", g[1], want2);
        }
    }

    #[test]
    fn psi_n1_closed_form() {
        // n=1, zero constants at (1,1): psi differs from
        // mu2 log mu2 + (mu1+mu2) log(mu1+mu2) by the linear term
        // log 2 * (mu1 + 2 mu2).
        let config = cfg(&[0.0]);
        let sp = SymplecticPoint::actions(1.0, 1.0);
        let psi = complex_potential(&config, &HessianPotentials::zero(), &sp).unwrap();
        let closed = 1.0f64 * 0.0 + 2.0 * 2.0f64.ln(); // mu2 ln mu2 = 0, 2 ln 2
        let linear = 2.0f64.ln() * (sp.mu1 + 2.0 * sp.mu2);
        assert!((psi - closed - linear).abs() < 1e-12);
    }

    #[test]
    fn legendre_equals_kahler_potential() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for centers in [vec![0.0], vec![-0.5, 0.5], vec![0.0, 0.8, 2.0]] {
            let config = cfg(&centers);
            let matched = HessianPotentials::legendre_matched(config.n());
            for _ in 0..10 {
                let sp = sample_interior(&config, &mut rng, 0.1);
                let lhs =
                    legendre_transform(&config, &HessianPotentials::zero(), &sp).unwrap();
                let rhs = kahler_potential(&config, &matched, &sp).unwrap();
                assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn legendre_independent_of_constants() {
        let config = cfg(&[0.0, 1.0]);
        let sp = SymplecticPoint::actions(0.4, 0.9);
        let a = legendre_transform(&config, &HessianPotentials::zero(), &sp).unwrap();
        let b = legendre_transform(&config, &HessianPotentials { c1: 2.0, c2: 7.0 }, &sp)
            .unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn kahler_potential_n1_value() {
        // c = (0): psi_dual = C1 mu1 + C2 mu2; matched constants give
        // mu1 + 2 mu2 = 3 at (1,1)
        let config = cfg(&[0.0]);
        let sp = SymplecticPoint::actions(1.0, 1.0);
        let v = kahler_potential(&config, &HessianPotentials::legendre_matched(1), &sp).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn symplectic_metric_pullback_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for n in [1usize, 2, 3] {
            let centers: Vec<f64> = (0..n).map(|i| 0.75 * i as f64).collect();
            let config = cfg(&centers);
            for _ in 0..10 {
                let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.15);
                let sp = moment_map(&config, &fp).unwrap();
                let g_sym = metric_symplectic(&config, &sp).unwrap();
                let jac = symplectic_jacobian(&config, &fp).unwrap();
                let pulled = g_sym.congruence(&jac);
                let g_real = metric_real(&config, &fp).unwrap();
                assert!(
                    pulled.max_abs_diff(&g_real) < 1e-8,
                    "n={n} pullback diff {}",
                    pulled.max_abs_diff(&g_real)
                );
            }
        }
    }

    #[test]
    fn symplectic_form_is_canonical() {
        // omega pulled to (mu, theta) coordinates equals
        // dmu1 ^ dtheta1 + dmu2 ^ dtheta2 exactly.
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let config = cfg(&[0.0, 1.0]);
        for _ in 0..10 {
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.15);
            let jac = symplectic_jacobian(&config, &fp).unwrap();
            let w = kahler_form(&config, &fp).unwrap();
            let mut canonical = [[0.0; 4]; 4];
            canonical[0][2] = 1.0;
            canonical[2][0] = -1.0;
            canonical[1][3] = 1.0;
            canonical[3][1] = -1.0;
            // pull canonical back through jac and compare with w
            let mut pulled = [[0.0; 4]; 4];
            for a in 0..4 {
                for b in 0..4 {
                    let mut s = 0.0;
                    for i in 0..4 {
                        for j in 0..4 {
                            s += jac[i][a] * canonical[i][j] * jac[j][b];
                        }
                    }
                    pulled[a][b] = s;
                }
            }
            for a in 0..4 {
                for b in 0..4 {
                    assert!(
                        (pulled[a][b] - w[a][b]).abs() < 1e-10,
                        "omega[{a}][{b}]: {} vs {}",
                        pulled[a][b],
                        w[a][b]
                    );
                }
            }
        }
    }

    #[test]
    fn moment_condition() {
        // d mu_i = -i_{X_i} omega for X_1 = d/dphi, X_2 = -y d/dx + x d/dy
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        let config = cfg(&[0.0, 0.9]);
        for _ in 0..15 {
            let fp = sample_fiber_point(&config, ChartId::South, &mut rng, 0.15);
            let w = kahler_form(&config, &fp).unwrap();
            let jac = symplectic_jacobian(&config, &fp).unwrap();
            let x1 = [1.0, 0.0, 0.0, 0.0];
            let x2 = [0.0, -fp.base.y, fp.base.x, 0.0];
            for (row, xv) in [(0usize, x1), (1usize, x2)] {
                let ix = contract_form(&w, &xv);
                for b in 0..4 {
                    assert!(
                        (jac[row][b] + ix[b]).abs() < 1e-9,
                        "dmu{} slot {b}: {} vs {}",
                        row + 1,
                        jac[row][b],
                        -ix[b]
                    );
                }
            }
        }
    }

    #[test]
    fn cone_hessians_agree_n2() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        let b = 0.6;
        for _ in 0..20 {
            let y = CanonicalConeCoords {
                y1: rng.gen_range(0.2..3.0),
                y2: rng.gen_range(0.2..3.0),
            };
            if y.y() <= b + 0.1 {
                continue;
            }
            let (h82, imag) = resolved_cone_hessian(2, b, &y).unwrap();
            assert!(imag < 1e-10);
            let h81 = hessian2(
                |v| {
                    let one = Dual::constant(Dual::constant(1.0));
                    let half = Dual::constant(Dual::constant(0.5));
                    let bb = Dual::constant(Dual::constant(b));
                    let s = v[0] + v[1];
                    v[0] * v[0].ln() + v[1] * v[1].ln() - s * s.ln()
                        + half * (s - bb) * (s - bb).ln()
                        + half * (s + bb) * (s + bb).ln()
                        + (one - one)
                },
                &[y.y1, y.y2],
            );
            let h81 = SymMat::from_full(2, [
                [h81[0][0], h81[0][1], 0.0, 0.0],
                [h81[1][0], h81[1][1], 0.0, 0.0],
                [0.0; 4],
                [0.0; 4],
            ]);
            assert!(
                h82.max_abs_diff(&h81) < 1e-8,
                "Hessian diff {}",
                h82.max_abs_diff(&h81)
            );
        }
    }

    #[test]
    fn cone_values_differ_affinely_n2() {
        // psi_82 - psi_81 = -(y1 + y2): the linear remainder of pulling the
        // "-1" factors out of the logarithmic terms.
        let y = CanonicalConeCoords { y1: 1.3, y2: 0.9 };
        let b = 0.5;
        let (v82, _) = resolved_cone_potential(2, b, &y).unwrap();
        let v81 = resolved_cone_n2(b, &y).unwrap();
        assert!((v82 - v81 + y.y()).abs() < 1e-12, "{}", v82 - v81 + y.y());
    }

    #[test]
    fn cone_imaginary_residual_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for n in [2usize, 3, 4] {
            for _ in 0..20 {
                let y = CanonicalConeCoords {
                    y1: rng.gen_range(0.5..3.0),
                    y2: rng.gen_range(0.5..3.0),
                };
                let (_, imag) = resolved_cone_potential(n, 0.4, &y).unwrap();
                assert!(imag < 1e-10, "n={n} imag {imag}");
            }
        }
    }

    #[test]
    fn cone_b_zero_collapses() {
        // at b = 0 every root-of-unity term equals y(ln y - 1), cancelling
        // the -y(ln y - 1) term: psi = sum y_i (ln y_i - 1)
        let y = CanonicalConeCoords { y1: 0.8, y2: 1.7 };
        let (v, imag) = resolved_cone_potential(3, 0.0, &y).unwrap();
        let want = y.y1 * (y.y1.ln() - 1.0) + y.y2 * (y.y2.ln() - 1.0);
        assert!(imag < 1e-12);
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn cone_boundary_rejected() {
        let y = CanonicalConeCoords { y1: 0.2, y2: 0.2 };
        assert!(resolved_cone_potential(2, 0.5, &y).is_err());
    }
}
