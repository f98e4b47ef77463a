//! The four-dimensional metric in real coordinates (phi, x, y, z), the
//! Kähler form, the triple of compatible complex structures, and numerical
//! curvature.

use crate::charts::{connection_generic, ChartId};
use crate::error::{GhError, GhResult};
use crate::field::{nearest_center_distance, potential_generic, CenterConfig, RealPoint};
use crate::numerics::{invert, mat_mul, Dual, Mat4, RealScalar, Scalar, SymMat};
use serde::{Deserialize, Serialize};

/// A point of the total space: fiber angle plus base point, tagged with the
/// chart whose gauge the connection is taken in.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FiberPoint {
    pub phi: f64,
    pub base: RealPoint,
    pub chart: ChartId,
}

impl FiberPoint {
    pub fn south(phi: f64, x: f64, y: f64, z: f64) -> Self {
        FiberPoint {
            phi: phi.rem_euclid(std::f64::consts::TAU),
            base: RealPoint::new(x, y, z),
            chart: ChartId::South,
        }
    }
}

/// Which of the three compatible complex structures; J2 and J3 are the
/// cyclic relabelings (x,y,z) -> (y,z,x) -> (z,x,y) of J1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexStructureLabel {
    J1,
    J2,
    J3,
}

impl ComplexStructureLabel {
    /// Coordinate slots (sigma1, sigma2, sigma3) in the frame order
    /// (phi, x, y, z) = (0, 1, 2, 3).
    pub fn cycle(self) -> [usize; 3] {
        match self {
            ComplexStructureLabel::J1 => [1, 2, 3],
            ComplexStructureLabel::J2 => [2, 3, 1],
            ComplexStructureLabel::J3 => [3, 1, 2],
        }
    }
}

/// Metric components over any scalar type, in the coordinate frame
/// (dphi, dx, dy, dz): g = (1/V)(dphi + alpha)^2 + V (dx^2 + dy^2 + dz^2).
pub fn metric_components_generic<T: RealScalar>(
    centers: &[f64],
    chart: ChartId,
    x: T,
    y: T,
    z: T,
) -> [[T; 4]; 4] {
    let v = potential_generic(centers, x, y, z);
    let a = connection_generic(centers, chart, x, y, z);
    let inv_v = T::one() / v;
    let mut g = [[T::zero(); 4]; 4];
    g[0][0] = inv_v;
    for i in 0..3 {
        g[0][i + 1] = a[i] * inv_v;
        g[i + 1][0] = g[0][i + 1];
        for j in 0..3 {
            g[i + 1][j + 1] = a[i] * a[j] * inv_v;
        }
        g[i + 1][i + 1] = g[i + 1][i + 1] + v;
    }
    g
}

/// The metric at a fiber point, as a symmetric 4x4 matrix.
pub fn metric_real(config: &CenterConfig, fp: &FiberPoint) -> GhResult<SymMat> {
    fp.chart.check(config, &fp.base)?;
    let p = fp.base;
    let g = metric_components_generic(config.centers(), fp.chart, p.x, p.y, p.z);
    Ok(SymMat::from_full(4, g))
}

/// Kähler form of the structure `label`, as a full antisymmetric matrix in
/// the frame (dphi, dx, dy, dz): omega = (dphi + alpha) ∧ dsigma3
/// + V dsigma1 ∧ dsigma2.
pub fn kahler_form_labeled(
    config: &CenterConfig,
    fp: &FiberPoint,
    label: ComplexStructureLabel,
) -> GhResult<Mat4> {
    fp.chart.check(config, &fp.base)?;
    let p = fp.base;
    let v = potential_generic(config.centers(), p.x, p.y, p.z);
    let a = connection_generic(config.centers(), fp.chart, p.x, p.y, p.z);
    let [s1, s2, s3] = label.cycle();
    let mut w = [[0.0; 4]; 4];
    let mut set = |a_idx: usize, b_idx: usize, val: f64| {
        w[a_idx][b_idx] += val;
        w[b_idx][a_idx] -= val;
    };
    set(0, s3, 1.0);
    for k in 0..3 {
        if k + 1 != s3 {
            set(k + 1, s3, a[k]);
        }
    }
    set(s1, s2, v);
    Ok(w)
}

/// The distinguished Kähler form (label J1): (dphi + alpha) ∧ dz + V dx ∧ dy.
pub fn kahler_form(config: &CenterConfig, fp: &FiberPoint) -> GhResult<Mat4> {
    kahler_form_labeled(config, fp, ComplexStructureLabel::J1)
}

/// Contraction i_X omega of an antisymmetric matrix with a tangent vector.
pub fn contract_form(w: &Mat4, x: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (b, slot) in out.iter_mut().enumerate() {
        for a in 0..4 {
            *slot += x[a] * w[a][b];
        }
    }
    out
}

/// The complex structure J on tangent vectors, in the coordinate frame
/// (d/dphi, d/dx, d/dy, d/dz).
pub fn complex_structure(
    config: &CenterConfig,
    fp: &FiberPoint,
    label: ComplexStructureLabel,
) -> GhResult<Mat4> {
    fp.chart.check(config, &fp.base)?;
    let p = fp.base;
    let v = potential_generic(config.centers(), p.x, p.y, p.z);
    let a = connection_generic(config.centers(), fp.chart, p.x, p.y, p.z);
    let sv = v.sqrt();

    // Orthonormal frame vectors as coordinate columns of E:
    // e_0 = sqrt(V) d/dphi, e_k = (d/dx_k - alpha_k d/dphi)/sqrt(V).
    let mut e = [[0.0; 4]; 4];
    e[0][0] = sv;
    for k in 0..3 {
        e[0][k + 1] = -a[k] / sv;
        e[k + 1][k + 1] = 1.0 / sv;
    }

    // Frame action: J e_0 = e_{s3}, J e_{s3} = -e_0, J e_{s1} = e_{s2},
    // J e_{s2} = -e_{s1}.
    let [s1, s2, s3] = label.cycle();
    let mut jf = [[0.0; 4]; 4];
    jf[s3][0] = 1.0;
    jf[0][s3] = -1.0;
    jf[s2][s1] = 1.0;
    jf[s1][s2] = -1.0;

    let e_inv = invert(4, &e)?;
    Ok(mat_mul(4, &e, &mat_mul(4, &jf, &e_inv)))
}

/// Pullback J* eta = eta ∘ J of a (possibly complex) 1-form.
pub fn pullback_form(j: &Mat4, eta: &[num_complex::Complex64; 4]) -> [num_complex::Complex64; 4] {
    let mut out = [num_complex::Complex64::new(0.0, 0.0); 4];
    for (b, slot) in out.iter_mut().enumerate() {
        for a in 0..4 {
            *slot += eta[a] * j[a][b];
        }
    }
    out
}

/// Numerical Ricci tensor of an arbitrary metric field by nested central
/// differences; `g` maps (phi, x, y, z) to the full metric matrix.
pub fn ricci_of(g: &dyn Fn(&[f64; 4]) -> Mat4, p: &[f64; 4], step: f64) -> GhResult<SymMat> {
    if step <= 0.0 {
        return Err(GhError::InvalidInput("step must be positive".into()));
    }
    let christoffel = |q: &[f64; 4]| -> GhResult<[[[f64; 4]; 4]; 4]> {
        let g0 = g(q);
        let ginv = invert(4, &g0)?;
        // dg[c][a][b] = d g_ab / d x_c
        let mut dg = [[[0.0; 4]; 4]; 4];
        for (c, slot) in dg.iter_mut().enumerate() {
            let mut qp = *q;
            let mut qm = *q;
            qp[c] += step;
            qm[c] -= step;
            let gp = g(&qp);
            let gm = g(&qm);
            for a in 0..4 {
                for b in 0..4 {
                    slot[a][b] = (gp[a][b] - gm[a][b]) / (2.0 * step);
                }
            }
        }
        let mut gamma = [[[0.0; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let mut s = 0.0;
                    for d in 0..4 {
                        s += ginv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                    }
                    gamma[a][b][c] = 0.5 * s;
                }
            }
        }
        Ok(gamma)
    };

    let gamma0 = christoffel(p)?;
    // dgamma[c][a][b][d] = d Gamma^a_bd / d x_c
    let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
    for (c, slot) in dgamma.iter_mut().enumerate() {
        let mut qp = *p;
        let mut qm = *p;
        qp[c] += step;
        qm[c] -= step;
        let gp = christoffel(&qp)?;
        let gm = christoffel(&qm)?;
        for a in 0..4 {
            for b in 0..4 {
                for d in 0..4 {
                    slot[a][b][d] = (gp[a][b][d] - gm[a][b][d]) / (2.0 * step);
                }
            }
        }
    }

    let mut ricci = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut s = 0.0;
            for c in 0..4 {
                s += dgamma[c][c][a][b] - dgamma[a][c][c][b];
                for d in 0..4 {
                    s += gamma0[c][c][d] * gamma0[d][a][b] - gamma0[c][a][d] * gamma0[d][c][b];
                }
            }
            ricci[a][b] = s;
        }
    }
    Ok(SymMat::from_full(4, ricci))
}

/// Numerical Ricci tensor of the instanton metric at a fiber point.
///
/// Requires a margin of at least 10 * step from the singular rays so the
/// stencil stays admissible.
pub fn ricci_numeric(config: &CenterConfig, fp: &FiberPoint, step: f64) -> GhResult<SymMat> {
    fp.chart.check(config, &fp.base)?;
    let margin = 10.0 * step;
    if fp.base.rho() < margin || nearest_center_distance(config, &fp.base) < margin {
        return Err(GhError::Inadmissible(format!(
            "need margin >= {margin} from the axis and centers for the curvature stencil"
        )));
    }
    let centers = config.centers().to_vec();
    let chart = fp.chart;
    let g = move |q: &[f64; 4]| metric_components_generic(&centers, chart, q[1], q[2], q[3]);
    ricci_of(&g, &[fp.phi, fp.base.x, fp.base.y, fp.base.z], step)
}

/// Jacobian d(mu1, mu2, theta1, theta2)/d(phi, x, y, z) at a fiber point,
/// via forward-mode duals. Row i is the differential of the i-th symplectic
/// coordinate.
pub fn symplectic_jacobian(config: &CenterConfig, fp: &FiberPoint) -> GhResult<Mat4> {
    fp.chart.check(config, &fp.base)?;
    let phi = Dual::<f64, 4>::var(fp.phi, 0);
    let x = Dual::<f64, 4>::var(fp.base.x, 1);
    let y = Dual::<f64, 4>::var(fp.base.y, 2);
    let z = Dual::<f64, 4>::var(fp.base.z, 3);
    let mut mu2 = Dual::<f64, 4>::constant(0.0);
    let half = Dual::<f64, 4>::from_f64(0.5);
    for &c in config.centers() {
        let dz = z - Dual::from_f64(c);
        let r = (x * x + y * y + dz * dz).sqrt();
        mu2 = mu2 + half * (r + dz);
    }
    let mu1 = -z;
    let theta1 = phi;
    let theta2 = y.atan2(x);
    Ok([mu1.d, mu2.d, theta1.d, theta2.d])
}
