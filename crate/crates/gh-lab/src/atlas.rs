//! Holomorphic coordinates: the global pair (z1, z2), the n-patch
//! (alpha_i, beta_i) atlas of the crepant resolution, closed-form inversions
//! for one and two centers, the metric in complex coordinates, the torus
//! action, and the boundary images of the patch axes.

use crate::charts::ChartId;
use crate::error::{GhError, GhResult};
use crate::field::{potential, radii, CenterConfig, RealPoint};
use crate::metric::FiberPoint;
use crate::numerics::{solve_monotone, HermitianForm2};
use crate::symplectic::{build_polytope, moment_actions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The global coordinates z1 = prod (r_j - (z - c_j))^{1/2} e^{i theta1},
/// z2 = x + i y.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GlobalComplex {
    pub z1: Complex64,
    pub z2: Complex64,
}

/// Affine coordinates on patch i (1-based) of the atlas. The global pair is
/// the monomial pair z1 = alpha^{i-1} beta^i, z2 = alpha beta.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PatchPoint {
    pub patch: usize,
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// South-chart holomorphic coordinates of a fiber point.
pub fn to_global(config: &CenterConfig, fp: &FiberPoint) -> GhResult<GlobalComplex> {
    ChartId::South.check(config, &fp.base)?;
    let p = fp.base;
    let (rs, _) = radii(config, &p)?;
    let mut modulus = 1.0;
    for (r, c) in rs.iter().zip(config.centers()) {
        modulus *= (r - (p.z - c)).sqrt();
    }
    Ok(GlobalComplex {
        z1: Complex64::from_polar(modulus, fp.phi),
        z2: Complex64::new(p.x, p.y),
    })
}

/// Closed-form inverse for a single center at the origin:
/// rho^2 = |z2|^2, z = 1/2 (|z1|^{-2} |z2|^2 - |z1|^2).
pub fn from_global_n1(z1: Complex64, z2: Complex64) -> GhResult<FiberPoint> {
    let a = z1.norm_sqr();
    if a == 0.0 {
        return Err(GhError::Inadmissible("z1 = 0 is on the removed locus".into()));
    }
    let b = z2.norm_sqr();
    let z = 0.5 * (b / a - a);
    Ok(FiberPoint {
        phi: z1.arg().rem_euclid(std::f64::consts::TAU),
        base: RealPoint::new(z2.re, z2.im, z),
        chart: ChartId::South,
    })
}

/// Closed-form inverse for two centers, via the resolved square root
/// R = (|z1|^2 + |z2|^2)^2 + (c2 - c1)^2 |z1|^2 and the branch with
/// z -> a number < c1 as z2 -> 0.
pub fn from_global_n2(config: &CenterConfig, z1: Complex64, z2: Complex64) -> GhResult<FiberPoint> {
    if config.n() != 2 {
        return Err(GhError::InvalidInput("from_global_n2 needs n = 2".into()));
    }
    let a = z1.norm_sqr();
    if a == 0.0 {
        return Err(GhError::Inadmissible("z1 = 0 is on the removed locus".into()));
    }
    let (c1, c2) = (config.centers()[0], config.centers()[1]);
    let c = c2 - c1;
    let b = z2.norm_sqr();
    let sum = a + b;
    let r_aux = (sum * sum + c * c * a).sqrt();
    let z = c1 + 0.5 * c - (a - b) / (2.0 * a.sqrt() * sum) * r_aux;
    Ok(FiberPoint {
        phi: z1.arg().rem_euclid(std::f64::consts::TAU),
        base: RealPoint::new(z2.re, z2.im, z),
        chart: ChartId::South,
    })
}

/// Radius r_1 of the two-center inverse, from the same closed form.
pub fn n2_radius_closed(config: &CenterConfig, z1: Complex64, z2: Complex64) -> GhResult<f64> {
    let (c1, c2) = (config.centers()[0], config.centers()[1]);
    let a = z1.norm_sqr();
    let b = z2.norm_sqr();
    let sum = a + b;
    let r_aux = (sum * sum + (c2 - c1) * (c2 - c1) * a).sqrt();
    Ok((c1 - c2) * (a - b) / (2.0 * sum) + r_aux / (2.0 * a.sqrt()))
}

/// V of the two-center inverse in terms of (z1, z2) alone.
pub fn n2_potential_closed(config: &CenterConfig, z1: Complex64, z2: Complex64) -> GhResult<f64> {
    let c = config.centers()[1] - config.centers()[0];
    let a = z1.norm_sqr();
    let b = z2.norm_sqr();
    let sum = a + b;
    let r_aux = (sum * sum + c * c * a).sqrt();
    Ok(2.0 * a.sqrt() * sum * sum * r_aux / (sum.powi(4) + 4.0 * a * a * b * c * c))
}

/// General inverse: rho = |z2| and z solved from
/// prod (r_j - (z - c_j)) = |z1|^2, which is strictly decreasing in z.
pub fn from_global(config: &CenterConfig, g: &GlobalComplex) -> GhResult<FiberPoint> {
    match config.n() {
        1 => {
            let c1 = config.centers()[0];
            let fp = from_global_n1(g.z1, g.z2)?;
            Ok(FiberPoint {
                base: RealPoint::new(fp.base.x, fp.base.y, fp.base.z + c1),
                ..fp
            })
        }
        2 => from_global_n2(config, g.z1, g.z2),
        _ => {
            let a = g.z1.norm_sqr();
            if a == 0.0 {
                return Err(GhError::Inadmissible("z1 = 0 is on the removed locus".into()));
            }
            let rho2 = g.z2.norm_sqr();
            let target = 0.5 * a.ln();
            let f = |z: f64| -> f64 {
                let mut s = 0.0;
                for &c in config.centers() {
                    let d = z - c;
                    let r = (rho2 + d * d).sqrt();
                    s += 0.5 * (r - d).ln();
                }
                s - target
            };
            // f decreases in z; expand the bracket until it straddles zero
            let mut w = config.scale() + 1.0;
            let mut lo = config.c_first() - w;
            let mut hi = config.c_last() + w;
            for _ in 0..200 {
                if f(lo) > 0.0 && f(hi) < 0.0 {
                    break;
                }
                w *= 2.0;
                if f(lo) <= 0.0 {
                    lo -= w;
                }
                if f(hi) >= 0.0 {
                    hi += w;
                }
            }
            let z = solve_monotone(f, [lo, hi], 1e-14)?;
            Ok(FiberPoint {
                phi: g.z1.arg().rem_euclid(std::f64::consts::TAU),
                base: RealPoint::new(g.z2.re, g.z2.im, z),
                chart: ChartId::South,
            })
        }
    }
}

/// Patch-i coordinates, chaining alpha_{i+1} = alpha_i^2 beta_i,
/// beta_{i+1} = 1/alpha_i one step at a time.
pub fn to_patch(g: &GlobalComplex, i: usize, n: usize) -> GhResult<PatchPoint> {
    if i == 0 || i > n {
        return Err(GhError::InvalidInput(format!("patch index {i} out of 1..={n}")));
    }
    if g.z1.norm() == 0.0 {
        return Err(GhError::SingularTransition(1));
    }
    let mut alpha = g.z2 / g.z1;
    let mut beta = g.z1;
    for step in 1..i {
        if alpha.norm() == 0.0 {
            return Err(GhError::SingularTransition(step + 1));
        }
        let next_alpha = alpha * alpha * beta;
        let next_beta = 1.0 / alpha;
        alpha = next_alpha;
        beta = next_beta;
    }
    Ok(PatchPoint { patch: i, alpha, beta })
}

/// Global coordinates of a patch point, via the exact monomials
/// z1 = alpha^{i-1} beta^i, z2 = alpha beta.
pub fn from_patch(p: &PatchPoint) -> GlobalComplex {
    GlobalComplex {
        z1: p.alpha.powu(p.patch as u32 - 1) * p.beta.powu(p.patch as u32),
        z2: p.alpha * p.beta,
    }
}

/// One forward transition of the atlas gluing.
pub fn transition(p: &PatchPoint) -> GhResult<PatchPoint> {
    if p.alpha.norm() == 0.0 {
        return Err(GhError::SingularTransition(p.patch + 1));
    }
    Ok(PatchPoint {
        patch: p.patch + 1,
        alpha: p.alpha * p.alpha * p.beta,
        beta: 1.0 / p.alpha,
    })
}

/// The torus action (e^{it1}, e^{it2}) . (z1, z2) = (e^{it1} z1, e^{it2} z2)
/// expressed on patch i: alpha_i picks up the phase i t2 - t1 and beta_i the
/// phase t1 - (i - 1) t2.
pub fn torus_act(t1: f64, t2: f64, p: &PatchPoint) -> PatchPoint {
    let i = p.patch as f64;
    PatchPoint {
        patch: p.patch,
        alpha: p.alpha * Complex64::from_polar(1.0, i * t2 - t1),
        beta: p.beta * Complex64::from_polar(1.0, t1 - (i - 1.0) * t2),
    }
}

/// Metric coefficient matrix in the logarithmic frame (dz1/z1, dz2/z2):
/// diag-block 1/V and V rho^2 + S'^2/(4V) with off-diagonal -S'/(2V), where
/// S' = sum (r_j + z - c_j)/r_j.
pub fn metric_log_frame(config: &CenterConfig, p: &RealPoint) -> GhResult<HermitianForm2> {
    let (rs, rho) = radii(config, p)?;
    if rho == 0.0 {
        return Err(GhError::Degenerate("log frame degenerates on the axis".into()));
    }
    let v = potential(config, p)?;
    let sp: f64 = rs
        .iter()
        .zip(config.centers())
        .map(|(r, c)| (r + p.z - c) / r)
        .sum();
    let cross = Complex64::new(-sp / (2.0 * v), 0.0);
    Ok(HermitianForm2::new([
        [Complex64::new(1.0 / v, 0.0), cross],
        [cross, Complex64::new(v * rho * rho + sp * sp / (4.0 * v), 0.0)],
    ]))
}

/// Metric coefficient matrix in the affine frame (d alpha_i, d beta_i) of
/// the requested patch, at an off-axis fiber point.
pub fn metric_complex(config: &CenterConfig, fp: &FiberPoint, patch: usize) -> GhResult<HermitianForm2> {
    let h_log = metric_log_frame(config, &fp.base)?;
    let g = to_global(config, fp)?;
    let pp = to_patch(&g, patch, config.n())?;
    if pp.alpha.norm() == 0.0 || pp.beta.norm() == 0.0 {
        return Err(GhError::Degenerate(
            "patch frame change is singular on the coordinate axes".into(),
        ));
    }
    let i = patch as f64;
    let zero = Complex64::new(0.0, 0.0);
    // rows: dz1/z1 = (i-1) dalpha/alpha + i dbeta/beta, dz2/z2 = dalpha/alpha + dbeta/beta
    let j = [
        [(i - 1.0) / pp.alpha, i / pp.beta],
        [1.0 / pp.alpha, 1.0 / pp.beta],
    ];
    let _ = zero;
    Ok(h_log.congruence(&j))
}

/// Where an axis sample of a patch lands under the moment map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisKind {
    Alpha,
    Beta,
}

#[derive(Clone, Copy, Debug)]
pub enum BoundaryImage {
    /// The sample lies on boundary piece L_label.
    Piece { mu1: f64, mu2: f64, label: usize },
    /// The patch origin maps to the vertex associated with center index
    /// (1-based).
    Vertex { mu1: f64, mu2: f64, index: usize },
}

/// Moment image of a point on a patch coordinate axis, with the matched
/// boundary piece: the alpha_i axis maps to L_{i+1}, the beta_i axis to L_i.
/// The image is computed by stepping slightly off the axis and removing the
/// quadratic offset by extrapolation.
pub fn boundary_map(
    config: &CenterConfig,
    patch: usize,
    axis: AxisKind,
    sample: Complex64,
) -> GhResult<BoundaryImage> {
    let n = config.n();
    if patch == 0 || patch > n {
        return Err(GhError::InvalidInput(format!("patch index {patch} out of 1..={n}")));
    }
    let poly = build_polytope(config);
    if sample.norm() == 0.0 {
        let v = poly.vertices[patch - 1];
        return Ok(BoundaryImage::Vertex {
            mu1: v[0],
            mu2: v[1],
            index: patch,
        });
    }
    let mu_at = |eps: f64| -> GhResult<(f64, f64)> {
        let (alpha, beta) = match axis {
            AxisKind::Alpha => (sample, Complex64::new(eps, 0.0)),
            AxisKind::Beta => (Complex64::new(eps, 0.0), sample),
        };
        let g = from_patch(&PatchPoint { patch, alpha, beta });
        let fp = from_global(config, &g)?;
        moment_actions(config, &fp.base)
    };
    let eps = 1e-3 * (config.scale() + sample.norm());
    let (a1, a2) = mu_at(eps)?;
    let (b1, b2) = mu_at(2.0 * eps)?;
    // moment actions are smooth in eps^2; Richardson in eps^2 cancels the
    // leading offset
    let mu1 = (4.0 * a1 - b1) / 3.0;
    let mu2 = (4.0 * a2 - b2) / 3.0;
    let label = poly
        .boundary_piece(mu1, mu2, 1e-7 * (1.0 + mu1.abs() + mu2.abs()))
        .ok_or(GhError::OutsidePolytope)?;
    Ok(BoundaryImage::Piece { mu1, mu2, label })
}
