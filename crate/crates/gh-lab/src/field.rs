//! The multi-center harmonic potential V, the center configuration, and the
//! radii r_j: the scalar backbone of every metric formula.

use crate::error::{GhError, GhResult};
use crate::numerics::{fd_step, Dual, Scalar};
use serde::{Deserialize, Serialize};

/// Distance below which a point counts as coinciding with a center.
const CENTER_EPS: f64 = 1e-12;
/// Distance (relative to the config scale) below which evaluations carry a
/// proximity warning.
const PROXIMITY_FRACTION: f64 = 1e-6;

/// The n collinear monopole centers c_1 < ... < c_n on the z-axis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CenterConfig {
    centers: Vec<f64>,
    scale: f64,
}

impl CenterConfig {
    pub fn new(centers: Vec<f64>) -> GhResult<Self> {
        if centers.is_empty() {
            return Err(GhError::InvalidInput("need at least one center".into()));
        }
        for w in centers.windows(2) {
            if w[1] <= w[0] {
                return Err(GhError::InvalidInput(
                    "centers must be strictly increasing".into(),
                ));
            }
        }
        let spread = centers.last().unwrap() - centers.first().unwrap();
        let scale = if spread > 0.0 { spread } else { 1.0 };
        Ok(CenterConfig { centers, scale })
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn n(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Length scale used only for step-size heuristics.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn c_first(&self) -> f64 {
        self.centers[0]
    }

    pub fn c_last(&self) -> f64 {
        *self.centers.last().unwrap()
    }
}

/// A point of the base R^3, away from every center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl RealPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        RealPoint { x, y, z }
    }

    pub fn rho(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    fn check_off_centers(&self, config: &CenterConfig) -> GhResult<()> {
        for &c in config.centers() {
            let d2 = self.x * self.x + self.y * self.y + (self.z - c) * (self.z - c);
            if d2 < CENTER_EPS * CENTER_EPS {
                return Err(GhError::AtCenter);
            }
        }
        Ok(())
    }
}

/// Radii to every center plus the cylindrical radius rho.
pub fn radii(config: &CenterConfig, p: &RealPoint) -> GhResult<(Vec<f64>, f64)> {
    p.check_off_centers(config)?;
    let rho = p.rho();
    let rs = config
        .centers()
        .iter()
        .map(|&c| {
            let dz = p.z - c;
            (rho * rho + dz * dz).sqrt()
        })
        .collect();
    Ok((rs, rho))
}

/// V = 1/2 sum_j 1/r_j over any scalar type.
pub fn potential_generic<T: Scalar>(centers: &[f64], x: T, y: T, z: T) -> T {
    let half = T::from_f64(0.5);
    let mut v = T::zero();
    for &c in centers {
        let dz = z - T::from_f64(c);
        let r = (x * x + y * y + dz * dz).sqrt();
        v = v + half / r;
    }
    v
}

/// The harmonic potential V at a point.
pub fn potential(config: &CenterConfig, p: &RealPoint) -> GhResult<f64> {
    p.check_off_centers(config)?;
    Ok(potential_generic(config.centers(), p.x, p.y, p.z))
}

/// Distance from `p` to the nearest center.
pub fn nearest_center_distance(config: &CenterConfig, p: &RealPoint) -> f64 {
    config
        .centers()
        .iter()
        .map(|&c| {
            let dz = p.z - c;
            (p.x * p.x + p.y * p.y + dz * dz).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Exact gradient of V via forward-mode duals.
pub fn grad_potential(config: &CenterConfig, p: &RealPoint) -> GhResult<[f64; 3]> {
    p.check_off_centers(config)?;
    let centers = config.centers();
    let x = Dual::<f64, 3>::var(p.x, 0);
    let y = Dual::<f64, 3>::var(p.y, 1);
    let z = Dual::<f64, 3>::var(p.z, 2);
    Ok(potential_generic(centers, x, y, z).d)
}

/// Laplacian residual of V.
#[derive(Clone, Copy, Debug)]
pub struct HarmonicResidual {
    pub residual: f64,
    /// Set when the point is within 1e-6 * scale of a center, where the
    /// finite-difference residual is dominated by the 1/r singularity.
    pub near_center: bool,
}

/// |ΔV| by second finite differences of the dual-number gradient.
pub fn check_harmonic(config: &CenterConfig, p: &RealPoint) -> GhResult<HarmonicResidual> {
    p.check_off_centers(config)?;
    let mut lap = 0.0;
    for axis in 0..3 {
        let coord = [p.x, p.y, p.z][axis];
        let h = fd_step(coord);
        let mut plus = *p;
        let mut minus = *p;
        match axis {
            0 => {
                plus.x += h;
                minus.x -= h;
            }
            1 => {
                plus.y += h;
                minus.y -= h;
            }
            _ => {
                plus.z += h;
                minus.z -= h;
            }
        }
        let gp = grad_potential(config, &plus)?;
        let gm = grad_potential(config, &minus)?;
        lap += (gp[axis] - gm[axis]) / (2.0 * h);
    }
    let near = nearest_center_distance(config, p) < PROXIMITY_FRACTION * config.scale();
    Ok(HarmonicResidual {
        residual: lap.abs(),
        near_center: near,
    })
}

/// Components of *dV in the cyclic 2-form basis (dy∧dz, dz∧dx, dx∧dy).
pub fn star_dv(config: &CenterConfig, p: &RealPoint) -> GhResult<[f64; 3]> {
    p.check_off_centers(config)?;
    let mut out = [0.0; 3];
    for &c in config.centers() {
        let dz = p.z - c;
        let r2 = p.x * p.x + p.y * p.y + dz * dz;
        let r3 = r2 * r2.sqrt();
        out[0] -= 0.5 * p.x / r3;
        out[1] -= 0.5 * p.y / r3;
        out[2] -= 0.5 * dz / r3;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(cs: &[f64]) -> CenterConfig {
        CenterConfig::new(cs.to_vec()).unwrap()
    }

    #[test]
    fn rejects_unsorted_centers() {
        assert!(CenterConfig::new(vec![1.0, 0.0]).is_err());
        assert!(CenterConfig::new(vec![0.0, 0.0]).is_err());
        assert!(CenterConfig::new(vec![]).is_err());
    }

    #[test]
    fn radii_single_center() {
        let (rs, rho) = radii(&cfg(&[0.0]), &RealPoint::new(3.0, 4.0, 0.0)).unwrap();
        assert_eq!(rs, vec![5.0]);
        assert_eq!(rho, 5.0);
    }

    #[test]
    fn radii_midpoint() {
        let (rs, _) = radii(&cfg(&[0.0, 1.0]), &RealPoint::new(0.0, 0.0, 0.5)).unwrap();
        assert!((rs[0] - 0.5).abs() < 1e-15);
        assert!((rs[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rho_identity() {
        // rho^2 = r_j^2 - (z - c_j)^2 for each j
        let config = cfg(&[-0.4, 0.3, 1.1]);
        let p = RealPoint::new(0.7, -1.2, 0.5);
        let (rs, rho) = radii(&config, &p).unwrap();
        for (j, &c) in config.centers().iter().enumerate() {
            let dz = p.z - c;
            assert!((rho * rho - (rs[j] * rs[j] - dz * dz)).abs() < 1e-12);
        }
    }

    #[test]
    fn potential_values() {
        assert!((potential(&cfg(&[0.0]), &RealPoint::new(1.0, 0.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(
            (potential(&cfg(&[0.0, 1.0]), &RealPoint::new(0.0, 0.0, 0.5)).unwrap() - 2.0).abs() < 1e-15
        );
        assert!((potential(&cfg(&[0.0]), &RealPoint::new(3.0, 4.0, 0.0)).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_closed_form() {
        // grad V, n = 1, c = 0 at (1,0,0) is (-1/2, 0, 0)
        let g = grad_potential(&cfg(&[0.0]), &RealPoint::new(1.0, 0.0, 0.0)).unwrap();
        assert!((g[0] + 0.5).abs() < 1e-14);
        assert!(g[1].abs() < 1e-14);
        assert!(g[2].abs() < 1e-14);
    }

    #[test]
    fn harmonic_at_generic_point() {
        let r = check_harmonic(&cfg(&[0.0, 1.0]), &RealPoint::new(0.6, -0.9, 1.7)).unwrap();
        assert!(r.residual < 1e-8, "laplacian residual {}", r.residual);
        assert!(!r.near_center);
    }

    #[test]
    fn near_center_flagged() {
        let r = check_harmonic(&cfg(&[0.0]), &RealPoint::new(1e-8, 0.0, 0.0)).unwrap();
        assert!(r.near_center);
        assert!(r.residual.is_finite());
    }

    #[test]
    fn at_center_rejected() {
        assert!(matches!(
            potential(&cfg(&[0.0]), &RealPoint::new(0.0, 0.0, 0.0)),
            Err(GhError::AtCenter)
        ));
    }

    #[test]
    fn star_dv_axis_values() {
        let s = star_dv(&cfg(&[0.0]), &RealPoint::new(0.0, 0.0, -1.0)).unwrap();
        assert_eq!(s, [0.0, 0.0, 0.5]);
        let s = star_dv(&cfg(&[0.0]), &RealPoint::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(s, [-0.5, 0.0, 0.0]);
    }

    #[test]
    fn star_dv_matches_gradient_star() {
        // *dV coefficients equal the Euclidean star of the dual-number gradient.
        let config = cfg(&[-0.2, 0.5, 0.9]);
        let p = RealPoint::new(0.8, 0.4, -0.6);
        let g = grad_potential(&config, &p).unwrap();
        let s = star_dv(&config, &p).unwrap();
        for i in 0..3 {
            assert!((g[i] - s[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn translation_covariance() {
        let c1 = cfg(&[0.0, 1.0]);
        let c2 = cfg(&[2.5, 3.5]);
        let p = RealPoint::new(0.3, -0.8, 0.4);
        let q = RealPoint::new(0.3, -0.8, 2.9);
        assert_eq!(potential(&c1, &p).unwrap(), potential(&c2, &q).unwrap());
    }

    #[test]
    fn rotational_symmetry() {
        let config = cfg(&[0.0, 0.7]);
        let p = RealPoint::new(0.6, 0.8, 0.3);
        let q = RealPoint::new(1.0, 0.0, 0.3); // same rho
        let dv = (potential(&config, &p).unwrap() - potential(&config, &q).unwrap()).abs();
        assert!(dv < 1e-14);
    }
}
