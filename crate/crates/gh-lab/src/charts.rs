//! Stereographic coordinates per center and the monopole connection 1-forms
//! on the two charts, together with the gauge transition between them.

use crate::error::{GhError, GhResult};
use crate::field::{radii, CenterConfig, RealPoint};
use crate::numerics::RealScalar;
use serde::{Deserialize, Serialize};

/// Points within this distance of a removed ray are rejected: the
/// stereographic denominators vanish there.
pub const RAY_MARGIN: f64 = 1e-9;

/// The two bundle charts: South removes the axis ray z >= c_1, North removes
/// z <= c_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartId {
    South,
    North,
}

impl ChartId {
    pub fn admissible(self, config: &CenterConfig, p: &RealPoint) -> bool {
        let rho = p.rho();
        if rho >= RAY_MARGIN {
            return true;
        }
        match self {
            ChartId::South => p.z < config.c_first() - RAY_MARGIN,
            ChartId::North => p.z > config.c_last() + RAY_MARGIN,
        }
    }

    pub fn check(self, config: &CenterConfig, p: &RealPoint) -> GhResult<()> {
        if self.admissible(config, p) {
            Ok(())
        } else {
            Err(GhError::Inadmissible(format!(
                "({}, {}, {}) lies on the removed ray of the {:?} chart",
                p.x, p.y, p.z, self
            )))
        }
    }
}

/// Stereographic pair (u_j, v_j) for center j.
pub fn stereo(config: &CenterConfig, chart: ChartId, j: usize, p: &RealPoint) -> GhResult<(f64, f64)> {
    chart.check(config, p)?;
    let (rs, _) = radii(config, p)?;
    let c = config.centers()[j];
    let denom = match chart {
        ChartId::South => rs[j] - (p.z - c),
        ChartId::North => rs[j] + (p.z - c),
    };
    Ok((p.x / denom, p.y / denom))
}

/// Inverse stereographic map for center j; `r` is the radius |p - p_j|.
pub fn stereo_inverse(config: &CenterConfig, chart: ChartId, j: usize, u: f64, v: f64, r: f64) -> RealPoint {
    let c = config.centers()[j];
    let s = u * u + v * v + 1.0;
    let x = 2.0 * r * u / s;
    let y = 2.0 * r * v / s;
    let z = match chart {
        ChartId::South => r * (u * u + v * v - 1.0) / s + c,
        ChartId::North => r * (1.0 - u * u - v * v) / s + c,
    };
    RealPoint::new(x, y, z)
}

/// Connection coefficients (dx, dy, dz) over any scalar type.
///
/// South: alpha = -1/2 sum (x dy - y dx) / (r_j (r_j - (z - c_j))),
/// North carries the opposite sign with the mirrored denominator.
pub fn connection_generic<T: RealScalar>(centers: &[f64], chart: ChartId, x: T, y: T, z: T) -> [T; 3] {
    let half = T::from_f64(0.5);
    let mut cx = T::zero();
    let mut cy = T::zero();
    for &c in centers {
        let dz = z - T::from_f64(c);
        let r = (x * x + y * y + dz * dz).sqrt();
        let denom = match chart {
            ChartId::South => r * (r - dz),
            ChartId::North => r * (r + dz),
        };
        match chart {
            ChartId::South => {
                cx = cx + half * y / denom;
                cy = cy - half * x / denom;
            }
            ChartId::North => {
                cx = cx - half * y / denom;
                cy = cy + half * x / denom;
            }
        }
    }
    [cx, cy, T::zero()]
}

/// Connection 1-form on the requested chart, as (dx, dy, dz) coefficients.
pub fn connection(config: &CenterConfig, chart: ChartId, p: &RealPoint) -> GhResult<[f64; 3]> {
    chart.check(config, p)?;
    p_check(config, p)?;
    Ok(connection_generic(config.centers(), chart, p.x, p.y, p.z))
}

/// Single-center summand alpha_j of the connection.
pub fn connection_term(
    config: &CenterConfig,
    chart: ChartId,
    j: usize,
    p: &RealPoint,
) -> GhResult<[f64; 3]> {
    chart.check(config, p)?;
    let (rs, _) = radii(config, p)?;
    let c = config.centers()[j];
    let dz = p.z - c;
    let (denom, sign) = match chart {
        ChartId::South => (rs[j] * (rs[j] - dz), -0.5),
        ChartId::North => (rs[j] * (rs[j] + dz), 0.5),
    };
    Ok([-sign * p.y / denom, sign * p.x / denom, 0.0])
}

fn p_check(config: &CenterConfig, p: &RealPoint) -> GhResult<()> {
    // connection summands also blow up at the centers themselves
    radii(config, p).map(|_| ())
}

/// Evaluates (north - south) connection on the unit angular vector field,
/// i.e. the gauge jump coefficient along dtheta. Equals n for n centers.
pub fn gauge_difference(config: &CenterConfig, p: &RealPoint) -> GhResult<f64> {
    if p.rho() < RAY_MARGIN {
        return Err(GhError::Inadmissible("point on the z-axis".into()));
    }
    let a_south = connection(config, ChartId::South, p)?;
    let a_north = connection(config, ChartId::North, p)?;
    // X = -y d/dx + x d/dy has dtheta(X) = 1
    let pair = |a: &[f64; 3]| -p.y * a[0] + p.x * a[1];
    Ok(pair(&a_north) - pair(&a_south))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::potential;
    use crate::numerics::{cyclic_to_lex, exterior_derivative};
    use crate::sampling::sample_off_axis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(cs: &[f64]) -> CenterConfig {
        CenterConfig::new(cs.to_vec()).unwrap()
    }

    #[test]
    fn south_stereo_example() {
        // n=1, c=0, p=(1,0,-1): r = sqrt(2), u = 1/(sqrt(2)+1) = sqrt(2)-1
        let (u, v) = stereo(&cfg(&[0.0]), ChartId::South, 0, &RealPoint::new(1.0, 0.0, -1.0)).unwrap();
        assert!((u - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn north_stereo_example() {
        let (u, _) = stereo(&cfg(&[0.0]), ChartId::North, 0, &RealPoint::new(1.0, 0.0, 1.0)).unwrap();
        assert!((u - 1.0 / (2f64.sqrt() + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn chart_inversion_identity() {
        // On the overlap, (u,v) and (u~,v~) are related by inversion in the unit circle.
        let config = cfg(&[-0.3, 0.4]);
        let p = RealPoint::new(0.8, -0.5, 0.1);
        for j in 0..2 {
            let (u, v) = stereo(&config, ChartId::South, j, &p).unwrap();
            let (tu, tv) = stereo(&config, ChartId::North, j, &p).unwrap();
            let n2 = u * u + v * v;
            assert!((tu - u / n2).abs() < 1e-12);
            assert!((tv - v / n2).abs() < 1e-12);
        }
    }

    #[test]
    fn stereo_round_trip() {
        let config = cfg(&[0.0, 1.0]);
        let p = RealPoint::new(0.4, 0.7, -0.9);
        let (rs, _) = radii(&config, &p).unwrap();
        for chart in [ChartId::South, ChartId::North] {
            for j in 0..2 {
                let (u, v) = stereo(&config, chart, j, &p).unwrap();
                let q = stereo_inverse(&config, chart, j, u, v, rs[j]);
                assert!((q.x - p.x).abs() < 1e-12);
                assert!((q.y - p.y).abs() < 1e-12);
                assert!((q.z - p.z).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn connection_vanishes_on_negative_axis() {
        let a = connection(&cfg(&[0.0]), ChartId::South, &RealPoint::new(0.0, 0.0, -1.0)).unwrap();
        assert_eq!(a, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn removed_ray_rejected() {
        let config = cfg(&[0.0]);
        assert!(connection(&config, ChartId::South, &RealPoint::new(0.0, 0.0, 1.0)).is_err());
        assert!(connection(&config, ChartId::North, &RealPoint::new(0.0, 0.0, -1.0)).is_err());
        assert!(connection(&config, ChartId::North, &RealPoint::new(0.0, 0.0, 2.0)).is_ok());
    }

    #[test]
    fn connection_matches_stereo_closed_form() {
        // n=1: alpha = -(u dv - v du)/(1 + u^2 + v^2) evaluated via the chain
        // rule must agree with the ambient closed form.
        let config = cfg(&[0.0]);
        let p = RealPoint::new(1.0, 0.0, -1.0);
        let a = connection(&config, ChartId::South, &p).unwrap();
        // closed form at this point: dy coefficient -1/(2 r (r - z)), r = sqrt(2)
        let r = 2f64.sqrt();
        assert!(a[0].abs() < 1e-15);
        assert!((a[1] + 1.0 / (2.0 * r * (r + 1.0))).abs() < 1e-14);
    }

    #[test]
    fn monopole_equation_both_charts() {
        // d(alpha) = -*dV componentwise at random admissible points.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let config = cfg(&[-0.5, 0.5]);
        for _ in 0..20 {
            let p = sample_off_axis(&config, &mut rng, 0.3);
            for chart in [ChartId::South, ChartId::North] {
                let form = |q: &[f64]| {
                    connection_generic(
                        config.centers(),
                        chart,
                        q[0], q[1], q[2],
                    )
                    .to_vec()
                };
                let da = exterior_derivative(3, 1, &form, &[p.x, p.y, p.z], 1e-5).unwrap();
                let sdv = cyclic_to_lex(&crate::field::star_dv(&config, &p).unwrap());
                for i in 0..3 {
                    assert!(
                        (da[i] + sdv[i]).abs() < 1e-7,
                        "monopole residual {} on {:?}",
                        da[i] + sdv[i],
                        chart
                    );
                }
            }
        }
    }

    #[test]
    fn per_center_monopole_equation() {
        let config = cfg(&[0.0, 1.0]);
        let p = RealPoint::new(0.7, -0.4, 0.3);
        for j in 0..2 {
            let form = |q: &[f64]| {
                let pt = RealPoint::new(q[0], q[1], q[2]);
                connection_term(&config, ChartId::South, j, &pt).unwrap().to_vec()
            };
            let da = exterior_derivative(3, 1, &form, &[p.x, p.y, p.z], 1e-5).unwrap();
            // *d(1/(2 r_j)) for the single summand
            let single = CenterConfig::new(vec![config.centers()[j]]).unwrap();
            let sdv = cyclic_to_lex(&crate::field::star_dv(&single, &p).unwrap());
            for i in 0..3 {
                assert!((da[i] + sdv[i]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn gauge_jump_is_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1usize, 2, 4] {
            let centers: Vec<f64> = (0..n).map(|i| i as f64 * 0.8).collect();
            let config = cfg(&centers);
            for _ in 0..10 {
                let p = sample_off_axis(&config, &mut rng, 0.2);
                let g = gauge_difference(&config, &p).unwrap();
                assert!((g - n as f64).abs() < 1e-10, "n={n} gauge={g}");
            }
        }
    }

    #[test]
    fn potential_still_finite_near_ray() {
        // admissibility is about the connection, not V
        let config = cfg(&[0.0]);
        let p = RealPoint::new(0.0, 0.0, 2.0);
        assert!(potential(&config, &p).is_ok());
    }
}
