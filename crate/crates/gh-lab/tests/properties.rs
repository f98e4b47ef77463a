//! Property tests: invariants that should hold for arbitrary admissible
//! inputs, not just the seeded sweeps.

use gh_lab::charts::gauge_difference;
use gh_lab::field::{check_harmonic, CenterConfig, RealPoint};
use gh_lab::metric::FiberPoint;
use gh_lab::phase::{classify, family_potential, PhaseClassification, PhaseParameter};
use gh_lab::symplectic::{
    build_polytope, invert_moment, legendre_transform, kahler_potential, moment_map,
    HessianPotentials,
};
use gh_lab::ChartId;
use num_complex::Complex64;
use proptest::prelude::*;

fn centers_strategy() -> impl Strategy<Value = Vec<f64>> {
    // 1 to 3 strictly increasing centers from bounded offsets
    (proptest::collection::vec(0.2f64..1.5, 1..=3), -1.0f64..1.0).prop_map(|(gaps, start)| {
        let mut c = Vec::with_capacity(gaps.len());
        let mut z = start;
        for g in gaps {
            c.push(z);
            z += g;
        }
        c
    })
}

/// An off-axis point with a healthy margin from the centers.
fn point_strategy() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.5f64..3.0, 0.0f64..std::f64::consts::TAU, -3.0f64..4.0)
        .prop_map(|(rho, th, z)| (rho * th.cos(), rho * th.sin(), z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potential_is_harmonic(centers in centers_strategy(), (x, y, z) in point_strategy()) {
        let config = CenterConfig::new(centers).unwrap();
        let r = check_harmonic(&config, &RealPoint::new(x, y, z)).unwrap();
        prop_assert!(r.residual < 1e-6, "residual {}", r.residual);
    }

    #[test]
    fn gauge_jump_is_the_center_count(
        centers in centers_strategy(),
        (x, y, z) in point_strategy(),
    ) {
        let config = CenterConfig::new(centers).unwrap();
        let n = config.n() as f64;
        let jump = gauge_difference(&config, &RealPoint::new(x, y, z)).unwrap();
        prop_assert!((jump - n).abs() < 1e-9, "jump {jump} vs n {n}");
    }

    #[test]
    fn moment_image_in_polytope_and_inverts(
        centers in centers_strategy(),
        (x, y, z) in point_strategy(),
        phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let config = CenterConfig::new(centers).unwrap();
        let base = RealPoint::new(x, y, z);
        let chart = if ChartId::South.admissible(&config, &base) {
            ChartId::South
        } else {
            ChartId::North
        };
        let fp = FiberPoint { phi, base, chart };
        let sp = moment_map(&config, &fp).unwrap();
        prop_assert!(build_polytope(&config).slack(sp.mu1, sp.mu2) > 0.0);
        let back = invert_moment(&config, &sp).unwrap();
        prop_assert!((back.base.x - x).abs() < 1e-8);
        prop_assert!((back.base.y - y).abs() < 1e-8);
        prop_assert!((back.base.z - z).abs() < 1e-8);
    }

    #[test]
    fn legendre_transform_matches_dual_potential(
        centers in centers_strategy(),
        (x, y, z) in point_strategy(),
    ) {
        let config = CenterConfig::new(centers).unwrap();
        let base = RealPoint::new(x, y, z);
        let chart = if ChartId::South.admissible(&config, &base) {
            ChartId::South
        } else {
            ChartId::North
        };
        let fp = FiberPoint { phi: 0.0, base, chart };
        let sp = moment_map(&config, &fp).unwrap();
        let lhs = legendre_transform(&config, &HessianPotentials::zero(), &sp).unwrap();
        let matched = HessianPotentials::legendre_matched(config.n());
        let rhs = kahler_potential(&config, &matched, &sp).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-8, "legendre gap {}", lhs - rhs);
    }

    #[test]
    fn phase_potential_real_outside_imaginary_inside(
        b in 0.3f64..2.0,
        s in 0.0f64..1.5,
        scale in 0.05f64..0.95,
        th_a in 0.0f64..std::f64::consts::TAU,
        th_b in 0.0f64..std::f64::consts::TAU,
        outside in proptest::bool::ANY,
    ) {
        let param = PhaseParameter::imaginary(b);
        let alpha = Complex64::from_polar(s, th_a);
        let shell = b / (1.0 + s * s);
        let t = if outside { shell / scale } else { shell * scale };
        let beta = Complex64::from_polar(t, th_b);
        let class = classify(&param, alpha, beta);
        let psi = family_potential(&param, alpha, beta).unwrap();
        if outside {
            prop_assert_eq!(class, PhaseClassification::OutsideShell);
            prop_assert!(psi.im.abs() < 1e-10, "imag {}", psi.im);
        } else {
            prop_assert_eq!(class, PhaseClassification::InsideShell);
            prop_assert!(psi.re.abs() < 1e-10, "real {}", psi.re);
        }
    }
}
