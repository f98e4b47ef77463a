//! Deterministic sampling of admissible points for the verification sweeps.
//!
//! All regions keep a margin from the axis rays and the centers so that
//! finite-difference stencils stay inside the domain.

use crate::charts::ChartId;
use crate::field::{nearest_center_distance, CenterConfig, RealPoint};
use crate::metric::FiberPoint;
use rand::Rng;

/// A point admissible for both charts: bounded cylindrical radius away from
/// the whole axis, bounded distance from every center.
pub fn sample_off_axis(config: &CenterConfig, rng: &mut impl Rng, margin: f64) -> RealPoint {
    let span = config.c_last() - config.c_first() + 2.0;
    loop {
        let rho = rng.gen_range(margin..2.0 * span);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = rng.gen_range(config.c_first() - span..config.c_last() + span);
        let p = RealPoint::new(rho * theta.cos(), rho * theta.sin(), z);
        if nearest_center_distance(config, &p) > margin {
            return p;
        }
    }
}

/// A point admissible for one chart, allowed near (but not on) the axis on
/// the chart's kept side.
pub fn sample_chart_point(
    config: &CenterConfig,
    chart: ChartId,
    rng: &mut impl Rng,
    margin: f64,
) -> RealPoint {
    loop {
        let p = sample_off_axis(config, rng, margin);
        if chart.admissible(config, &p) {
            return p;
        }
    }
}

pub fn sample_fiber_point(
    config: &CenterConfig,
    chart: ChartId,
    rng: &mut impl Rng,
    margin: f64,
) -> FiberPoint {
    let base = sample_chart_point(config, chart, rng, margin);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    FiberPoint { phi, base, chart }
}
