//! The phase-change family on O(-2): Kähler potential, Kähler form, and
//! moment map as functions of a complex resolution parameter c, with the
//! real / degenerate / imaginary case split and grid scans over the shell.

use crate::error::{GhError, GhResult};
use crate::numerics::{hessian4_complex, wirtinger_form, HermitianForm2, Scalar};
use crate::symplectic::complex_constant;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Absolute tolerance on |beta|^2 (1 + |alpha|^2)^2 - b^2 below which a point
/// counts as lying on the shell.
pub const SHELL_TOL: f64 = 1e-13;

/// The resolution parameter c = a + b i, with temperature T = c^2 whenever c
/// is real or purely imaginary.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PhaseParameter {
    pub c: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParameterKind {
    Real,
    Imaginary,
    Zero,
    Complexified,
}

impl PhaseParameter {
    pub fn new(c: Complex64) -> Self {
        PhaseParameter { c }
    }

    pub fn real(a: f64) -> Self {
        PhaseParameter { c: Complex64::new(a, 0.0) }
    }

    pub fn imaginary(b: f64) -> Self {
        PhaseParameter { c: Complex64::new(0.0, b) }
    }

    pub fn zero() -> Self {
        PhaseParameter { c: Complex64::new(0.0, 0.0) }
    }

    pub fn kind(&self) -> ParameterKind {
        match (self.c.re == 0.0, self.c.im == 0.0) {
            (true, true) => ParameterKind::Zero,
            (false, true) => ParameterKind::Real,
            (true, false) => ParameterKind::Imaginary,
            (false, false) => ParameterKind::Complexified,
        }
    }

    /// T = c^2 when that is real; undefined for general complex c.
    pub fn temperature(&self) -> Option<f64> {
        match self.kind() {
            ParameterKind::Zero => Some(0.0),
            ParameterKind::Real => Some(self.c.re * self.c.re),
            ParameterKind::Imaginary => Some(-self.c.im * self.c.im),
            ParameterKind::Complexified => None,
        }
    }
}

/// Phase label of a (parameter, point) pair. The shell is the locus
/// |beta|^2 (1 + |alpha|^2)^2 = b^2 of the imaginary case; general complex c
/// is labeled without a case split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseClassification {
    RealKahler,
    Degenerate,
    OutsideShell,
    InsideShell,
    OnShell,
    Complexified,
}

impl std::fmt::Display for PhaseClassification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PhaseClassification::RealKahler => "real-kahler",
            PhaseClassification::Degenerate => "degenerate",
            PhaseClassification::OutsideShell => "outside-shell",
            PhaseClassification::InsideShell => "inside-shell",
            PhaseClassification::OnShell => "on-shell",
            PhaseClassification::Complexified => "complexified",
        };
        f.write_str(s)
    }
}

/// Moment pair; real in the real-parameter and outside-shell phases, purely
/// imaginary inside the shell.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MomentValue {
    pub mu1: Complex64,
    pub mu2: Complex64,
}

pub fn classify(param: &PhaseParameter, alpha: Complex64, beta: Complex64) -> PhaseClassification {
    match param.kind() {
        ParameterKind::Zero => PhaseClassification::Degenerate,
        ParameterKind::Real => PhaseClassification::RealKahler,
        ParameterKind::Complexified => PhaseClassification::Complexified,
        ParameterKind::Imaginary => {
            let s = alpha.norm_sqr();
            let t = beta.norm_sqr();
            let b = param.c.im;
            let diff = t * (1.0 + s) * (1.0 + s) - b * b;
            if diff.abs() <= SHELL_TOL {
                PhaseClassification::OnShell
            } else if diff > 0.0 {
                PhaseClassification::OutsideShell
            } else {
                PhaseClassification::InsideShell
            }
        }
    }
}

/// arctan through the principal complex logarithm, usable inside dual-number
/// jets built over Complex64.
fn atan_via_log<T: Scalar>(w: T) -> T {
    let i = complex_constant::<T>(0.0, 1.0);
    let half_i = complex_constant::<T>(0.0, 0.5);
    let one = T::one();
    -half_i * ((one + i * w) / (one - i * w)).ln()
}

/// Potential of the family in the real coordinates (Re a, Im a, Re b, Im b),
/// with the branch fixed by the classification of the base point.
///
/// Real / complexified c evaluates
///   psi = c log((sqrt(X) - c)/(1 + s)) + sqrt(X),  X = t (1+s)^2 + c^2,
/// with principal branches; the imaginary-c cases use the real rewriting
///   sqrt(X) - b arctan(sqrt(X)/b)  (outside, X = t(1+s)^2 - b^2 > 0)
/// and the purely imaginary
///   i [ b log((b - sqrt(Y))/(1+s)) + sqrt(Y) ]  (inside, Y = b^2 - t(1+s)^2),
/// each with its additive constant dropped. The outside rewriting also drops
/// the pluriharmonic term i b log|beta|, so it differs from the principal
/// continuation by b pi/2 + i b log|beta|; derivatives are unaffected.
fn potential_core<T: Scalar>(c: Complex64, class: PhaseClassification, v: &[T; 4]) -> T {
    let one = T::one();
    let s = v[0] * v[0] + v[1] * v[1];
    let t = v[2] * v[2] + v[3] * v[3];
    let w = one + s;
    match class {
        PhaseClassification::RealKahler | PhaseClassification::Complexified => {
            let cc = complex_constant::<T>(c.re, c.im);
            let q = (t * w * w + cc * cc).sqrt();
            cc * ((q - cc) / w).ln() + q
        }
        PhaseClassification::Degenerate => t.sqrt() * w,
        PhaseClassification::OutsideShell => {
            let b = T::from_f64(c.im);
            let q = (t * w * w - b * b).sqrt();
            q - b * atan_via_log(q / b)
        }
        PhaseClassification::InsideShell => {
            let b = T::from_f64(c.im);
            let i = complex_constant::<T>(0.0, 1.0);
            let q = (b * b - t * w * w).sqrt();
            i * (b * ((b - q) / w).ln() + q)
        }
        PhaseClassification::OnShell => unreachable!("on-shell points are rejected upstream"),
    }
}

pub fn family_potential(param: &PhaseParameter, alpha: Complex64, beta: Complex64) -> GhResult<Complex64> {
    let class = classify(param, alpha, beta);
    match class {
        PhaseClassification::OnShell => return Err(GhError::OnShell),
        PhaseClassification::Degenerate if beta.norm_sqr() == 0.0 => {
            return Err(GhError::Degenerate("c = 0 with beta = 0: log 0".into()));
        }
        PhaseClassification::InsideShell if beta.norm_sqr() == 0.0 && alpha.norm_sqr() == 0.0 => {
            return Err(GhError::Degenerate(
                "potential is log-singular on the zero section inside the shell".into(),
            ));
        }
        _ => {}
    }
    let v = [
        Complex64::new(alpha.re, 0.0),
        Complex64::new(alpha.im, 0.0),
        Complex64::new(beta.re, 0.0),
        Complex64::new(beta.im, 0.0),
    ];
    Ok(potential_core(param.c, class, &v))
}

/// Coefficients h_ab = 2 d^2 psi / dw_a dw-bar_b of the family metric
/// g = sum h_ab dw_a dw-bar_b; purely imaginary entries inside the shell.
pub fn family_kahler_form(
    param: &PhaseParameter,
    alpha: Complex64,
    beta: Complex64,
) -> GhResult<HermitianForm2> {
    let class = classify(param, alpha, beta);
    if class == PhaseClassification::OnShell {
        return Err(GhError::OnShell);
    }
    let c = param.c;
    let hess = hessian4_complex(
        |v| potential_core(c, class, v),
        &[alpha.re, alpha.im, beta.re, beta.im],
    );
    Ok(wirtinger_form(&hess))
}

/// Moment pair of the family:
///   mu1 = (1 - s)/(2 (1 + s)) sqrt(X), mu2 = s/(1 + s) sqrt(X)
/// with X = t (1+s)^2 + c^2 and the square root matched to the phase: real
/// outside the shell, i sqrt(-X) inside.
pub fn family_moment(param: &PhaseParameter, alpha: Complex64, beta: Complex64) -> GhResult<MomentValue> {
    let class = classify(param, alpha, beta);
    if class == PhaseClassification::OnShell {
        return Err(GhError::OnShell);
    }
    let s = alpha.norm_sqr();
    let t = beta.norm_sqr();
    let w = 1.0 + s;
    let q: Complex64 = match class {
        PhaseClassification::RealKahler | PhaseClassification::Degenerate => {
            Complex64::new((t * w * w + param.c.re * param.c.re).sqrt(), 0.0)
        }
        PhaseClassification::OutsideShell => {
            Complex64::new((t * w * w - param.c.im * param.c.im).sqrt(), 0.0)
        }
        PhaseClassification::InsideShell => {
            Complex64::new(0.0, (param.c.im * param.c.im - t * w * w).sqrt())
        }
        PhaseClassification::Complexified => (Complex64::new(t * w * w, 0.0) + param.c * param.c).sqrt(),
        PhaseClassification::OnShell => unreachable!(),
    };
    Ok(MomentValue {
        mu1: q * ((1.0 - s) / (2.0 * w)),
        mu2: q * (s / w),
    })
}

/// Rectangular grid in the moduli (|alpha|, |beta|).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScanGrid {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    pub res: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanCell {
    pub alpha_abs: f64,
    pub beta_abs: f64,
    pub class: PhaseClassification,
    /// None when the cell is on the shell (marked, not evaluated).
    pub moment: Option<MomentValue>,
    pub psi: Option<Complex64>,
}

/// Row-major scan over the grid; |alpha| varies along rows.
pub fn phase_scan(param: &PhaseParameter, grid: &ScanGrid) -> GhResult<Vec<ScanCell>> {
    if grid.res < 2 {
        return Err(GhError::InvalidInput("grid resolution must be at least 2 per axis".into()));
    }
    if !(grid.alpha_min <= grid.alpha_max && grid.beta_min <= grid.beta_max) {
        return Err(GhError::InvalidInput("empty grid".into()));
    }
    let coord = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (grid.res - 1) as f64;
    let mut cells = Vec::with_capacity(grid.res * grid.res);
    for ia in 0..grid.res {
        let a = coord(grid.alpha_min, grid.alpha_max, ia);
        for ib in 0..grid.res {
            let b = coord(grid.beta_min, grid.beta_max, ib);
            let alpha = Complex64::new(a, 0.0);
            let beta = Complex64::new(b, 0.0);
            let class = classify(param, alpha, beta);
            let (moment, psi) = if class == PhaseClassification::OnShell {
                (None, None)
            } else {
                // the potential diverges on the exceptional set (beta = 0
                // inside the shell); leave those cells empty
                let finite = |z: Complex64| (z.re.is_finite() && z.im.is_finite()).then_some(z);
                (
                    family_moment(param, alpha, beta).ok().and_then(|m| {
                        (finite(m.mu1).is_some() && finite(m.mu2).is_some()).then_some(m)
                    }),
                    family_potential(param, alpha, beta).ok().and_then(finite),
                )
            };
            cells.push(ScanCell { alpha_abs: a, beta_abs: b, class, moment, psi });
        }
    }
    Ok(cells)
}

/// CSV serialization of a scan; on-shell (and otherwise unevaluable) cells
/// leave the numeric fields empty.
pub fn scan_csv(cells: &[ScanCell]) -> String {
    let mut out = String::from("|alpha|,|beta|,class,Re(mu1),Im(mu1),Re(mu2),Im(mu2),Re(psi),Im(psi)\n");
    for cell in cells {
        out.push_str(&format!("{},{},{}", cell.alpha_abs, cell.beta_abs, cell.class));
        match (&cell.moment, &cell.psi) {
            (Some(m), Some(p)) => out.push_str(&format!(
                ",{},{},{},{},{},{}\n",
                m.mu1.re, m.mu1.im, m.mu2.re, m.mu2.im, p.re, p.im
            )),
            (Some(m), None) => out.push_str(&format!(
                ",{},{},{},{},,\n",
                m.mu1.re, m.mu1.im, m.mu2.re, m.mu2.im
            )),
            _ => out.push_str(",,,,,,\n"),
        }
    }
    out
}
