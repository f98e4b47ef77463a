//! Forward-mode dual numbers, generic over the base scalar.
//!
//! `Dual<f64, N>` carries exact first derivatives with respect to N active
//! variables; nesting (`Dual<Dual<f64, 2>, 2>`) gives exact second
//! derivatives. The base scalar may also be `Complex64`, which is what the
//! phase-family code uses to differentiate complex-valued potentials with
//! respect to real variables.

use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field arithmetic plus the elementary functions every potential in this
/// crate is built from. Comparisons are deliberately absent; ordering only
/// makes sense on the leading value (see [`RealScalar`]).
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    /// Leading value, discarding derivative parts and imaginary parts.
    fn approx_value(self) -> f64;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
}

/// Scalars whose leading value is an ordinary real number.
pub trait RealScalar: Scalar {
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan(self) -> Self;
    /// Four-quadrant arctangent; `self` is the y-argument.
    fn atan2(self, x: Self) -> Self;
    fn abs(self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn approx_value(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
}

impl RealScalar for f64 {
    fn value(self) -> f64 {
        self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan(self) -> Self {
        f64::atan(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn approx_value(self) -> f64 {
        self.re
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
}

/// A jet `value + sum_i d_i * eps_i` with nilpotent infinitesimals.
///
/// Product rule is applied exactly; there is no truncation beyond the order
/// carried by the nesting depth.
#[derive(Clone, Copy, Debug)]
pub struct Dual<T, const N: usize> {
    pub val: T,
    pub d: [T; N],
}

impl<T: Scalar, const N: usize> Dual<T, N> {
    pub fn constant(x: T) -> Self {
        Dual {
            val: x,
            d: [T::zero(); N],
        }
    }

    /// The i-th active variable: value `x`, unit derivative in slot `i`.
    pub fn var(x: T, i: usize) -> Self {
        let mut d = [T::zero(); N];
        d[i] = T::one();
        Dual { val: x, d }
    }

    fn map_d(self, f: impl Fn(T) -> T) -> Self {
        let mut d = [T::zero(); N];
        for i in 0..N {
            d[i] = f(self.d[i]);
        }
        Dual { val: self.val, d }
    }
}

impl<T: Scalar, const N: usize> Add for Dual<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut d = [T::zero(); N];
        for i in 0..N {
            d[i] = self.d[i] + rhs.d[i];
        }
        Dual {
            val: self.val + rhs.val,
            d,
        }
    }
}

impl<T: Scalar, const N: usize> Sub for Dual<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut d = [T::zero(); N];
        for i in 0..N {
            d[i] = self.d[i] - rhs.d[i];
        }
        Dual {
            val: self.val - rhs.val,
            d,
        }
    }
}

impl<T: Scalar, const N: usize> Mul for Dual<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut d = [T::zero(); N];
        for i in 0..N {
            d[i] = self.d[i] * rhs.val + self.val * rhs.d[i];
        }
        Dual {
            val: self.val * rhs.val,
            d,
        }
    }
}

impl<T: Scalar, const N: usize> Div for Dual<T, N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let val = self.val / rhs.val;
        let mut d = [T::zero(); N];
        for i in 0..N {
            d[i] = (self.d[i] - val * rhs.d[i]) / rhs.val;
        }
        Dual { val, d }
    }
}

impl<T: Scalar, const N: usize> Neg for Dual<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut d = [T::zero(); N];
        for i in 0..N {
            d[i] = -self.d[i];
        }
        Dual { val: -self.val, d }
    }
}

impl<T: Scalar, const N: usize> Scalar for Dual<T, N> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    fn one() -> Self {
        Dual::constant(T::one())
    }
    fn from_f64(x: f64) -> Self {
        Dual::constant(T::from_f64(x))
    }
    fn approx_value(self) -> f64 {
        self.val.approx_value()
    }
    fn sqrt(self) -> Self {
        let s = self.val.sqrt();
        let half = T::from_f64(0.5);
        let inv = half / s;
        Dual {
            val: s,
            d: self.map_d(|x| x * inv).d,
        }
    }
    fn ln(self) -> Self {
        Dual {
            val: self.val.ln(),
            d: self.map_d(|x| x / self.val).d,
        }
    }
    fn exp(self) -> Self {
        let e = self.val.exp();
        Dual {
            val: e,
            d: self.map_d(|x| x * e).d,
        }
    }
}

impl<T: RealScalar, const N: usize> RealScalar for Dual<T, N> {
    fn value(self) -> f64 {
        self.val.value()
    }
    fn sin(self) -> Self {
        let c = self.val.cos();
        Dual {
            val: self.val.sin(),
            d: self.map_d(|x| x * c).d,
        }
    }
    fn cos(self) -> Self {
        let s = self.val.sin();
        Dual {
            val: self.val.cos(),
            d: self.map_d(|x| -(x * s)).d,
        }
    }
    fn atan(self) -> Self {
        let g = T::one() / (T::one() + self.val * self.val);
        Dual {
            val: self.val.atan(),
            d: self.map_d(|x| x * g).d,
        }
    }
    fn atan2(self, x: Self) -> Self {
        // d(atan2(y, x)) = (x dy - y dx) / (x^2 + y^2)
        let denom = x.val * x.val + self.val * self.val;
        let mut d = [T::zero(); N];
        for i in 0..N {
            d[i] = (x.val * self.d[i] - self.val * x.d[i]) / denom;
        }
        Dual {
            val: self.val.atan2(x.val),
            d,
        }
    }
    fn abs(self) -> Self {
        if self.val.value() < 0.0 {
            -self
        } else {
            self
        }
    }
}

/// Exact forward-mode gradient of an N-variable scalar field.
pub fn gradient<const N: usize>(
    f: impl Fn(&[Dual<f64, N>; N]) -> Dual<f64, N>,
    at: &[f64; N],
) -> [f64; N] {
    let mut vars = [Dual::constant(0.0); N];
    for i in 0..N {
        vars[i] = Dual::var(at[i], i);
    }
    f(&vars).d
}

/// Exact Hessian of a 2-variable scalar field via dual-over-dual evaluation.
pub fn hessian2(
    f: impl Fn(&[Dual<Dual<f64, 2>, 2>; 2]) -> Dual<Dual<f64, 2>, 2>,
    at: &[f64; 2],
) -> [[f64; 2]; 2] {
    let mut vars = [Dual::constant(Dual::constant(0.0)); 2];
    for i in 0..2 {
        vars[i] = Dual::var(Dual::var(at[i], i), i);
    }
    let out = f(&vars);
    [[out.d[0].d[0], out.d[0].d[1]], [out.d[1].d[0], out.d[1].d[1]]]
}

/// Second derivatives of a complex-valued field of 2 real variables.
pub fn hessian2_complex(
    f: impl Fn(&[Dual<Dual<Complex64, 2>, 2>; 2]) -> Dual<Dual<Complex64, 2>, 2>,
    at: &[f64; 2],
) -> [[Complex64; 2]; 2] {
    let mut vars = [Dual::constant(Dual::constant(Complex64::new(0.0, 0.0))); 2];
    for i in 0..2 {
        vars[i] = Dual::var(Dual::var(Complex64::new(at[i], 0.0), i), i);
    }
    let out = f(&vars);
    [[out.d[0].d[0], out.d[0].d[1]], [out.d[1].d[0], out.d[1].d[1]]]
}

/// Exact Hessian of a 4-variable scalar field via dual-over-dual evaluation.
pub fn hessian4(
    f: impl Fn(&[Dual<Dual<f64, 4>, 4>; 4]) -> Dual<Dual<f64, 4>, 4>,
    at: &[f64; 4],
) -> [[f64; 4]; 4] {
    let mut vars = [Dual::constant(Dual::constant(0.0)); 4];
    for i in 0..4 {
        vars[i] = Dual::var(Dual::var(at[i], i), i);
    }
    let out = f(&vars);
    std::array::from_fn(|i| std::array::from_fn(|j| out.d[i].d[j]))
}

/// Second derivatives of a complex-valued field of 4 real variables.
pub fn hessian4_complex(
    f: impl Fn(&[Dual<Dual<Complex64, 4>, 4>; 4]) -> Dual<Dual<Complex64, 4>, 4>,
    at: &[f64; 4],
) -> [[Complex64; 4]; 4] {
    let mut vars = [Dual::constant(Dual::constant(Complex64::new(0.0, 0.0))); 4];
    for i in 0..4 {
        vars[i] = Dual::var(Dual::var(Complex64::new(at[i], 0.0), i), i);
    }
    let out = f(&vars);
    std::array::from_fn(|i| std::array::from_fn(|j| out.d[i].d[j]))
}

/// Gradient of a complex-valued field of N real variables.
pub fn gradient_complex<const N: usize>(
    f: impl Fn(&[Dual<Complex64, N>; N]) -> Dual<Complex64, N>,
    at: &[f64; N],
) -> [Complex64; N] {
    let mut vars = [Dual::constant(Complex64::new(0.0, 0.0)); N];
    for i in 0..N {
        vars[i] = Dual::var(Complex64::new(at[i], 0.0), i);
    }
    f(&vars).d
}
