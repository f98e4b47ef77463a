//! Small dense symmetric/Hermitian matrices (2x2 and 4x4) and the handful of
//! operations the metric code needs. Everything is stack-allocated.

use crate::error::GhError;
use num_complex::Complex64;

pub type Mat4 = [[f64; 4]; 4];

/// Symmetric real matrix of dimension 2 or 4, stored dense.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymMat {
    dim: usize,
    a: Mat4,
}

impl SymMat {
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        assert!(dim == 2 || dim == 4, "SymMat supports dim 2 or 4");
        let mut a = [[0.0; 4]; 4];
        for i in 0..dim {
            for j in 0..=i {
                let v = f(i, j);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        SymMat { dim, a }
    }

    /// Symmetrizes the input; the caller is expected to pass something
    /// already symmetric to rounding.
    pub fn from_full(dim: usize, m: Mat4) -> Self {
        SymMat::from_fn(dim, |i, j| 0.5 * (m[i][j] + m[j][i]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn as_array(&self) -> &Mat4 {
        &self.a
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max(self.a[i][j].abs());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &SymMat) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut m = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max((self.a[i][j] - other.a[i][j]).abs());
            }
        }
        m
    }

    pub fn det(&self) -> f64 {
        det(self.dim, &self.a)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.a[i][i]).sum()
    }

    pub fn inverse(&self) -> Result<SymMat, GhError> {
        let inv = invert(self.dim, &self.a)?;
        Ok(SymMat::from_full(self.dim, inv))
    }

    /// Cholesky-based positive definiteness test.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.dim;
        let mut l = [[0.0f64; 4]; 4];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.a[i][j];
                for k in 0..j {
                    s -= l[i][k] * l[j][k];
                }
                if i == j {
                    if s <= 0.0 {
                        return false;
                    }
                    l[i][i] = s.sqrt();
                } else {
                    l[i][j] = s / l[j][j];
                }
            }
        }
        true
    }

    pub fn mul_vec(&self, v: &[f64; 4]) -> [f64; 4] {
        mat_vec(self.dim, &self.a, v)
    }

    pub fn mul(&self, other: &SymMat) -> Mat4 {
        mat_mul(self.dim, &self.a, &other.a)
    }

    /// Congruence transform J^T G J, the pullback of a bilinear form.
    pub fn congruence(&self, j: &Mat4) -> SymMat {
        let n = self.dim;
        let mut out = [[0.0; 4]; 4];
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for p in 0..n {
                    for q in 0..n {
                        s += j[p][a] * self.a[p][q] * j[q][b];
                    }
                }
                out[a][b] = s;
            }
        }
        SymMat::from_full(n, out)
    }
}

pub fn mat_vec(n: usize, m: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..n {
        for j in 0..n {
            out[i] += m[i][j] * v[j];
        }
    }
    out
}

pub fn mat_mul(n: usize, a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += a[i][k] * b[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn det(n: usize, m: &Mat4) -> f64 {
    // LU with partial pivoting.
    let mut a = *m;
    let mut d = 1.0;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    d
}

pub fn invert(n: usize, m: &Mat4) -> Result<Mat4, GhError> {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate().take(n) {
        row[i] = 1.0;
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == 0.0 {
            return Err(GhError::Degenerate("singular matrix".into()));
        }
        a.swap(piv, col);
        inv.swap(piv, col);
        let p = a[col][col];
        for c in 0..n {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col];
                for c in 0..n {
                    a[r][c] -= f * a[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
    }
    Ok(inv)
}

/// Coefficient matrix of a Hermitian form in two complex variables.
///
/// Entries may carry an overall imaginary factor for the purely imaginary
/// phase of the deformation family, so Hermiticity is reported as a residual
/// rather than enforced.
#[derive(Clone, Copy, Debug)]
pub struct HermitianForm2 {
    pub m: [[Complex64; 2]; 2],
}

impl HermitianForm2 {
    pub fn new(m: [[Complex64; 2]; 2]) -> Self {
        HermitianForm2 { m }
    }

    pub fn hermitian_residual(&self) -> f64 {
        let mut r = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                r = r.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        r
    }

    pub fn max_abs_diff(&self, other: &HermitianForm2) -> f64 {
        let mut r = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                r = r.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        r
    }

    pub fn max_real_residual(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.re.abs()).fold(0.0, f64::max)
    }

    pub fn max_imag_residual(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_positive_definite(&self) -> bool {
        // 2x2 Hermitian: leading minors.
        self.m[0][0].re > 0.0
            && (self.m[0][0].re * self.m[1][1].re - self.m[0][1].norm_sqr()) > 0.0
    }

    /// Congruence h -> J^T h conj(J) for a holomorphic frame change
    /// e_i = sum_a J[i][a] dw_a.
    pub fn congruence(&self, j: &[[Complex64; 2]; 2]) -> HermitianForm2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for p in 0..2 {
                    for q in 0..2 {
                        s += j[p][a] * self.m[p][q] * j[q][b].conj();
                    }
                }
                *slot = s;
            }
        }
        HermitianForm2::new(out)
    }

    /// Real 4x4 metric in the frame (Re w1, Im w1, Re w2, Im w2) of the
    /// Hermitian form g = sum h_ab dw_a dw̄_b (symmetrized product).
    pub fn realify(&self) -> SymMat {
        let mut g = [[0.0f64; 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                let re = self.m[a][b].re;
                let im = self.m[a][b].im;
                // Re[h dw_a ⊗ dw̄_b] = re(dx_a dx_b + dy_a dy_b) - im(dy_a dx_b - dx_a dy_b)
                g[2 * a][2 * b] += re;
                g[2 * a + 1][2 * b + 1] += re;
                g[2 * a + 1][2 * b] -= im;
                g[2 * a][2 * b + 1] += im;
            }
        }
        // Accumulated in full; symmetrize to average the two (a,b)/(b,a) passes.
        SymMat::from_full(4, g)
    }
}

/// Packs the Hessian of a (possibly complex-valued) function of the real
/// coordinates (Re w1, Im w1, Re w2, Im w2) into the coefficient matrix of
/// g = sum h_ab dw_a dw̄_b via the Wirtinger combination
/// f_{w_a w̄_b} = 1/4 [(f_{x_a x_b} + f_{y_a y_b}) + i (f_{x_a y_b} - f_{y_a x_b})],
/// with h = 2 f_{w w̄}.
pub fn wirtinger_form(hess: &[[Complex64; 4]; 4]) -> HermitianForm2 {
    let i = Complex64::new(0.0, 1.0);
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let (xa, ya) = (2 * a, 2 * a + 1);
            let (xb, yb) = (2 * b, 2 * b + 1);
            *slot = 0.5
                * (hess[xa][xb] + hess[ya][yb] + i * (hess[xa][yb] - hess[ya][xb]));
        }
    }
    HermitianForm2::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let g = SymMat::from_fn(4, |i, j| if i == j { 2.0 + i as f64 } else { 0.3 });
        let inv = g.inverse().unwrap();
        let prod = g.mul(&inv);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[i][j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn det_2x2() {
        let g = SymMat::from_fn(2, |i, j| if i == j { 3.0 } else { 1.0 });
        assert!((g.det() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn cholesky_detects_indefinite() {
        let g = SymMat::from_fn(2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(!g.is_positive_definite());
        let h = SymMat::from_fn(2, |i, j| if i == j { 3.0 } else { 1.0 });
        assert!(h.is_positive_definite());
    }

    #[test]
    fn realify_identity_is_euclidean() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let h = HermitianForm2::new([[one, zero], [zero, one]]);
        let g = h.realify();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.get(i, j) - want).abs() < 1e-15);
            }
        }
    }
}
