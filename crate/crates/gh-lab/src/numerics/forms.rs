//! Numerical exterior calculus on coordinate charts of dimension 3 or 4.
//!
//! A k-form is handed in as a closure returning its components in the
//! lexicographic basis of increasing multi-indices (for D = 3, k = 2 that is
//! dx0∧dx1, dx0∧dx2, dx1∧dx2). The exterior derivative is a central-difference
//! antisymmetrized derivative; for polynomial components of degree <= 2 it is
//! exact to rounding.

use crate::error::GhError;

/// All strictly increasing k-subsets of 0..d, lexicographic.
pub fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, &mut Vec::new(), &mut out);
    out
}

fn index_of(combos: &[Vec<usize>], c: &[usize]) -> usize {
    combos.iter().position(|x| x.as_slice() == c).expect("combination index")
}

/// Central-difference exterior derivative of a k-form in d variables.
///
/// `form(point)` must return one component per element of
/// `combinations(d, k)`. The result is ordered by `combinations(d, k + 1)`.
pub fn exterior_derivative(
    d: usize,
    k: usize,
    form: &dyn Fn(&[f64]) -> Vec<f64>,
    at: &[f64],
    step: f64,
) -> Result<Vec<f64>, GhError> {
    if step <= 0.0 {
        return Err(GhError::InvalidInput("step must be positive".into()));
    }
    if !(1..=2).contains(&k) || !(3..=4).contains(&d) || at.len() != d {
        return Err(GhError::InvalidInput("supported: d in {3,4}, k in {1,2}".into()));
    }
    let k_combos = combinations(d, k);
    let out_combos = combinations(d, k + 1);

    // Partial derivatives of every component along every axis.
    let mut partials = vec![vec![0.0; k_combos.len()]; d];
    for axis in 0..d {
        let mut plus = at.to_vec();
        let mut minus = at.to_vec();
        plus[axis] += step;
        minus[axis] -= step;
        let fp = form(&plus);
        let fm = form(&minus);
        if fp.len() != k_combos.len() || fm.len() != k_combos.len() {
            return Err(GhError::InvalidInput("component count mismatch".into()));
        }
        for c in 0..k_combos.len() {
            partials[axis][c] = (fp[c] - fm[c]) / (2.0 * step);
        }
    }

    let mut out = vec![0.0; out_combos.len()];
    for (oi, combo) in out_combos.iter().enumerate() {
        let mut s = 0.0;
        for (m, &axis) in combo.iter().enumerate() {
            let mut rest = combo.clone();
            rest.remove(m);
            let ci = index_of(&k_combos, &rest);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * partials[axis][ci];
        }
        out[oi] = s;
    }
    Ok(out)
}

/// Euclidean Hodge star of a 1-form in R^3, as 2-form components
/// (dy∧dz, dz∧dx, dx∧dy) from (dx, dy, dz) coefficients.
pub fn star3_one_form(w: &[f64; 3]) -> [f64; 3] {
    *w
}

/// Convert cyclic 2-form components (dy∧dz, dz∧dx, dx∧dy) to the
/// lexicographic basis (dx∧dy, dx∧dz, dy∧dz) used by `exterior_derivative`.
pub fn cyclic_to_lex(w: &[f64; 3]) -> [f64; 3] {
    [w[2], -w[1], w[0]]
}

/// Inverse of [`cyclic_to_lex`].
pub fn lex_to_cyclic(w: &[f64; 3]) -> [f64; 3] {
    [w[2], -w[1], w[0]]
}
