//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least-squares line `y ≈ slope·x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewRecords {
            required: 2,
            found: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::invalid("all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// `cᵀ M c` for a symmetric positive semi-definite `m`, computed as `‖Lᵀ P c‖²`
/// from a diagonally pivoted Cholesky factorization.
///
/// The sum of squares is non-negative by construction and avoids the cancellation of
/// the plain bilinear sum when `c` has large entries of mixed sign. Elimination stops
/// once the largest remaining pivot falls below `n · ε · max diag`, i.e. when the rest
/// of the matrix is zero to working precision.
pub fn psd_quadratic_form(m: &DMatrix<f64>, c: &[f64]) -> f64 {
    let n = m.nrows();
    debug_assert_eq!(n, c.len());
    if n == 0 {
        return 0.0;
    }
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let max_diag = (0..n).map(|i| a[(i, i)]).fold(0.0, f64::max);
    let tol = n as f64 * f64::EPSILON * max_diag;
    let mut total = 0.0;
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if a[(i, i)] > a[(p, p)] {
                p = i;
            }
        }
        if a[(p, p)] <= tol {
            break;
        }
        if p != k {
            a.swap_rows(k, p);
            a.swap_columns(k, p);
            perm.swap(k, p);
        }
        let pivot = a[(k, k)].sqrt();
        a[(k, k)] = pivot;
        for i in k + 1..n {
            a[(i, k)] /= pivot;
        }
        // Full trailing update: later symmetric swaps read both triangles.
        for j in k + 1..n {
            let ljk = a[(j, k)];
            if ljk == 0.0 {
                continue;
            }
            for i in k + 1..n {
                a[(i, j)] -= a[(i, k)] * ljk;
            }
        }
        let mut proj = 0.0;
        for i in k..n {
            proj += a[(i, k)] * c[perm[i]];
        }
        total += proj * proj;
    }
    total
}

/// Ratio of the extreme eigenvalues of the SPD matrix `a`, estimated by power
/// iteration on `a` and inverse power iteration through its Cholesky factor.
pub fn condition_estimate(a: &DMatrix<f64>, chol: &Cholesky<f64, Dyn>) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 1.0;
    }
    let start = DVector::from_fn(n, |i, _| 1.0 + (i as f64 * 0.618_033_988_749_895).fract());
    let largest = power_iteration(start.clone(), |v| a * v);
    let inv_largest = power_iteration(start, |v| chol.solve(v));
    if inv_largest <= 0.0 {
        return f64::INFINITY;
    }
    (largest * inv_largest).max(1.0)
}

fn power_iteration(mut v: DVector<f64>, apply: impl Fn(&DVector<f64>) -> DVector<f64>) -> f64 {
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..200 {
        let w = apply(&v);
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 || !norm.is_finite() {
            return next;
        }
        v = w / norm;
        if (next - lambda).abs() <= 1e-10 * next.abs() {
            return next;
        }
        lambda = next;
    }
    lambda
}
