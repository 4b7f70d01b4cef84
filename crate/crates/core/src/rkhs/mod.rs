//! Finite kernel combinations `g = Σ c_j K(y_j, ·)` and their native-space geometry.
//!
//! Inner products follow from `(K_x, K_y)_K = K(x, y)` extended bilinearly, so every
//! quantity in this module is exact up to rounding. Interpolants are combinations
//! whose centers are the sample points.

mod functionals;
mod interpolant;

pub use functionals::{regression_error_rkhs, sup_error, uniform_bound};
pub use interpolant::{fit, FitOptions, Interpolant, SavedInterpolant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{distance, PointSet, DUPLICATE_THRESHOLD};
use crate::kernels::gram::{cross_matrix, kernel_matrix};
use crate::kernels::Kernel;
use crate::linalg::psd_quadratic_form;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelCombination {
    kernel: Kernel,
    centers: PointSet,
    coefficients: Vec<f64>,
}

impl KernelCombination {
    pub fn new(kernel: Kernel, centers: PointSet, coefficients: Vec<f64>) -> Result<Self> {
        if centers.len() != coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: centers.len(),
                found: coefficients.len(),
            });
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        centers.ensure_distinct()?;
        Ok(KernelCombination {
            kernel,
            centers,
            coefficients,
        })
    }

    /// The single translate `K(y, ·)`.
    pub fn translate(kernel: Kernel, center: &[f64]) -> Result<Self> {
        KernelCombination::new(kernel, PointSet::from_rows(&[center])?, vec![1.0])
    }

    /// The zero function, represented with no centers.
    pub fn zero(kernel: Kernel, dim: usize) -> Self {
        KernelCombination {
            kernel,
            centers: PointSet::new(dim),
            coefficients: Vec::new(),
        }
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.centers.dim()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `g(x)`; the sum runs over the centers in storage order.
    #[inline]
    pub fn value_at(&self, x: &[f64]) -> f64 {
        self.centers
            .iter()
            .zip(&self.coefficients)
            .map(|(y, c)| c * self.kernel.eval_unchecked(y, x))
            .sum()
    }

    /// Pointwise values at `points`. Each value is an independent sum, so the
    /// parallel result equals the sequential one bit for bit.
    pub fn evaluate(&self, points: &PointSet) -> Result<Vec<f64>> {
        self.check_dim(points.dim())?;
        Ok((0..points.len())
            .into_par_iter()
            .map(|i| self.value_at(points.point(i)))
            .collect())
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &KernelCombination) -> Result<()> {
        if !self.kernel.same_function(&other.kernel) {
            return Err(Error::KernelMismatch);
        }
        self.check_dim(other.dim())
    }

    /// `self - other`. Centers are concatenated; a center of `other` within
    /// [`DUPLICATE_THRESHOLD`] of one of `self` has its coefficient merged instead.
    pub fn difference(&self, other: &KernelCombination) -> Result<KernelCombination> {
        self.check_compatible(other)?;
        let mut centers = self.centers.clone();
        let mut coefficients = self.coefficients.clone();
        for (y, c) in other.centers.iter().zip(&other.coefficients) {
            match self
                .centers
                .iter()
                .position(|x| distance(x, y) < DUPLICATE_THRESHOLD)
            {
                Some(j) => coefficients[j] -= c,
                None => {
                    centers.push(y)?;
                    coefficients.push(-c);
                }
            }
        }
        Ok(KernelCombination {
            kernel: self.kernel,
            centers,
            coefficients,
        })
    }

    pub fn scaled(&self, factor: f64) -> KernelCombination {
        KernelCombination {
            kernel: self.kernel,
            centers: self.centers.clone(),
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// Same centers, different coefficients.
    pub fn with_coefficients(&self, coefficients: Vec<f64>) -> Result<KernelCombination> {
        KernelCombination::new(self.kernel, self.centers.clone(), coefficients)
    }

    /// `‖g‖²_K = cᵀ A_{K,Y} c`.
    pub fn norm_squared(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let gram = kernel_matrix(&self.kernel, &self.centers);
        psd_quadratic_form(&gram, &self.coefficients)
    }
}

/// `(g1, g2)_K = c1ᵀ M c2` with `M_jk = K(y1_j, y2_k)`.
pub fn rkhs_inner(g1: &KernelCombination, g2: &KernelCombination) -> Result<f64> {
    g1.check_compatible(g2)?;
    if g1.is_empty() || g2.is_empty() {
        return Ok(0.0);
    }
    let m = cross_matrix(&g1.kernel, &g1.centers, &g2.centers);
    let mut total = 0.0;
    for (j, c1) in g1.coefficients.iter().enumerate() {
        let row: f64 = m
            .row(j)
            .iter()
            .zip(&g2.coefficients)
            .map(|(k, c2)| k * c2)
            .sum();
        total += c1 * row;
    }
    Ok(total)
}

/// `‖g‖_K`, never negative.
///
/// The quadratic form is evaluated through a pivoted Cholesky factor of the
/// centers' Gram matrix rather than as `√(g, g)_K`: both are the same number in exact
/// arithmetic, but the factored form has no cancellation, which matters once the
/// norm of a difference is many orders of magnitude below its parts.
pub fn rkhs_norm(g: &KernelCombination) -> f64 {
    g.norm_squared().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> Kernel {
        Kernel::gaussian(1.0).unwrap()
    }

    #[test]
    fn translate_inner_products() {
        let kx = KernelCombination::translate(gauss(), &[0.2]).unwrap();
        let ky = KernelCombination::translate(gauss(), &[0.7]).unwrap();
        assert_eq!(rkhs_inner(&kx, &kx).unwrap(), 1.0);
        assert_eq!(rkhs_inner(&kx, &ky).unwrap(), (-0.25f64).exp());
        assert_eq!(rkhs_inner(&kx, &ky).unwrap(), rkhs_inner(&ky, &kx).unwrap());
        assert_eq!(rkhs_norm(&kx), 1.0);
    }

    #[test]
    fn close_pair_norm() {
        let g = KernelCombination::new(
            gauss(),
            PointSet::from_flat(1, vec![0.0, 0.1]).unwrap(),
            vec![1.0, -1.0],
        )
        .unwrap();
        let expected = (2.0 - 2.0 * (-0.01f64).exp()).sqrt();
        assert!((rkhs_norm(&g) - expected).abs() < 1e-14);
        assert!((expected - 0.14107).abs() < 1e-5);
    }

    #[test]
    fn zero_combination() {
        let z = KernelCombination::zero(gauss(), 2);
        assert_eq!(rkhs_norm(&z), 0.0);
        let pts = PointSet::from_rows(&[[0.1, 0.2], [0.5, 0.5]]).unwrap();
        assert_eq!(z.evaluate(&pts).unwrap(), vec![0.0, 0.0]);
        let zeros = KernelCombination::new(gauss(), pts.clone(), vec![0.0, 0.0]).unwrap();
        assert_eq!(zeros.evaluate(&pts).unwrap(), vec![0.0, 0.0]);
        assert_eq!(rkhs_norm(&zeros), 0.0);
    }

    #[test]
    fn mismatched_kernels() {
        let a = KernelCombination::translate(gauss(), &[0.0]).unwrap();
        let b = KernelCombination::translate(Kernel::gaussian(2.0).unwrap(), &[0.0]).unwrap();
        assert!(matches!(rkhs_inner(&a, &b), Err(Error::KernelMismatch)));
        assert!(matches!(a.difference(&b), Err(Error::KernelMismatch)));
    }

    #[test]
    fn difference_merges_shared_centers() {
        let a = KernelCombination::new(
            gauss(),
            PointSet::from_flat(1, vec![0.0, 0.5]).unwrap(),
            vec![1.0, 2.0],
        )
        .unwrap();
        let b = KernelCombination::new(
            gauss(),
            PointSet::from_flat(1, vec![0.5, 0.9]).unwrap(),
            vec![2.0, 3.0],
        )
        .unwrap();
        let d = a.difference(&b).unwrap();
        assert_eq!(d.centers().to_rows(), vec![vec![0.0], vec![0.5], vec![0.9]]);
        assert_eq!(d.coefficients(), &[1.0, 0.0, -3.0]);
    }

    #[test]
    fn norm_matches_bilinear_form() {
        let g = KernelCombination::new(
            Kernel::inverse_multiquadric(2.0).unwrap(),
            PointSet::from_flat(2, vec![0.1, 0.2, 0.8, 0.3, 0.4, 0.9]).unwrap(),
            vec![0.7, -1.3, 0.4],
        )
        .unwrap();
        let via_inner = rkhs_inner(&g, &g).unwrap();
        assert!((rkhs_norm(&g).powi(2) - via_inner).abs() < 1e-13);
    }
}
