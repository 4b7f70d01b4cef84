use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rayon::prelude::*;

use super::Kernel;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::linalg;

/// Diagonal shifts tried by [`JitterPolicy::Auto`], in units of `Φ(0)`.
pub const AUTO_JITTER_LADDER: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];

/// What to do when the Gram matrix does not factor.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum JitterPolicy {
    /// Fail with `NotPositiveDefinite`.
    #[default]
    None,
    /// Always factor `A + λI`.
    Fixed(f64),
    /// Smallest shift of [`AUTO_JITTER_LADDER`] that factors.
    Auto,
}

impl std::str::FromStr for JitterPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(JitterPolicy::None),
            "auto" => Ok(JitterPolicy::Auto),
            other => match other.parse::<f64>() {
                Ok(l) if l >= 0.0 && l.is_finite() => Ok(JitterPolicy::Fixed(l)),
                _ => Err(Error::invalid(format!(
                    "jitter must be `none`, `auto` or a non-negative number, got `{other}`"
                ))),
            },
        }
    }
}

/// `A_{K,X} = (K(x_j, x_k))` for pairwise distinct centers, optionally with its
/// Cholesky factor.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    kernel: Kernel,
    centers: PointSet,
    entries: DMatrix<f64>,
    factor: Option<Cholesky<f64, Dyn>>,
    jitter: f64,
}

impl GramMatrix {
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// Diagonal shift `λ` used for the factorization (0 when none).
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn is_factorized(&self) -> bool {
        self.factor.is_some()
    }

    /// Lower-triangular `L` with `L Lᵀ = A + λI`.
    pub fn lower(&self) -> Option<DMatrix<f64>> {
        self.factor.as_ref().map(|c| c.l())
    }

    pub fn cholesky(&self) -> Option<&Cholesky<f64, Dyn>> {
        self.factor.as_ref()
    }

    /// Solves `(A + λI) c = rhs` with the stored factor.
    pub fn solve(&self, rhs: &[f64]) -> Result<DVector<f64>> {
        let chol = self
            .factor
            .as_ref()
            .ok_or_else(|| Error::invalid("Gram matrix has not been factorized"))?;
        if rhs.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: rhs.len(),
            });
        }
        Ok(chol.solve(&DVector::from_column_slice(rhs)))
    }

    /// Estimated ratio of the extreme eigenvalues of the factored matrix.
    pub fn condition_estimate(&self) -> Option<f64> {
        let chol = self.factor.as_ref()?;
        let mut shifted = self.entries.clone();
        for i in 0..self.size() {
            shifted[(i, i)] += self.jitter;
        }
        Some(linalg::condition_estimate(&shifted, chol))
    }
}

/// Assembles the Gram matrix of `kernel` on `centers`.
pub fn assemble_gram(kernel: &Kernel, centers: &PointSet) -> Result<GramMatrix> {
    if centers.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    centers.ensure_distinct()?;
    Ok(GramMatrix {
        kernel: *kernel,
        centers: centers.clone(),
        entries: kernel_matrix(kernel, centers),
        factor: None,
        jitter: 0.0,
    })
}

/// Symmetric kernel matrix without the distinctness check. The upper triangle
/// is mirrored, so the result is exactly symmetric.
pub(crate) fn kernel_matrix(kernel: &Kernel, points: &PointSet) -> DMatrix<f64> {
    let n = points.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let pj = points.point(j);
            (j..n).map(|k| kernel.eval_unchecked(pj, points.point(k))).collect()
        })
        .collect();
    let mut m = DMatrix::zeros(n, n);
    for (j, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            m[(j, j + off)] = v;
            m[(j + off, j)] = v;
        }
    }
    m
}

/// Cross kernel matrix `(K(a_i, b_j))`.
pub(crate) fn cross_matrix(kernel: &Kernel, a: &PointSet, b: &PointSet) -> DMatrix<f64> {
    let rows: Vec<f64> = (0..a.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let ai = a.point(i);
            b.iter().map(move |bj| kernel.eval_unchecked(ai, bj))
        })
        .collect();
    DMatrix::from_row_slice(a.len(), b.len(), &rows)
}

/// Cholesky-factors `gram`, shifting the diagonal as `policy` allows.
///
/// Success certifies that the (shifted) matrix is numerically positive definite.
pub fn factorize(mut gram: GramMatrix, policy: JitterPolicy) -> Result<GramMatrix> {
    let scale = gram.kernel.diagonal();
    let candidates: Vec<f64> = match policy {
        JitterPolicy::None => vec![0.0],
        JitterPolicy::Fixed(l) => {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(Error::invalid("jitter must be non-negative"));
            }
            vec![l]
        }
        JitterPolicy::Auto => AUTO_JITTER_LADDER.iter().map(|f| f * scale).collect(),
    };
    let n = gram.size();
    for &lambda in &candidates {
        let mut shifted = gram.entries.clone();
        for i in 0..n {
            shifted[(i, i)] += lambda;
        }
        if let Some(chol) = Cholesky::new(shifted) {
            if chol.l_dirty().diagonal().iter().all(|d| *d > 0.0 && d.is_finite()) {
                gram.factor = Some(chol);
                gram.jitter = lambda;
                return Ok(gram);
            }
        }
    }
    Err(Error::NotPositiveDefinite {
        size: n,
        jitter: candidates.last().copied().unwrap_or(0.0),
    })
}
