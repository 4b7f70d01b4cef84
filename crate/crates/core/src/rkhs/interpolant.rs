use serde::{Deserialize, Serialize};

use super::KernelCombination;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::kernels::{assemble_gram, factorize, GramMatrix, JitterPolicy, Kernel, KernelSpec};

/// Relative part of the interpolation tolerance `1e-8 · (1 + max|f_X|)`.
pub const INTERPOLATION_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FitOptions {
    pub jitter: JitterPolicy,
    /// One step of iterative refinement against the factored system.
    pub refine: bool,
}

impl FitOptions {
    pub fn with_jitter(jitter: JitterPolicy) -> Self {
        FitOptions {
            jitter,
            ..Default::default()
        }
    }
}

/// The kernel interpolant `s_{f,X} = Σ c_j K(x_j, ·)` with `A_{K,X} c = f_X`.
#[derive(Debug, Clone)]
pub struct Interpolant {
    combination: KernelCombination,
    gram: GramMatrix,
    sample_values: Vec<f64>,
    max_residual: f64,
}

impl Interpolant {
    pub fn combination(&self) -> &KernelCombination {
        &self.combination
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn coefficients(&self) -> &[f64] {
        self.combination.coefficients()
    }

    pub fn centers(&self) -> &PointSet {
        self.combination.centers()
    }

    pub fn kernel(&self) -> &Kernel {
        self.combination.kernel()
    }

    pub fn sample_values(&self) -> &[f64] {
        &self.sample_values
    }

    pub fn jitter(&self) -> f64 {
        self.gram.jitter()
    }

    /// `max_k |s(x_k) - f(x_k)|`.
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    pub fn tolerance(&self) -> f64 {
        interpolation_tolerance(&self.sample_values)
    }

    pub fn evaluate(&self, points: &PointSet) -> Result<Vec<f64>> {
        self.combination.evaluate(points)
    }

    pub fn saved(&self) -> SavedInterpolant {
        SavedInterpolant {
            kernel: self.kernel().spec(),
            centers: self.centers().to_rows(),
            coefficients: self.coefficients().to_vec(),
            jitter: self.jitter(),
        }
    }
}

fn interpolation_tolerance(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    INTERPOLATION_TOLERANCE * (1.0 + scale)
}

/// Fits the interpolant to `values` at `points`.
///
/// Without jitter the interpolation conditions are enforced: a residual above
/// `1e-8 · (1 + max|f_X|)` is an error. With jitter the system solved is
/// `(A + λI) c = f_X`; its residual is reported but not enforced.
pub fn fit(
    kernel: &Kernel,
    points: &PointSet,
    values: &[f64],
    options: FitOptions,
) -> Result<Interpolant> {
    if points.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("sample values must be finite"));
    }
    let gram = factorize(assemble_gram(kernel, points)?, options.jitter)?;
    let mut coeffs = gram.solve(values)?;
    if options.refine {
        let mut shifted = gram.entries().clone();
        for i in 0..gram.size() {
            shifted[(i, i)] += gram.jitter();
        }
        let residual = nalgebra::DVector::from_column_slice(values) - &shifted * &coeffs;
        coeffs += gram.solve(residual.as_slice())?;
    }
    let combination = KernelCombination {
        kernel: *kernel,
        centers: points.clone(),
        coefficients: coeffs.as_slice().to_vec(),
    };
    let fitted = combination.evaluate(points)?;
    let max_residual = fitted
        .iter()
        .zip(values)
        .map(|(s, f)| (s - f).abs())
        .fold(0.0, f64::max);
    let tolerance = interpolation_tolerance(values);
    if gram.jitter() == 0.0 && !(max_residual <= tolerance) {
        return Err(Error::InterpolationResidual {
            residual: max_residual,
            tolerance,
        });
    }
    Ok(Interpolant {
        combination,
        gram,
        sample_values: values.to_vec(),
        max_residual,
    })
}

/// On-disk form: `{"kernel": ..., "centers": [[...]], "coefficients": [...], "jitter": λ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SavedInterpolant {
    pub kernel: KernelSpec,
    pub centers: Vec<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub jitter: f64,
}

impl SavedInterpolant {
    pub fn into_combination(self) -> Result<KernelCombination> {
        let kernel = Kernel::from_spec(&self.kernel)?;
        let centers = PointSet::from_rows(&self.centers)?;
        KernelCombination::new(kernel, centers, self.coefficients)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_flat(1, xs.to_vec()).unwrap()
    }

    #[test]
    fn single_point_fit() {
        let k = Kernel::gaussian(1.0).unwrap();
        let s = fit(&k, &line(&[0.3]), &[2.5], FitOptions::default()).unwrap();
        assert_eq!(s.coefficients(), &[2.5]);
    }

    #[test]
    fn symmetric_two_point_fit() {
        let k = Kernel::gaussian(1.0).unwrap();
        let v = (-0.25f64).exp();
        let s = fit(&k, &line(&[0.0, 1.0]), &[v, v], FitOptions::default()).unwrap();
        let expected = v / (1.0 + (-1.0f64).exp());
        for c in s.coefficients() {
            assert!((c - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_data_gives_zero_interpolant() {
        let k = Kernel::wendland31(0.5).unwrap();
        let s = fit(&k, &line(&[0.0, 0.3, 0.8]), &[0.0; 3], FitOptions::default()).unwrap();
        assert!(s.coefficients().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn mismatched_lengths() {
        let k = Kernel::gaussian(1.0).unwrap();
        assert!(matches!(
            fit(&k, &line(&[0.0, 1.0]), &[1.0], FitOptions::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn interpolation_conditions_hold() {
        let k = Kernel::inverse_multiquadric(4.0).unwrap();
        let x = line(&[0.0, 0.13, 0.4, 0.55, 0.71, 1.0]);
        let f = [1.0, -0.5, 0.25, 3.0, 0.0, -2.0];
        for refine in [false, true] {
            let s = fit(&k, &x, &f, FitOptions { refine, ..Default::default() }).unwrap();
            let at_centers = s.evaluate(&x).unwrap();
            for (a, b) in at_centers.iter().zip(&f) {
                assert!((a - b).abs() <= 1e-8 * 4.0);
            }
            assert!(s.max_residual() <= s.tolerance());
        }
    }

    #[test]
    fn saved_form_round_trips_exactly() {
        let k = Kernel::generalized_exponential(0.5).unwrap();
        let x = PointSet::from_flat(2, vec![0.1, 0.2, 0.7, 0.4, 0.3, 0.9]).unwrap();
        let s = fit(&k, &x, &[0.3, -1.0, 1.0 / 3.0], FitOptions::default()).unwrap();
        let json = serde_json::to_string(&s.saved()).unwrap();
        let back: SavedInterpolant = serde_json::from_str(&json).unwrap();
        let g = back.into_combination().unwrap();
        let probe = PointSet::from_flat(2, vec![0.5, 0.5, 0.0, 1.0]).unwrap();
        assert_eq!(g.evaluate(&probe).unwrap(), s.evaluate(&probe).unwrap());
    }
}
