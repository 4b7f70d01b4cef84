use rayon::prelude::*;

use super::{rkhs_norm, Interpolant, KernelCombination};
use crate::error::{Error, Result};
use crate::geometry::{Domain, GridMax};
use crate::kernels::Kernel;

/// `η = ‖s - f‖_K`, exact for a target given as a finite kernel combination.
pub fn regression_error_rkhs(target: &KernelCombination, interp: &Interpolant) -> Result<f64> {
    let residual = interp.combination().difference(target)?;
    Ok(rkhs_norm(&residual))
}

/// `max |s(x) - f(x)|` over the domain's evaluation grid.
pub fn sup_error(
    target: &KernelCombination,
    approx: &KernelCombination,
    domain: &Domain,
) -> Result<GridMax> {
    if !target.kernel().same_function(approx.kernel()) {
        return Err(Error::KernelMismatch);
    }
    for dim in [target.dim(), approx.dim()] {
        if dim != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: dim,
            });
        }
    }
    let d = domain.dim();
    let value = (0..domain.grid_len())
        .into_par_iter()
        .map_init(
            || vec![0.0; d],
            |buf, i| {
                domain.grid_point_into(i, buf);
                (approx.value_at(buf) - target.value_at(buf)).abs()
            },
        )
        .reduce(|| 0.0, f64::max);
    Ok(GridMax {
        value,
        spacing: domain.grid_spacing(),
    })
}

/// `‖e‖_K · max_x √K(x, x)`, which bounds `‖e‖_∞` for any `e` in the native space.
pub fn uniform_bound(error_k: f64, kernel: &Kernel, domain: &Domain) -> Result<f64> {
    if !(error_k >= 0.0) {
        return Err(Error::invalid("native-space error must be non-negative"));
    }
    let d = domain.dim();
    let diag_max = (0..domain.grid_len())
        .into_par_iter()
        .map_init(
            || vec![0.0; d],
            |buf, i| {
                domain.grid_point_into(i, buf);
                kernel.eval_unchecked(buf, buf)
            },
        )
        .reduce(|| 0.0, f64::max);
    Ok(error_k * diag_max.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointSet;
    use crate::rkhs::{fit, FitOptions};

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_flat(1, xs.to_vec()).unwrap()
    }

    #[test]
    fn target_in_span_is_reproduced() {
        let k = Kernel::gaussian(3.0).unwrap();
        let x = line(&[0.0, 0.4, 0.7, 1.0]);
        let target = KernelCombination::translate(k, &[0.4]).unwrap();
        let s = fit(&k, &x, &target.evaluate(&x).unwrap(), FitOptions::default()).unwrap();
        assert!(regression_error_rkhs(&target, &s).unwrap() < 1e-8);
        let dom = Domain::unit_cube(1, 201).unwrap();
        assert!(sup_error(&target, s.combination(), &dom).unwrap().value <= 1e-8);
    }

    #[test]
    fn two_point_closed_form() {
        let k = Kernel::gaussian(1.0).unwrap();
        let target = KernelCombination::translate(k, &[0.5]).unwrap();
        let x = line(&[0.0, 1.0]);
        let s = fit(&k, &x, &target.evaluate(&x).unwrap(), FitOptions::default()).unwrap();
        let eta = regression_error_rkhs(&target, &s).unwrap();
        let expected = 1.0 - 2.0 * (-0.5f64).exp() / (1.0 + (-1.0f64).exp());
        assert!((eta * eta - expected).abs() < 1e-14);
    }

    #[test]
    fn disjoint_support_gives_full_error() {
        let k = Kernel::wendland31(0.1).unwrap();
        let target = KernelCombination::translate(k, &[0.5]).unwrap();
        let x = line(&[0.0, 0.2, 0.8, 1.0]);
        let samples = target.evaluate(&x).unwrap();
        assert!(samples.iter().all(|&v| v == 0.0));
        let s = fit(&k, &x, &samples, FitOptions::default()).unwrap();
        assert_eq!(regression_error_rkhs(&target, &s).unwrap(), 1.0);
    }

    #[test]
    fn uniform_bound_values() {
        let k = Kernel::gaussian(1.0).unwrap();
        let dom = Domain::unit_cube(2, 11).unwrap();
        assert_eq!(uniform_bound(0.0, &k, &dom).unwrap(), 0.0);
        assert_eq!(uniform_bound(0.3, &k, &dom).unwrap(), 0.3);
        assert!(uniform_bound(-1.0, &k, &dom).is_err());
    }

    #[test]
    fn zero_target_zero_samples() {
        let k = Kernel::inverse_multiquadric(1.0).unwrap();
        let zero = KernelCombination::zero(k, 1);
        let x = line(&[0.2, 0.6]);
        let s = fit(&k, &x, &[0.0, 0.0], FitOptions::default()).unwrap();
        let dom = Domain::unit_cube(1, 51).unwrap();
        assert_eq!(sup_error(&zero, s.combination(), &dom).unwrap().value, 0.0);
        assert_eq!(regression_error_rkhs(&zero, &s).unwrap(), 0.0);
    }
}
