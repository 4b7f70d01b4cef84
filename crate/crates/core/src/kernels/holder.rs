//! Empirical local Hölder exponent and constant of kernel translates.
//!
//! Each sample draws an anchor `x` uniformly in the domain and a step `t` log-uniformly
//! in `[1e-4·r, r)`, then records the increment `|K_x(x) - K_x(x + t·u)|` for a random
//! unit direction `u`. Anchoring one end of the pair at `x` probes the kernel right at
//! the diagonal, where the translates of non-smooth kernels are least regular. The
//! exponent is the least-squares slope of `log|ΔK|` against `log t`; the constant is
//! the largest observed ratio `|ΔK| / t^α`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::Kernel;
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::linalg::fit_line;

/// Minimum number of sampled pairs.
pub const MIN_PAIRS: usize = 100;

/// Fraction of the domain diameter used as the Hölder radius.
pub const RADIUS_FRACTION: f64 = 0.1;

/// Smallest sampled step, relative to the radius.
const MIN_STEP_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderSample {
    pub distance: f64,
    pub increment: f64,
}

#[derive(Debug, Clone)]
pub struct HolderEstimate {
    pub alpha: f64,
    pub constant: f64,
    pub radius: f64,
    /// Samples with a nonzero increment, the ones the fit used.
    pub pairs_used: usize,
    samples: Vec<HolderSample>,
}

impl HolderEstimate {
    pub fn samples(&self) -> &[HolderSample] {
        &self.samples
    }

    /// Smallest constant covering every sample at exponent `alpha`.
    pub fn constant_for(&self, alpha: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.increment > 0.0)
            .map(|s| s.increment / s.distance.powf(alpha))
            .fold(0.0, f64::max)
    }

    /// `(α, C)` with `α` capped at 1 and `C` refitted for the capped exponent.
    /// Positive definite kernels cannot be Hölder of order above 1, so a larger
    /// slope only reflects a smooth profile at the sampled scales.
    pub fn capped(&self) -> (f64, f64) {
        if self.alpha <= 1.0 {
            (self.alpha, self.constant)
        } else {
            (1.0, self.constant_for(1.0))
        }
    }
}

/// Fits exponent and constant to `(distance, increment)` samples.
pub fn fit_holder(samples: Vec<HolderSample>, radius: f64) -> Result<HolderEstimate> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|s| s.increment > 0.0 && s.distance > 0.0)
        .map(|s| (s.distance.ln(), s.increment.ln()))
        .unzip();
    let distinct = xs.iter().any(|&x| x != xs[0]);
    if xs.len() < 2 || !distinct {
        return Err(Error::DegenerateKernel);
    }
    let line = fit_line(&xs, &ys)?;
    let mut est = HolderEstimate {
        alpha: line.slope,
        constant: 0.0,
        radius,
        pairs_used: xs.len(),
        samples,
    };
    est.constant = est.constant_for(est.alpha);
    Ok(est)
}

/// Estimates the local Hölder exponent and constant of `kernel` on `domain` from
/// `num_pairs` seeded samples with step below `0.1 · diameter`.
pub fn estimate_holder(
    kernel: &Kernel,
    domain: &Domain,
    num_pairs: usize,
    seed: u64,
) -> Result<HolderEstimate> {
    if num_pairs < MIN_PAIRS {
        return Err(Error::invalid(format!(
            "need at least {MIN_PAIRS} pairs, got {num_pairs}"
        )));
    }
    let radius = RADIUS_FRACTION * domain.diameter();
    let d = domain.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(num_pairs);
    let mut x = vec![0.0; d];
    let mut dir = vec![0.0; d];
    let mut y = vec![0.0; d];
    let budget = 1000 * num_pairs;
    let mut attempts = 0;
    while samples.len() < num_pairs {
        attempts += 1;
        if attempts > budget {
            return Err(Error::SamplingExhausted { attempts: budget });
        }
        for (xi, (a, b)) in x.iter_mut().zip(domain.lower().iter().zip(domain.upper())) {
            *xi = a + (b - a) * rng.random::<f64>();
        }
        let exponent = MIN_STEP_FRACTION.log10() * (1.0 - rng.random::<f64>());
        let step = radius * 10f64.powf(exponent).min(1.0 - f64::EPSILON);
        random_direction(&mut rng, &mut dir);
        let forward = step_inside(domain, &x, &dir, step, &mut y);
        if !forward && !step_inside(domain, &x, &dir, -step, &mut y) {
            continue;
        }
        let distance = crate::geometry::distance(&x, &y);
        if distance == 0.0 || distance >= radius {
            continue;
        }
        let increment = (kernel.eval_unchecked(&x, &x) - kernel.eval_unchecked(&x, &y)).abs();
        samples.push(HolderSample {
            distance,
            increment,
        });
    }
    fit_holder(samples, radius)
}

fn random_direction(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        for v in out.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

fn step_inside(domain: &Domain, x: &[f64], dir: &[f64], step: f64, out: &mut [f64]) -> bool {
    for (o, (xi, di)) in out.iter_mut().zip(x.iter().zip(dir)) {
        *o = xi + step * di;
    }
    domain.contains(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_samples() {
        let samples: Vec<_> = (1..50)
            .map(|i| {
                let d = i as f64 * 1e-3;
                HolderSample {
                    distance: d,
                    increment: 2.0 * d.powf(0.5),
                }
            })
            .collect();
        let est = fit_holder(samples, 0.1).unwrap();
        assert!((est.alpha - 0.5).abs() < 1e-12);
        assert!((est.constant - 2.0).abs() < 1e-10);
    }

    #[test]
    fn zero_increments_are_degenerate() {
        let samples = vec![
            HolderSample {
                distance: 0.01,
                increment: 0.0,
            };
            200
        ];
        assert!(matches!(fit_holder(samples, 0.1), Err(Error::DegenerateKernel)));
    }

    #[test]
    fn numerically_flat_kernel_is_degenerate() {
        let flat = Kernel::gaussian(1e-200).unwrap();
        let dom = Domain::unit_cube(1, 11).unwrap();
        assert!(matches!(
            estimate_holder(&flat, &dom, 200, 1),
            Err(Error::DegenerateKernel)
        ));
    }

    #[test]
    fn too_few_pairs_rejected() {
        let k = Kernel::gaussian(1.0).unwrap();
        let dom = Domain::unit_cube(1, 11).unwrap();
        assert!(estimate_holder(&k, &dom, 99, 0).is_err());
    }

    #[test]
    fn gaussian_is_at_least_lipschitz_and_capping_refits() {
        let k = Kernel::gaussian(1.0).unwrap();
        let dom = Domain::unit_cube(1, 11).unwrap();
        let est = estimate_holder(&k, &dom, 2000, 7).unwrap();
        assert!(est.alpha >= 0.9);
        let (a, c) = est.capped();
        assert!(a <= 1.0);
        for s in est.samples() {
            assert!(s.increment <= c * s.distance.powf(a) * (1.0 + 1e-12));
        }
    }
}
