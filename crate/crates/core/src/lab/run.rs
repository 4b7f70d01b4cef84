use serde::{Deserialize, Serialize};

use super::config::{Experiment, ExperimentConfig, HolderSource};
use super::{ConvergenceRecord, ResolvedSeeds};
use crate::error::{Error, Result};
use crate::geometry::{avoid_ball_generate, generate, PointSequence};
use crate::kernels::estimate_holder;
use crate::rkhs::{fit, regression_error_rkhs, rkhs_norm, sup_error, uniform_bound, FitOptions};

/// The `(α, C)` pair behind `bound_holder`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderUsed {
    pub alpha: f64,
    pub constant: f64,
    /// `"estimated"` or `"declared"`.
    pub source: &'static str,
    /// Uncapped slope of the estimator, if it ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_alpha: Option<f64>,
}

/// The schedule entry at which a solve failed; later entries were not run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub n: usize,
    pub message: String,
    /// Process exit code the failure maps to.
    pub exit_code: i32,
}

/// Per-record numbers that the CSV does not carry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    pub n: usize,
    pub max_abs_sample: f64,
    pub max_abs_coefficient: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<ConvergenceRecord>,
    pub diagnostics: Vec<RunDiagnostics>,
    pub target_norm: f64,
    pub holder: HolderUsed,
    pub seeds: ResolvedSeeds,
    pub sequence: PointSequence,
    pub failure: Option<RunFailure>,
}

impl RunOutcome {
    pub fn is_partial(&self) -> bool {
        self.failure.is_some()
    }
}

pub fn run_convergence(config: &ExperimentConfig) -> Result<RunOutcome> {
    run_experiment(&config.resolve()?)
}

/// Fits the interpolant on every prefix `X_n` of the schedule and records errors and bounds.
///
/// A solver failure stops the run; the records computed so far are returned with
/// [`RunOutcome::failure`] set.
pub fn run_experiment(exp: &Experiment) -> Result<RunOutcome> {
    let max_n = *exp.schedule.last().expect("schedule is non-empty");
    let sequence = match &exp.avoid_ball {
        Some(ball) => {
            avoid_ball_generate(&exp.generator, &exp.domain, max_n, &ball.center, ball.radius)?
        }
        None => generate(&exp.generator, &exp.domain, max_n)?,
    };
    let target_norm = rkhs_norm(&exp.target);

    let holder = match exp.holder {
        HolderSource::Estimated { pairs, seed } => {
            let est = estimate_holder(&exp.kernel, &exp.domain, pairs, seed)?;
            let (alpha, constant) = est.capped();
            HolderUsed {
                alpha,
                constant,
                source: "estimated",
                raw_alpha: Some(est.alpha),
            }
        }
        HolderSource::Declared { constant, alpha } => HolderUsed {
            alpha,
            constant,
            source: "declared",
            raw_alpha: None,
        },
    };

    let options = FitOptions::with_jitter(exp.jitter);
    let mut records = Vec::with_capacity(exp.schedule.len());
    let mut diagnostics = Vec::with_capacity(exp.schedule.len());
    let mut failure = None;
    for &n in &exp.schedule {
        let x = sequence.prefix(n);
        let values = exp.target.evaluate(&x)?;
        let interp = match fit(&exp.kernel, &x, &values, options) {
            Ok(s) => s,
            Err(e @ (Error::NotPositiveDefinite { .. } | Error::InterpolationResidual { .. })) => {
                failure = Some(RunFailure {
                    n,
                    exit_code: 2,
                    message: e.to_string(),
                });
                break;
            }
            Err(e) => return Err(e),
        };
        let h_n = sequence.fill_distance(n);
        let eta_n = regression_error_rkhs(&exp.target, &interp)?;
        let sup_err = sup_error(&exp.target, interp.combination(), &exp.domain)?.value;
        let bound_k = uniform_bound(eta_n, &exp.kernel, &exp.domain)?;
        let bound_holder = (2.0 * holder.constant * h_n.powf(holder.alpha)).sqrt() * target_norm;
        records.push(ConvergenceRecord {
            n,
            h_n,
            eta_n,
            sup_err,
            bound_k,
            bound_holder,
            cond_est: interp.gram().condition_estimate().unwrap_or(f64::NAN),
            jitter: interp.jitter(),
        });
        let abs_max = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        diagnostics.push(RunDiagnostics {
            n,
            max_abs_sample: abs_max(&values),
            max_abs_coefficient: abs_max(interp.coefficients()),
            max_residual: interp.max_residual(),
        });
    }

    Ok(RunOutcome {
        records,
        diagnostics,
        target_norm,
        holder,
        seeds: exp.seeds,
        sequence,
        failure,
    })
}
