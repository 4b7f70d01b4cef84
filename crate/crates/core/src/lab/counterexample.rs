//! A compactly supported target hidden inside a ball the sampling never enters.
//!
//! Every sample of the target is zero, so every interpolant is zero and the
//! native-space error stays at `‖f‖_K` however small the step of the sampled
//! region gets. A control run without the excluded ball shows the same target is
//! otherwise learnable.

use std::fmt::Write as _;

use serde::Serialize;

use super::config::{Experiment, ExperimentConfig};
use super::run::{run_experiment, RunOutcome};
use crate::error::{Error, Result};
use crate::geometry::distance;
use crate::kernels::Family;

/// Slack for `|η_n - ‖f‖_K|`.
const ETA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleRow {
    pub n: usize,
    pub h_avoid: f64,
    pub eta_avoid: f64,
    pub h_control: Option<f64>,
    pub eta_control: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub target_norm: f64,
    pub rows: Vec<CounterexampleRow>,
    /// All samples of the target on the avoiding sequence are exactly zero.
    pub samples_zero: bool,
    /// All interpolant coefficients are exactly zero.
    pub interpolants_zero: bool,
    /// `|η_n - ‖f‖_K| <= 1e-12` on every avoiding record.
    pub eta_constant: bool,
    /// Control error at the largest `n` over `‖f‖_K`, the error of the zero interpolant.
    pub control_ratio: Option<f64>,
    pub avoiding: RunOutcome,
    pub control: RunOutcome,
}

impl CounterexampleReport {
    /// The avoiding run is stuck at `‖f‖_K` while the control run decays at least tenfold.
    pub fn holds(&self) -> bool {
        self.samples_zero
            && self.interpolants_zero
            && self.eta_constant
            && self.avoiding.failure.is_none()
            && self.control_ratio.is_some_and(|r| r < 0.1)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "target norm ‖f‖_K = {:.15}", self.target_norm);
        let _ = writeln!(
            s,
            "{:>6}  {:>12}  {:>18}  {:>12}  {:>12}",
            "n", "h (avoid)", "eta (avoid)", "h (control)", "eta (control)"
        );
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.4e}"));
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>6}  {:>12.4e}  {:>18.15}  {:>12}  {:>12}",
                r.n,
                r.h_avoid,
                r.eta_avoid,
                opt(r.h_control),
                opt(r.eta_control)
            );
        }
        let yes = |b: bool| if b { "yes" } else { "NO" };
        let _ = writeln!(s, "samples all zero:        {}", yes(self.samples_zero));
        let _ = writeln!(s, "interpolants all zero:   {}", yes(self.interpolants_zero));
        let _ = writeln!(s, "eta_n = ‖f‖_K (±1e-12):  {}", yes(self.eta_constant));
        let _ = writeln!(
            s,
            "control eta_last / ‖f‖_K: {}",
            opt(self.control_ratio)
        );
        s
    }
}

fn check_setup(exp: &Experiment) -> Result<()> {
    let Family::Wendland31 { support } = exp.kernel.family() else {
        return Err(Error::config(
            "the counterexample needs a compactly supported (wendland31) kernel",
        ));
    };
    let ball = exp
        .avoid_ball
        .as_ref()
        .ok_or_else(|| Error::config("the counterexample needs `sequence.avoid_ball`"))?;
    for (j, y) in exp.target.centers().iter().enumerate() {
        let reach = distance(y, &ball.center) + support;
        if reach > ball.radius {
            return Err(Error::config(format!(
                "support of target term {j} reaches {reach} from the ball center, beyond the radius {}",
                ball.radius
            )));
        }
    }
    Ok(())
}

/// Runs the avoiding experiment and its control and checks the counterexample claims.
pub fn counterexample_report(config: &ExperimentConfig) -> Result<CounterexampleReport> {
    let exp = config.resolve()?;
    check_setup(&exp)?;
    let avoiding = run_experiment(&exp)?;
    let control = run_experiment(&Experiment {
        avoid_ball: None,
        ..exp.clone()
    })?;

    let samples_zero = avoiding.diagnostics.iter().all(|d| d.max_abs_sample == 0.0);
    let interpolants_zero = avoiding
        .diagnostics
        .iter()
        .all(|d| d.max_abs_coefficient == 0.0);
    let eta_constant = avoiding
        .records
        .iter()
        .all(|r| (r.eta_n - avoiding.target_norm).abs() <= ETA_TOLERANCE);
    let control_ratio = match control.records.last() {
        Some(r) if control.target_norm > 0.0 => Some(r.eta_n / control.target_norm),
        _ => None,
    };
    let rows = avoiding
        .records
        .iter()
        .map(|r| {
            let c = control.records.iter().find(|c| c.n == r.n);
            CounterexampleRow {
                n: r.n,
                h_avoid: r.h_n,
                eta_avoid: r.eta_n,
                h_control: c.map(|c| c.h_n),
                eta_control: c.map(|c| c.eta_n),
            }
        })
        .collect();

    Ok(CounterexampleReport {
        target_norm: avoiding.target_norm,
        rows,
        samples_zero,
        interpolants_zero,
        eta_constant,
        control_ratio,
        avoiding,
        control,
    })
}
