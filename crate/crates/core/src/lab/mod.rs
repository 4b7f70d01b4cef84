//! Convergence experiments: configuration, runs, rate fits and bound checks.

mod config;
mod counterexample;
mod rate;
mod records;
mod run;
pub mod seeds;

pub use config::{
    default_schedule, BallSpec, Experiment, ExperimentConfig, GeneratorKind, HolderSource,
    HolderSpec, JitterSpec, SequenceSpec, TargetSpec,
};
pub use counterexample::{counterexample_report, CounterexampleReport, CounterexampleRow};
pub use rate::{check_holder_bound, fit_rate, Quantity, RateFit, RATE_FLOOR};
pub use records::{read_records_csv, write_records_csv, ConvergenceRecord, RECORDS_HEADER};
pub use run::{run_convergence, run_experiment, HolderUsed, RunDiagnostics, RunFailure, RunOutcome};
pub use seeds::ResolvedSeeds;
