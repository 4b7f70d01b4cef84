//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 Gram matrix not positive definite
//! (or interpolation residual too large), 3 duplicate points, 4 malformed config or
//! input file, 5 too few usable records for a rate fit, 64 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{read_points_csv, read_values_csv};
use crate::kernels::{JitterPolicy, Kernel, KernelSpec};
use crate::lab::{
    counterexample_report, fit_rate, read_records_csv, run_experiment, write_records_csv,
    ExperimentConfig, JitterSpec, Quantity, RateFit, ResolvedSeeds, RunOutcome,
};
use crate::plot::loglog_svg;
use crate::rkhs::{fit, rkhs_norm, FitOptions};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RKHS_LAB_OUT";
const DEFAULT_OUT_DIR: &str = "rkhs-out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_NOT_PD: i32 = 2;
pub const EXIT_DUPLICATES: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;
pub const EXIT_TOO_FEW: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "rkhs-lab", version, about = "Kernel interpolation and convergence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the kernel families and their declared Hölder exponents.
    Kernels {
        #[arg(long)]
        json: bool,
    },
    /// Fit an interpolant to sampled values and save it as JSON.
    Fit {
        /// Kernel spec as inline JSON or a path to a JSON file.
        #[arg(long)]
        kernel: String,
        /// CSV with header x1,...,xd.
        #[arg(long)]
        points: PathBuf,
        /// CSV with header `value`.
        #[arg(long)]
        values: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `none`, `auto` or a diagonal shift.
        #[arg(long, default_value = "none")]
        jitter: String,
        /// One step of iterative refinement.
        #[arg(long)]
        refine: bool,
    },
    /// Run a convergence experiment.
    Converge(RunArgs),
    /// Fit a log-log rate to a records CSV.
    Rate {
        csv: PathBuf,
        /// `sup_err` or `eta_n`.
        #[arg(long, default_value = "sup_err")]
        quantity: String,
    },
    /// Run the excluded-ball counterexample next to its control.
    Counterexample(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: $RKHS_LAB_OUT, else ./rkhs-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's jitter policy.
    #[arg(long)]
    jitter: Option<String>,
    /// Overrides the evaluation grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
}

/// Maps an error to its process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPositiveDefinite { .. } | Error::InterpolationResidual { .. } => EXIT_NOT_PD,
        Error::DuplicatePoints { .. } => EXIT_DUPLICATES,
        Error::Config(_)
        | Error::Json(_)
        | Error::Csv(_)
        | Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::EmptyPointSet
        | Error::KernelMismatch => EXIT_CONFIG,
        Error::TooFewRecords { .. } => EXIT_TOO_FEW,
        _ => EXIT_OTHER,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Kernels { json } => cmd_kernels(json, out),
        Command::Fit {
            kernel,
            points,
            values,
            out: path,
            jitter,
            refine,
        } => cmd_fit(&kernel, &points, &values, &path, &jitter, refine, out),
        Command::Converge(args) => cmd_converge(&args, out, err),
        Command::Rate { csv, quantity } => cmd_rate(&csv, &quantity, out, err),
        Command::Counterexample(args) => cmd_counterexample(&args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[derive(Serialize)]
struct KernelRow {
    family: &'static str,
    profile: &'static str,
    parameter: &'static str,
    /// A number, or the name of the parameter it equals.
    declared_alpha: serde_json::Value,
}

fn kernel_rows() -> Vec<KernelRow> {
    let one = serde_json::json!(1.0);
    vec![
        KernelRow {
            family: "gaussian",
            profile: "exp(-(shape*r)^2)",
            parameter: "shape > 0",
            declared_alpha: one.clone(),
        },
        KernelRow {
            family: "imq",
            profile: "(1+(shape*r)^2)^(-1/2)",
            parameter: "shape > 0",
            declared_alpha: one.clone(),
        },
        KernelRow {
            family: "genexp",
            profile: "exp(-r^shape)",
            parameter: "shape in (0,1]",
            declared_alpha: serde_json::json!("shape"),
        },
        KernelRow {
            family: "wendland31",
            profile: "(1-r/support)_+^4 (4r/support+1)",
            parameter: "support > 0, d <= 3",
            declared_alpha: one,
        },
    ]
}

fn cmd_kernels(json: bool, out: &mut dyn Write) -> Result<i32> {
    let rows = kernel_rows();
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
    } else {
        writeln!(out, "{:<12} {:<36} {:<22} {}", "family", "profile", "parameter", "alpha")?;
        for r in &rows {
            let alpha = match &r.declared_alpha {
                serde_json::Value::String(s) => s.clone(),
                v => v.to_string(),
            };
            writeln!(out, "{:<12} {:<36} {:<22} {}", r.family, r.profile, r.parameter, alpha)?;
        }
    }
    Ok(EXIT_OK)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn parse_kernel_arg(arg: &str) -> Result<Kernel> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read_text(Path::new(arg))?
    };
    let spec: KernelSpec =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("kernel spec: {e}")))?;
    Kernel::from_spec(&spec)
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_fit(
    kernel: &str,
    points: &Path,
    values: &Path,
    path: &Path,
    jitter: &str,
    refine: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let kernel = parse_kernel_arg(kernel)?;
    let jitter: JitterPolicy = jitter.parse()?;
    let x = read_points_csv(read_text(points)?.as_bytes())?;
    let v = read_values_csv(read_text(values)?.as_bytes())?;
    let s = fit(&kernel, &x, &v, FitOptions { jitter, refine })?;
    let json = serde_json::to_string_pretty(&s.saved())?;
    write_atomic(path, format!("{json}\n").as_bytes())?;
    writeln!(out, "norm_K     {:.15e}", rkhs_norm(s.combination()))?;
    writeln!(out, "residual   {:.3e}", s.max_residual())?;
    writeln!(out, "jitter     {:e}", s.jitter())?;
    writeln!(out, "wrote      {}", path.display())?;
    Ok(EXIT_OK)
}

fn out_dir(arg: &Option<PathBuf>) -> PathBuf {
    arg.clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_json(&read_text(&args.config)?)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(j) = &args.jitter {
        cfg.jitter = JitterSpec(j.parse()?);
    }
    if let Some(grid) = args.grid {
        cfg.domain.grid = grid;
    }
    Ok(cfg)
}

/// Everything needed to reproduce a run's output.
#[derive(Serialize)]
struct RunManifest<'a> {
    config_path: String,
    out_dir: String,
    timestamp_unix: u64,
    tool_version: &'static str,
    seeds: ResolvedSeeds,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<&'a crate::lab::RunFailure>,
    target_norm: f64,
    holder: crate::lab::HolderUsed,
    /// The configuration after command-line overrides.
    config: &'a ExperimentConfig,
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn records_bytes(outcome: &RunOutcome) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_records_csv(&outcome.records, &mut buf)?;
    Ok(buf)
}

fn write_rate(dir: &Path, name: &str, fit: &Result<RateFit>) -> Result<()> {
    let json = match fit {
        Ok(f) => serde_json::to_string_pretty(f)?,
        Err(e) => serde_json::to_string_pretty(&serde_json::json!({ "error": e.to_string() }))?,
    };
    write_atomic(&dir.join(name), format!("{json}\n").as_bytes())
}

fn print_records(out: &mut dyn Write, outcome: &RunOutcome) -> Result<()> {
    writeln!(
        out,
        "{:>6} {:>11} {:>11} {:>11} {:>11} {:>11} {:>10} {:>8}",
        "n", "h_n", "eta_n", "sup_err", "bound_k", "bound_hold", "cond_est", "jitter"
    )?;
    for r in &outcome.records {
        writeln!(
            out,
            "{:>6} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>10.2e} {:>8.0e}",
            r.n, r.h_n, r.eta_n, r.sup_err, r.bound_k, r.bound_holder, r.cond_est, r.jitter
        )?;
    }
    Ok(())
}

fn cmd_converge(args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(args)?;
    let exp = cfg.resolve()?;
    let dir = out_dir(&args.out);
    let outcome = run_experiment(&exp)?;

    write_atomic(&dir.join("records.csv"), &records_bytes(&outcome)?)?;
    let rate = fit_rate(&outcome.records, Quantity::SupErr);
    write_rate(&dir, "rate.json", &rate)?;
    write_rate(&dir, "rate_eta.json", &fit_rate(&outcome.records, Quantity::EtaN))?;
    let title = format!("{} ({}, {})", exp.name, exp.kernel.family().tag(), exp.generator.name());
    write_atomic(
        &dir.join("plot.svg"),
        loglog_svg(&outcome.records, outcome.holder.alpha, &title).as_bytes(),
    )?;
    let manifest = RunManifest {
        config_path: args.config.display().to_string(),
        out_dir: dir.display().to_string(),
        timestamp_unix: timestamp(),
        tool_version: env!("CARGO_PKG_VERSION"),
        seeds: outcome.seeds,
        status: if outcome.is_partial() { "partial" } else { "complete" },
        failure: outcome.failure.as_ref(),
        target_norm: outcome.target_norm,
        holder: outcome.holder,
        config: &cfg,
    };
    write_atomic(
        &dir.join("manifest.json"),
        format!("{}\n", serde_json::to_string_pretty(&manifest)?).as_bytes(),
    )?;

    print_records(out, &outcome)?;
    writeln!(out, "target norm {:.6e}", outcome.target_norm)?;
    writeln!(
        out,
        "holder      alpha={:.4} C={:.4e} ({})",
        outcome.holder.alpha, outcome.holder.constant, outcome.holder.source
    )?;
    match &rate {
        Ok(f) => writeln!(out, "rate        sup_err slope {:.4} (r^2 {:.4})", f.slope, f.r_squared)?,
        Err(e) => writeln!(out, "rate        unavailable: {e}")?,
    }
    writeln!(out, "wrote       {}", dir.display())?;
    if let Some(f) = &outcome.failure {
        writeln!(err, "error: run stopped at n = {}: {}", f.n, f.message)?;
        writeln!(err, "partial results written; manifest status is `partial`")?;
        return Ok(f.exit_code);
    }
    Ok(EXIT_OK)
}

fn cmd_rate(csv: &Path, quantity: &str, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let quantity: Quantity = quantity.parse()?;
    let records = read_records_csv(read_text(csv)?.as_bytes())?;
    let fit = fit_rate(&records, quantity)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&fit)?)?;
    if fit.slope.abs() < 0.05 {
        writeln!(
            err,
            "warning: slope {:.3e} is essentially zero; {} is not decaying with h_n",
            fit.slope,
            quantity.name()
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_counterexample(args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(args)?;
    let report = counterexample_report(&cfg)?;
    let dir = out_dir(&args.out);
    write_atomic(&dir.join("records_avoid.csv"), &records_bytes(&report.avoiding)?)?;
    write_atomic(&dir.join("records_control.csv"), &records_bytes(&report.control)?)?;
    let text = report.render();
    write_atomic(&dir.join("report.txt"), text.as_bytes())?;
    write!(out, "{text}")?;
    writeln!(out, "wrote {}", dir.display())?;
    if let Some(f) = report.avoiding.failure.as_ref().or(report.control.failure.as_ref()) {
        writeln!(err, "error: run stopped at n = {}: {}", f.n, f.message)?;
        return Ok(f.exit_code);
    }
    Ok(if report.holds() { EXIT_OK } else { EXIT_OTHER })
}
