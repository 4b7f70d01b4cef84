//! Native-space and uniform convergence of interpolants along a farthest-point
//! sequence, with the fitted rate against fill distance.

use rkhs_lab::lab::{check_holder_bound, fit_rate, run_convergence, ExperimentConfig, Quantity};

const CONFIG: &str = r#"{
    "name": "genexp-fps-1d",
    "kernel": {"family": "genexp", "shape": 0.5},
    "domain": {"lower": [0], "upper": [1], "grid": 1025},
    "sequence": {"generator": "farthest_point"},
    "target": {"kind": "random", "terms": 5},
    "n_schedule": [4, 8, 16, 32, 64, 128, 256],
    "seed": 5
}"#;

fn main() -> rkhs_lab::Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let out = run_convergence(&cfg)?;
    println!("‖f‖_K = {:.6}, alpha = {:.4}, C = {:.4}", out.target_norm, out.holder.alpha, out.holder.constant);
    println!("{:>5} {:>10} {:>11} {:>11} {:>11} {:>11}", "n", "h_n", "eta_n", "sup_err", "bound_k", "bound_hold");
    for r in &out.records {
        println!(
            "{:>5} {:>10.3e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
            r.n, r.h_n, r.eta_n, r.sup_err, r.bound_k, r.bound_holder
        );
    }
    let ok = check_holder_bound(&out.records, out.holder.constant, out.holder.alpha, out.target_norm)?;
    println!("uniform bound holds on {}/{} records", ok.iter().filter(|&&b| b).count(), ok.len());
    for q in [Quantity::SupErr, Quantity::EtaN] {
        let fit = fit_rate(&out.records, q)?;
        println!("{:<8} slope {:.3}  r² {:.3}  (alpha/2 = {:.3})", q.name(), fit.slope, fit.r_squared, out.holder.alpha / 2.0);
    }
    Ok(())
}
