//! A compactly supported target that a ball-avoiding sequence never sees: every
//! interpolant is zero, so the native-space error never moves.

use rkhs_lab::lab::{counterexample_report, ExperimentConfig};

const CONFIG: &str = r#"{
    "kernel": {"family": "wendland31", "shape": 0.1},
    "domain": {"lower": [0], "upper": [1], "grid": 1001},
    "sequence": {
        "generator": "halton",
        "avoid_ball": {"center": [0.5], "radius": 0.1}
    },
    "target": {"kind": "explicit", "centers": [[0.5]], "coefficients": [1]},
    "n_schedule": [8, 16, 32, 64, 128, 256],
    "jitter": "auto"
}"#;

fn main() -> rkhs_lab::Result<()> {
    let report = counterexample_report(&ExperimentConfig::from_json(CONFIG)?)?;
    print!("{}", report.render());
    println!("phenomenon reproduced: {}", report.holds());
    Ok(())
}
