//! Interpolates scattered samples, saves the result and reloads it.

use rkhs_lab::geometry::generate;
use rkhs_lab::rkhs::{fit, sup_error, SavedInterpolant};
use rkhs_lab::{Domain, FitOptions, Generator, JitterPolicy, Kernel, KernelCombination};

fn main() -> rkhs_lab::Result<()> {
    let k = Kernel::inverse_multiquadric(4.0)?;
    let dom = Domain::unit_cube(2, 81)?;
    let x = generate(&Generator::Halton, &dom, 60)?.prefix(60);
    let values: Vec<f64> = x.iter().map(|p| (3.0 * p[0]).sin() * (2.0 * p[1]).cos()).collect();

    let s = fit(&k, &x, &values, FitOptions::with_jitter(JitterPolicy::Auto))?;
    println!("centers        {}", s.centers().len());
    println!("jitter         {:e}", s.jitter());
    println!("max residual   {:.3e}", s.max_residual());
    println!("value at (0.5, 0.5) = {:.6}  (exact {:.6})", s.combination().value_at(&[0.5, 0.5]), 1.5f64.sin() * 1.0f64.cos());

    let json = serde_json::to_string(&s.saved()).expect("serializes");
    let back: SavedInterpolant = serde_json::from_str(&json).expect("parses");
    let g: KernelCombination = back.into_combination()?;
    let gap = sup_error(s.combination(), &g, &dom)?;
    println!("reload gap     {:.1e} over {} grid points", gap.value, dom.grid_len());
    Ok(())
}
