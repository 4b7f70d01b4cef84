//! Sampled Hölder exponent and constant of the diagonal increment
//! `K(x,x) - 2K(x,y) + K(y,y) <= C ‖x - y‖^α`.

use rkhs_lab::kernels::estimate_holder;
use rkhs_lab::{Domain, Kernel};

fn main() -> rkhs_lab::Result<()> {
    let kernels = [
        Kernel::gaussian(5.0)?,
        Kernel::inverse_multiquadric(5.0)?,
        Kernel::generalized_exponential(0.25)?,
        Kernel::generalized_exponential(0.5)?,
        Kernel::generalized_exponential(1.0)?,
        Kernel::wendland31(0.5)?,
    ];
    println!("{:<12} {:>6} {:>9} {:>9} {:>9} {:>11}", "family", "d", "declared", "alpha", "capped", "C(capped)");
    for d in [1, 2] {
        let dom = Domain::unit_cube(d, 11)?;
        for k in kernels {
            let est = estimate_holder(&k, &dom, 2000, 42)?;
            let (alpha, c) = est.capped();
            println!(
                "{:<12} {:>6} {:>9.3} {:>9.4} {:>9.4} {:>11.4e}",
                k.family().tag(),
                d,
                k.family().declared_holder_exponent(),
                est.alpha,
                alpha,
                c
            );
        }
    }
    Ok(())
}
