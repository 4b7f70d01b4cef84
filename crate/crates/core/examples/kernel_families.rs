//! Profiles, Gram matrices and native-space norms for every kernel family.

use rkhs_lab::geometry::PointSet;
use rkhs_lab::kernels::{assemble_gram, factorize};
use rkhs_lab::rkhs::{rkhs_inner, rkhs_norm};
use rkhs_lab::{JitterPolicy, Kernel, KernelCombination};

fn main() -> rkhs_lab::Result<()> {
    let kernels = [
        Kernel::gaussian(3.0)?,
        Kernel::inverse_multiquadric(3.0)?,
        Kernel::generalized_exponential(0.5)?,
        Kernel::wendland31(0.4)?,
    ];
    let x = PointSet::from_rows(&[[0.1], [0.35], [0.6], [0.9]])?;

    println!("{:<12} {:>9} {:>9} {:>9} {:>12}", "family", "K(r=.1)", "K(r=.3)", "K(r=.5)", "‖f‖_K");
    for k in kernels {
        let f = KernelCombination::new(k, x.clone(), vec![1.0, -0.5, 0.25, 2.0])?;
        println!(
            "{:<12} {:>9.5} {:>9.5} {:>9.5} {:>12.6}",
            k.family().tag(),
            k.profile(0.1),
            k.profile(0.3),
            k.profile(0.5),
            rkhs_norm(&f)
        );

        // ⟨f, K(y, ·)⟩ reproduces f(y).
        let y = [0.47];
        let probe = KernelCombination::translate(k, &y)?;
        let inner = rkhs_inner(&f, &probe)?;
        assert!((inner - f.value_at(&y)).abs() < 1e-12);

        let gram = factorize(assemble_gram(&k, &x)?, JitterPolicy::None)?;
        println!("{:<12} cond(A) ≈ {:.3e}", "", gram.condition_estimate().unwrap_or(f64::NAN));
    }
    Ok(())
}
