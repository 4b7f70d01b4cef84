//! Fill distance of nested point sequences on the unit square.

use rkhs_lab::geometry::{avoid_ball_generate, generate};
use rkhs_lab::{Domain, Generator};

fn main() -> rkhs_lab::Result<()> {
    let dom = Domain::unit_cube(2, 101)?;
    let generators = [
        Generator::FarthestPoint,
        Generator::Halton,
        Generator::UniformRandom { seed: 1 },
    ];
    let ns = [4, 16, 64, 256];

    print!("{:<16}", "generator");
    for n in ns {
        print!(" {:>10}", format!("h_{n}"));
    }
    println!();
    for g in &generators {
        let seq = generate(g, &dom, 256)?;
        print!("{:<16}", g.name());
        for n in ns {
            print!(" {:>10.5}", seq.fill_distance(n));
        }
        println!();
    }

    // A sequence that never enters a ball keeps its fill distance above the radius.
    let seq = avoid_ball_generate(&Generator::Halton, &dom, 256, &[0.5, 0.5], 0.15)?;
    println!(
        "halton avoiding B(0.5, 0.15): h_256 = {:.5} (grid gap {:.1e})",
        seq.fill_distance(256),
        dom.discretization_gap()
    );
    Ok(())
}
