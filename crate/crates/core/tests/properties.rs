use proptest::prelude::*;

use rkhs_lab::geometry::{avoid_ball_generate, distance, fill_distance, generate, PointSet};
use rkhs_lab::kernels::{assemble_gram, factorize};
use rkhs_lab::rkhs::{fit, regression_error_rkhs, rkhs_inner, FitOptions, SavedInterpolant};
use rkhs_lab::{Domain, Generator, JitterPolicy, Kernel, KernelCombination};

fn any_kernel() -> impl Strategy<Value = Kernel> {
    prop_oneof![
        (0.1f64..50.0).prop_map(|e| Kernel::gaussian(e).unwrap()),
        (0.1f64..50.0).prop_map(|e| Kernel::inverse_multiquadric(e).unwrap()),
        (0.05f64..=1.0).prop_map(|a| Kernel::generalized_exponential(a).unwrap()),
        (0.01f64..2.0).prop_map(|r| Kernel::wendland31(r).unwrap()),
    ]
}

/// Shapes matched to a minimum separation of 1e-2.
fn separated_kernel() -> impl Strategy<Value = Kernel> {
    prop_oneof![
        (50.0f64..200.0).prop_map(|e| Kernel::gaussian(e).unwrap()),
        (50.0f64..200.0).prop_map(|e| Kernel::inverse_multiquadric(e).unwrap()),
        (0.05f64..=1.0).prop_map(|a| Kernel::generalized_exponential(a).unwrap()),
        (0.02f64..1.0).prop_map(|r| Kernel::wendland31(r).unwrap()),
    ]
}

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, d)
}

/// Greedy thinning of raw points to pairwise distance at least `sep`.
fn thin(raw: &[f64], d: usize, sep: f64) -> PointSet {
    let mut ps = PointSet::new(d);
    for p in raw.chunks(d) {
        if ps.iter().all(|q| distance(q, p) >= sep) {
            ps.push(p).unwrap();
        }
    }
    ps
}

fn points_in_cube(max: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=3, 1usize..=max)
        .prop_flat_map(|(d, n)| (Just(d), prop::collection::vec(0.0f64..1.0, d * n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kernel_is_exactly_symmetric(k in any_kernel(), (x, y) in (1usize..=3).prop_flat_map(|d| (point(d), point(d)))) {
        prop_assert_eq!(k.eval(&x, &y).unwrap(), k.eval(&y, &x).unwrap());
    }

    #[test]
    fn kernel_bounded_by_diagonal(k in any_kernel(), (x, y) in (1usize..=3).prop_flat_map(|d| (point(d), point(d)))) {
        let v = k.eval(&x, &y).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(k.eval(&x, &x).unwrap(), 1.0);
    }

    #[test]
    fn wendland_support_is_exact(rho in 0.01f64..2.0, t in 0.0f64..3.0) {
        let k = Kernel::wendland31(rho).unwrap();
        let r = t * rho;
        let v = k.eval(&[0.0], &[r]).unwrap();
        if r >= rho {
            prop_assert_eq!(v, 0.0);
        } else {
            prop_assert!(v > 0.0);
        }
    }

    #[test]
    fn separated_gram_factors_without_jitter(k in separated_kernel(), (d, raw) in points_in_cube(50)) {
        let x = thin(&raw, d, 1e-2);
        let gram = assemble_gram(&k, &x).unwrap();
        let e = gram.entries();
        for i in 0..x.len() {
            for j in 0..x.len() {
                prop_assert_eq!(e[(i, j)].to_bits(), e[(j, i)].to_bits());
            }
        }
        let g = factorize(gram, JitterPolicy::None);
        prop_assert!(g.is_ok(), "{:?} on {} points: {:?}", k.family(), x.len(), g.err());
        let g = g.unwrap();
        let l = g.lower().unwrap();
        let defect = (&l * l.transpose() - g.entries()).abs().max();
        prop_assert!(defect <= 1e-10 * g.entries().abs().max());
    }

    #[test]
    fn fill_distance_never_increases(
        d in 1usize..=3,
        seed in any::<u64>(),
        which in 0usize..3,
    ) {
        let dom = Domain::unit_cube(d, [41, 21, 9][d - 1]).unwrap();
        let generator = match which {
            0 => Generator::UniformRandom { seed },
            1 => Generator::Halton,
            _ => Generator::FarthestPoint,
        };
        let seq = generate(&generator, &dom, 40).unwrap();
        for w in seq.fill_distances().windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn avoid_ball_keeps_fill_distance_above_radius(
        seed in any::<u64>(),
        center_index in 0usize..41,
        radius in 0.02f64..0.3,
        which in 0usize..3,
    ) {
        let dom = Domain::unit_cube(1, 41).unwrap();
        let center = [center_index as f64 / 40.0];
        let generator = match which {
            0 => Generator::UniformRandom { seed },
            1 => Generator::Halton,
            _ => Generator::FarthestPoint,
        };
        let n = if which == 2 { 12 } else { 60 };
        let seq = avoid_ball_generate(&generator, &dom, n, &center, radius).unwrap();
        for p in seq.points().iter() {
            prop_assert!(distance(p, &center) >= radius);
        }
        for &h in seq.fill_distances() {
            prop_assert!(h >= radius);
        }
    }

    #[test]
    fn batch_evaluation_matches_pointwise(k in any_kernel(), (d, raw) in points_in_cube(20), coef_seed in prop::collection::vec(-1.0f64..1.0, 20)) {
        let x = thin(&raw, d, 1e-6);
        let c = coef_seed[..x.len()].to_vec();
        let g = KernelCombination::new(k, x.clone(), c).unwrap();
        let probe = thin(&raw.iter().map(|v| 1.0 - v).collect::<Vec<_>>(), d, 0.0);
        let batch = g.evaluate(&probe).unwrap();
        for (p, b) in probe.iter().zip(&batch) {
            prop_assert_eq!(g.value_at(p).to_bits(), b.to_bits());
        }
    }

    #[test]
    fn inner_product_is_symmetric(k in any_kernel(), (d, raw) in points_in_cube(12), c in prop::collection::vec(-1.0f64..1.0, 24)) {
        let half = raw.len() / d / 2 * d;
        prop_assume!(half > 0);
        let a = thin(&raw[..half], d, 1e-6);
        let b = thin(&raw[half..], d, 1e-6);
        let ga = KernelCombination::new(k, a.clone(), c[..a.len()].to_vec()).unwrap();
        let gb = KernelCombination::new(k, b.clone(), c[12..12 + b.len()].to_vec()).unwrap();
        let ab = rkhs_inner(&ga, &gb).unwrap();
        let ba = rkhs_inner(&gb, &ga).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab.abs()));
    }

    #[test]
    fn nested_sets_do_not_increase_error(
        (d, raw) in points_in_cube(25),
        ycoords in prop::collection::vec(0.0f64..1.0, 9),
        c in prop::collection::vec(-1.0f64..1.0, 3),
        alpha in 0.3f64..=1.0,
    ) {
        let k = Kernel::generalized_exponential(alpha).unwrap();
        let x = thin(&raw, d, 1e-2);
        let y = thin(&ycoords[..3 * d], d, 1e-6);
        let f = KernelCombination::new(k, y.clone(), c[..y.len()].to_vec()).unwrap();
        let mut last = f64::INFINITY;
        for n in 1..=x.len() {
            let xn = x.prefix(n);
            let s = fit(&k, &xn, &f.evaluate(&xn).unwrap(), FitOptions::default()).unwrap();
            let eta = regression_error_rkhs(&f, &s).unwrap();
            prop_assert!(eta <= last + 1e-10, "n = {}: {} > {}", n, eta, last);
            last = eta;
        }
    }

    #[test]
    fn saved_interpolant_round_trips(k in separated_kernel(), (d, raw) in points_in_cube(15), v in prop::collection::vec(-5.0f64..5.0, 15)) {
        let x = thin(&raw, d, 1e-2);
        let s = fit(&k, &x, &v[..x.len()], FitOptions::default()).unwrap();
        let json = serde_json::to_string(&s.saved()).unwrap();
        let back: SavedInterpolant = serde_json::from_str(&json).unwrap();
        let g = back.into_combination().unwrap();
        let probe = thin(&raw.iter().map(|t| t * 0.5 + 0.25).collect::<Vec<_>>(), d, 0.0);
        for (a, b) in g.evaluate(&probe).unwrap().iter().zip(s.evaluate(&probe).unwrap()) {
            prop_assert!((a - b).abs() <= 1e-15 * b.abs().max(f64::MIN_POSITIVE));
        }
    }
}

#[test]
fn halton_and_farthest_point_are_zero_sequences() {
    for d in 1..=3 {
        let grid = match d {
            1 => 2049,
            2 => 65,
            _ => 17,
        };
        let dom = Domain::unit_cube(d, grid).unwrap();
        for generator in [Generator::Halton, Generator::FarthestPoint] {
            let seq = generate(&generator, &dom, 1024).unwrap();
            let (h64, h1024) = (seq.fill_distance(64), seq.fill_distance(1024));
            assert!(
                h1024 < h64 / 2.0,
                "{} d={d}: h_64 = {h64}, h_1024 = {h1024}",
                generator.name()
            );
        }
    }
}

#[test]
fn farthest_point_beats_uniform_random() {
    for d in [1, 2] {
        let dom = Domain::unit_cube(d, if d == 1 { 513 } else { 65 }).unwrap();
        let fps = generate(&Generator::FarthestPoint, &dom, 64).unwrap();
        for n in [32, 64] {
            let wins = (0..100)
                .filter(|&seed| {
                    let uni = generate(&Generator::UniformRandom { seed }, &dom, n).unwrap();
                    fps.fill_distance(n) <= uni.fill_distance(n)
                })
                .count();
            assert!(wins >= 95, "d={d} n={n}: farthest point won {wins}/100");
        }
    }
}

/// Brute-force fill distance over an independently built 51 x 51 grid.
#[test]
fn halton_fill_distance_matches_brute_force() {
    let dom = Domain::unit_cube(2, 51).unwrap();
    let seq = generate(&Generator::Halton, &dom, 40).unwrap();
    for n in [1, 5, 17, 40] {
        let x = seq.prefix(n);
        let mut worst = 0.0f64;
        for i in 0..51 {
            for j in 0..51 {
                let g = [i as f64 / 50.0, j as f64 / 50.0];
                let nearest = x
                    .iter()
                    .map(|p| ((p[0] - g[0]).powi(2) + (p[1] - g[1]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
            }
        }
        assert!((seq.fill_distance(n) - worst).abs() <= 1e-15, "n = {n}");
        assert!((fill_distance(&x, &dom).unwrap().value - worst).abs() <= 1e-15);
    }
}
