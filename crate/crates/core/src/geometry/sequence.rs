use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::halton::{halton_unit, PRIMES};
use super::{distance, distance_squared, Domain, PointSet, DUPLICATE_THRESHOLD};
use crate::error::{Error, Result};

/// How the sampling sequence is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// i.i.d. uniform draws from a ChaCha8 stream.
    UniformRandom { seed: u64 },
    /// Halton sequence with prime bases 2, 3, 5, ... starting at index 1.
    Halton,
    /// Greedy farthest-point sampling over the evaluation grid, starting at the box center.
    FarthestPoint,
    /// A fixed list, used in order.
    Explicit(PointSet),
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::UniformRandom { .. } => "uniform_random",
            Generator::Halton => "halton",
            Generator::FarthestPoint => "farthest_point",
            Generator::Explicit(_) => "explicit",
        }
    }
}

/// Open ball `B(center, radius)` excluded from sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &[f64]) -> bool {
        distance(&self.center, p) < self.radius
    }

    fn covers(&self, domain: &Domain) -> bool {
        // The farthest point of a box from any center is one of its corners.
        let far_sq: f64 = self
            .center
            .iter()
            .zip(domain.lower().iter().zip(domain.upper()))
            .map(|(c, (a, b))| (c - a).abs().max((b - c).abs()).powi(2))
            .sum();
        far_sq.sqrt() < self.radius
    }
}

/// Pairwise-distinct sampling points with the fill distance of every prefix cached.
#[derive(Debug, Clone)]
pub struct PointSequence {
    points: PointSet,
    generator: Generator,
    fill_distances: Vec<f64>,
    grid_spacing: f64,
}

impl PointSequence {
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `X_n`, the first `n` points.
    pub fn prefix(&self, n: usize) -> PointSet {
        self.points.prefix(n)
    }

    /// `h_n` for the first `n` points (`n >= 1`).
    pub fn fill_distance(&self, n: usize) -> f64 {
        self.fill_distances[n - 1]
    }

    pub fn fill_distances(&self) -> &[f64] {
        &self.fill_distances
    }

    pub fn grid_spacing(&self) -> f64 {
        self.grid_spacing
    }
}

/// Generates `n` points of `generator` in `domain`.
pub fn generate(generator: &Generator, domain: &Domain, n: usize) -> Result<PointSequence> {
    build(generator, domain, n, None)
}

/// Like [`generate`], but every point of the open ball `B(center, radius)` is rejected,
/// which keeps every fill distance at or above `radius` whenever the center is a grid point.
pub fn avoid_ball_generate(
    generator: &Generator,
    domain: &Domain,
    n: usize,
    center: &[f64],
    radius: f64,
) -> Result<PointSequence> {
    if center.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: center.len(),
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid("ball radius must be positive"));
    }
    let ball = Ball {
        center: center.to_vec(),
        radius,
    };
    if ball.covers(domain) {
        return Err(Error::BallCoversDomain);
    }
    build(generator, domain, n, Some(&ball))
}

fn build(
    generator: &Generator,
    domain: &Domain,
    n: usize,
    exclude: Option<&Ball>,
) -> Result<PointSequence> {
    if n == 0 {
        return Err(Error::invalid("need at least one point"));
    }
    let points = match generator {
        Generator::UniformRandom { seed } => uniform(domain, n, *seed, exclude)?,
        Generator::Halton => halton(domain, n, exclude)?,
        Generator::FarthestPoint => farthest_point(domain, n, exclude)?,
        Generator::Explicit(list) => explicit(list, domain, n, exclude)?,
    };
    let grid = domain.grid();
    let fill_distances = prefix_fill_distances(&points, &grid);
    Ok(PointSequence {
        points,
        generator: generator.clone(),
        fill_distances,
        grid_spacing: domain.grid_spacing(),
    })
}

fn attempt_budget(n: usize) -> usize {
    10_000 + 1_000 * n
}

fn is_new(points: &PointSet, p: &[f64]) -> bool {
    points.iter().all(|q| distance(q, p) >= DUPLICATE_THRESHOLD)
}

fn uniform(domain: &Domain, n: usize, seed: u64, exclude: Option<&Ball>) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = domain.dim();
    let mut points = PointSet::new(d);
    let budget = attempt_budget(n);
    let mut unit = vec![0.0; d];
    for _ in 0..budget {
        if points.len() == n {
            break;
        }
        unit.iter_mut().for_each(|u| *u = rng.random::<f64>());
        let p = domain.from_unit(&unit);
        if exclude.is_some_and(|b| b.contains(&p)) || !is_new(&points, &p) {
            continue;
        }
        points.push(&p)?;
    }
    if points.len() < n {
        return Err(Error::SamplingExhausted { attempts: budget });
    }
    Ok(points)
}

fn halton(domain: &Domain, n: usize, exclude: Option<&Ball>) -> Result<PointSet> {
    let d = domain.dim();
    if d > PRIMES.len() {
        return Err(Error::invalid(format!(
            "Halton sequences are limited to {} dimensions",
            PRIMES.len()
        )));
    }
    let mut points = PointSet::new(d);
    let budget = attempt_budget(n);
    for index in 1..=budget as u64 {
        if points.len() == n {
            break;
        }
        let p = domain.from_unit(&halton_unit(index, d));
        if exclude.is_some_and(|b| b.contains(&p)) {
            continue;
        }
        points.push(&p)?;
    }
    if points.len() < n {
        return Err(Error::SamplingExhausted { attempts: budget });
    }
    Ok(points)
}

fn farthest_point(domain: &Domain, n: usize, exclude: Option<&Ball>) -> Result<PointSet> {
    let grid = domain.grid();
    let admissible: Vec<bool> = grid
        .iter()
        .map(|g| !exclude.is_some_and(|b| b.contains(g)))
        .collect();
    let center = domain.center();
    let start = if exclude.is_some_and(|b| b.contains(&center)) {
        // Nearest admissible grid point to the center, first in grid order on ties.
        let mut best: Option<(usize, f64)> = None;
        for (i, g) in grid.iter().enumerate() {
            if !admissible[i] {
                continue;
            }
            let d2 = distance_squared(g, &center);
            if best.is_none_or(|(_, b)| d2 < b) {
                best = Some((i, d2));
            }
        }
        let (i, _) = best.ok_or(Error::BallCoversDomain)?;
        grid.point(i).to_vec()
    } else {
        center
    };

    let start_on_grid = grid
        .iter()
        .zip(&admissible)
        .any(|(g, &ok)| ok && distance(g, &start) < DUPLICATE_THRESHOLD);
    let capacity =
        admissible.iter().filter(|&&ok| ok).count() + usize::from(!start_on_grid);
    if n > capacity {
        return Err(Error::GridCapacity {
            requested: n,
            capacity,
        });
    }

    let mut points = PointSet::new(domain.dim());
    points.push(&start)?;
    let rows: Vec<&[f64]> = grid.iter().collect();
    let mut min_sq: Vec<f64> = grid
        .iter()
        .zip(&admissible)
        .map(|(g, &ok)| {
            if ok {
                distance_squared(g, &start)
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();

    while points.len() < n {
        let (best, best_sq) = min_sq
            .par_iter()
            .enumerate()
            .map(|(i, &v)| (i, v))
            .reduce(
                || (usize::MAX, f64::NEG_INFINITY),
                |a, b| {
                    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                        b
                    } else {
                        a
                    }
                },
            );
        if best == usize::MAX || best_sq.sqrt() < DUPLICATE_THRESHOLD {
            return Err(Error::GridCapacity {
                requested: n,
                capacity: points.len(),
            });
        }
        let p = grid.point(best).to_vec();
        min_sq
            .par_iter_mut()
            .zip(rows.par_iter())
            .for_each(|(m, g)| {
                if *m > f64::NEG_INFINITY {
                    *m = m.min(distance_squared(g, &p));
                }
            });
        points.push(&p)?;
    }
    Ok(points)
}

fn explicit(list: &PointSet, domain: &Domain, n: usize, exclude: Option<&Ball>) -> Result<PointSet> {
    if list.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: list.dim(),
        });
    }
    if n > list.len() {
        return Err(Error::invalid(format!(
            "explicit sequence has {} points, {} requested",
            list.len(),
            n
        )));
    }
    let points = list.prefix(n);
    if let Some(i) = points.iter().position(|p| !domain.contains(p)) {
        return Err(Error::invalid(format!("point {i} lies outside the domain")));
    }
    if let Some(b) = exclude {
        if let Some(i) = points.iter().position(|p| b.contains(p)) {
            return Err(Error::invalid(format!("point {i} lies inside the excluded ball")));
        }
    }
    points.ensure_distinct()?;
    Ok(points)
}

fn prefix_fill_distances(points: &PointSet, grid: &PointSet) -> Vec<f64> {
    let mut min_sq = vec![f64::INFINITY; grid.len()];
    let rows: Vec<&[f64]> = grid.iter().collect();
    points
        .iter()
        .map(|p| {
            min_sq
                .par_iter_mut()
                .zip(rows.par_iter())
                .map(|(m, g)| {
                    *m = m.min(distance_squared(g, p));
                    *m
                })
                .reduce(|| 0.0, f64::max)
                .sqrt()
        })
        .collect()
}
