//! Box domains, point sets and fill distances.

mod halton;
mod io;
mod sequence;

pub use halton::{radical_inverse, PRIMES};
pub use io::{read_points_csv, read_values_csv, write_points_csv, write_values_csv};
pub use sequence::{avoid_ball_generate, generate, Ball, Generator, PointSequence};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this are treated as coincident.
pub const DUPLICATE_THRESHOLD: f64 = 1e-14;

/// An ordered list of points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "point dimension must be positive");
        PointSet {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("point dimension must be positive"));
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        Ok(PointSet { dim, coords })
    }

    /// Builds a point set from rows; all rows must share one length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyPointSet)?;
        let dim = first.as_ref().len();
        let mut set = PointSet::from_flat(dim, Vec::with_capacity(dim * rows.len()))?;
        for row in rows {
            set.push(row.as_ref())?;
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    /// The first `n` points.
    pub fn prefix(&self, n: usize) -> PointSet {
        let n = n.min(self.len());
        PointSet {
            dim: self.dim,
            coords: self.coords[..n * self.dim].to_vec(),
        }
    }

    /// Concatenation of `self` and `other`.
    pub fn concat(&self, other: &PointSet) -> Result<PointSet> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(PointSet {
            dim: self.dim,
            coords,
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// Returns the first pair of indices closer than [`DUPLICATE_THRESHOLD`].
    pub fn find_duplicate(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for j in 1..n {
            let pj = self.point(j);
            for i in 0..j {
                if distance(self.point(i), pj) < DUPLICATE_THRESHOLD {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn ensure_distinct(&self) -> Result<()> {
        match self.find_duplicate() {
            Some((first, second)) => Err(Error::DuplicatePoints {
                first,
                second,
                threshold: DUPLICATE_THRESHOLD,
            }),
            None => Ok(()),
        }
    }

    /// Smallest pairwise distance, `+inf` for fewer than two points.
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for j in 1..self.len() {
            for i in 0..j {
                best = best.min(distance(self.point(i), self.point(j)));
            }
        }
        best
    }
}

#[inline]
pub fn distance_squared(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    distance_squared(a, b).sqrt()
}

/// JSON form of a [`Domain`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Evaluation grid points per axis.
    pub grid: usize,
}

/// An axis-aligned box `[lower, upper]` with a tensor evaluation grid of
/// `resolution^d` points (boundary included).
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    lower: Vec<f64>,
    upper: Vec<f64>,
    resolution: usize,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, resolution: usize) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::invalid("domain needs at least one axis"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if let Some(axis) = (0..lower.len()).find(|&i| {
            !(lower[i].is_finite() && upper[i].is_finite() && lower[i] < upper[i])
        }) {
            return Err(Error::invalid(format!(
                "domain axis {axis} needs lower < upper"
            )));
        }
        if resolution < 2 {
            return Err(Error::invalid("grid resolution must be at least 2"));
        }
        Ok(Domain {
            lower,
            upper,
            resolution,
        })
    }

    /// `[0,1]^d`.
    pub fn unit_cube(dim: usize, resolution: usize) -> Result<Self> {
        Domain::new(vec![0.0; dim], vec![1.0; dim], resolution)
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self> {
        Domain::new(spec.lower.clone(), spec.upper.clone(), spec.grid)
    }

    pub fn spec(&self) -> DomainSpec {
        DomainSpec {
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            grid: self.resolution,
        }
    }

    pub fn with_resolution(&self, resolution: usize) -> Result<Self> {
        Domain::new(self.lower.clone(), self.upper.clone(), resolution)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        distance(&self.lower, &self.upper)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (a, b))| *a <= *x && *x <= *b)
    }

    /// Largest per-axis grid step.
    pub fn grid_spacing(&self) -> f64 {
        let steps = (self.resolution - 1) as f64;
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| (b - a) / steps)
            .fold(0.0, f64::max)
    }

    /// Bound on how far any point of the box is from the grid.
    pub fn discretization_gap(&self) -> f64 {
        0.5 * (self.dim() as f64).sqrt() * self.grid_spacing()
    }

    pub fn grid_len(&self) -> usize {
        self.resolution.pow(self.dim() as u32)
    }

    /// Grid point with lexicographic index `index` (first axis most significant).
    pub fn grid_point_into(&self, mut index: usize, out: &mut [f64]) {
        let m = self.resolution;
        let steps = (m - 1) as f64;
        for axis in (0..self.dim()).rev() {
            let i = index % m;
            index /= m;
            let t = i as f64 / steps;
            out[axis] = if i == m - 1 {
                self.upper[axis]
            } else {
                self.lower[axis] + (self.upper[axis] - self.lower[axis]) * t
            };
        }
    }

    /// All grid points in lexicographic order.
    pub fn grid(&self) -> PointSet {
        let d = self.dim();
        let total = self.grid_len();
        let mut coords = vec![0.0; total * d];
        coords
            .par_chunks_mut(d)
            .enumerate()
            .for_each(|(i, row)| self.grid_point_into(i, row));
        PointSet { dim: d, coords }
    }

    /// Maps a point of the unit cube affinely onto the box.
    pub fn from_unit(&self, unit: &[f64]) -> Vec<f64> {
        unit.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(u, (a, b))| a + (b - a) * u)
            .collect()
    }
}

/// A grid-discretized supremum together with the grid step it was taken on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    pub value: f64,
    pub spacing: f64,
}

/// Fill distance of `points` in `domain`: the largest distance from an
/// evaluation-grid point to its nearest sample.
///
/// The result is a lower bound on the supremum over the whole box; the true value
/// exceeds it by at most [`Domain::discretization_gap`].
pub fn fill_distance(points: &PointSet, domain: &Domain) -> Result<GridMax> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if points.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: points.dim(),
        });
    }
    let d = domain.dim();
    let worst_sq = (0..domain.grid_len())
        .into_par_iter()
        .map_init(
            || vec![0.0; d],
            |buf, i| {
                domain.grid_point_into(i, buf);
                points
                    .iter()
                    .map(|p| distance_squared(p, buf))
                    .fold(f64::INFINITY, f64::min)
            },
        )
        .reduce(|| 0.0, f64::max);
    Ok(GridMax {
        value: worst_sq.sqrt(),
        spacing: domain.grid_spacing(),
    })
}
