//! Brute-force references: exhaustive grid minimization and a uniform
//! random-search baseline.

use std::cmp::Ordering;

use rand::Rng;
use rayon::prelude::*;

use crate::bounds::SearchBox;
use crate::error::{BasError, Result};
use crate::objectives::Objective;

pub const DEFAULT_GRID_CAP: u128 = 100_000_000;

/// Regular grid with `resolution` nodes per axis, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub bounds: SearchBox,
    pub resolution: usize,
    pub cap: u128,
}

impl GridSpec {
    pub fn new(bounds: SearchBox, resolution: usize) -> Self {
        GridSpec {
            bounds,
            resolution,
            cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn node_count(&self) -> u128 {
        (self.resolution as u128)
            .checked_pow(self.bounds.dimension() as u32)
            .unwrap_or(u128::MAX)
    }

    /// Halves the spacing; every node of `self` is also a node of the result.
    pub fn refined(&self) -> Self {
        GridSpec {
            resolution: 2 * (self.resolution - 1) + 1,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(BasError::invalid("resolution", "must be >= 2"));
        }
        let nodes = self.node_count();
        if nodes > self.cap {
            return Err(BasError::GridTooLarge {
                nodes,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn coordinate(&self, axis: usize, i: usize) -> f64 {
        let a = self.bounds.axes()[axis];
        if i + 1 == self.resolution {
            a.hi
        } else {
            a.lo + a.width() * i as f64 / (self.resolution - 1) as f64
        }
    }

    /// Node for a flat index. The first axis varies slowest, so flat order is
    /// lexicographic order of the coordinates.
    fn node(&self, mut flat: u64, out: &mut [f64]) {
        let res = self.resolution as u64;
        for axis in (0..out.len()).rev() {
            out[axis] = self.coordinate(axis, (flat % res) as usize);
            flat /= res;
        }
    }
}

/// Lower value wins; NaN loses to everything; ties go to the smaller flat index.
fn better(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    let order = match (a.0.is_nan(), b.0.is_nan()) {
        (false, false) => a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal),
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (true, true) => Ordering::Equal,
    };
    match order.then(a.1.cmp(&b.1)) {
        Ordering::Greater => b,
        _ => a,
    }
}

/// Exhaustive minimization of `objective` over every grid node.
pub fn grid_search(objective: &Objective, grid: &GridSpec) -> Result<(Vec<f64>, f64)> {
    grid.bounds.ensure_dimension(objective.dimension())?;
    grid_search_fn(|x| objective.evaluate(x), grid)
}

/// [`grid_search`] for an arbitrary function of `grid.bounds.dimension()` coordinates.
pub fn grid_search_fn<F>(f: F, grid: &GridSpec) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    grid.validate()?;
    let dim = grid.bounds.dimension();
    let nodes = grid.node_count() as u64;
    let (value, flat) = (0..nodes)
        .into_par_iter()
        .fold(
            || (f64::NAN, u64::MAX, vec![0.0; dim]),
            |(best_v, best_i, mut buf), i| {
                grid.node(i, &mut buf);
                let (v, idx) = better((best_v, best_i), (f(&buf), i));
                (v, idx, buf)
            },
        )
        .map(|(v, i, _)| (v, i))
        .reduce(|| (f64::NAN, u64::MAX), better);
    let mut x = vec![0.0; dim];
    grid.node(flat, &mut x);
    Ok((x, value))
}

/// Best of `n_evals` points drawn uniformly from `bounds`. Ties keep the earlier draw.
pub fn random_search_baseline<R: Rng + ?Sized>(
    objective: &Objective,
    bounds: &SearchBox,
    n_evals: usize,
    rng: &mut R,
) -> Result<(Vec<f64>, f64)> {
    bounds.ensure_dimension(objective.dimension())?;
    random_search_fn(|x| objective.evaluate(x), bounds, n_evals, rng)
}

pub fn random_search_fn<F, R>(
    mut f: F,
    bounds: &SearchBox,
    n_evals: usize,
    rng: &mut R,
) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    if n_evals == 0 {
        return Err(BasError::invalid("evals", "must be >= 1"));
    }
    let mut best_x = bounds.sample(rng);
    let mut best_v = f(&best_x);
    for _ in 1..n_evals {
        let x = bounds.sample(rng);
        let v = f(&x);
        if v < best_v || best_v.is_nan() {
            best_x = x;
            best_v = v;
        }
    }
    Ok((best_x, best_v))
}
