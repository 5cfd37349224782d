use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{BasError, Result};

/// Closed interval `[lo, hi]` on one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(BasError::invalid(
                "box",
                format!("non-finite bound [{lo}, {hi}]"),
            ));
        }
        if lo > hi {
            return Err(BasError::invalid("box", format!("lo {lo} exceeds hi {hi}")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }
}

/// Axis-aligned box, one interval per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBox {
    axes: Vec<Interval>,
}

impl SearchBox {
    pub fn new(axes: Vec<Interval>) -> Result<Self> {
        if axes.is_empty() {
            return Err(BasError::invalid("box", "needs at least one axis"));
        }
        Ok(SearchBox { axes })
    }

    /// The same interval repeated on `dim` axes.
    pub fn cube(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        let axis = Interval::new(lo, hi)?;
        SearchBox::new(vec![axis; dim])
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.axes.len()
            && x.iter()
                .zip(&self.axes)
                .all(|(v, a)| a.lo <= *v && *v <= a.hi)
    }

    pub fn clamp_in_place(&self, x: &mut [f64]) {
        for (v, a) in x.iter_mut().zip(&self.axes) {
            *v = a.clamp(*v);
        }
    }

    /// Draws one point uniformly per axis. Degenerate axes return `lo`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.axes
            .iter()
            .map(|a| {
                if a.lo == a.hi {
                    a.lo
                } else {
                    rng.random_range(a.lo..=a.hi)
                }
            })
            .collect()
    }

    pub fn ensure_dimension(&self, dim: usize) -> Result<()> {
        if self.dimension() != dim {
            return Err(BasError::DimensionMismatch {
                expected: dim,
                got: self.dimension(),
            });
        }
        Ok(())
    }
}

/// Renders as `lo:hi[,lo:hi...]`; floats use the shortest round-tripping form.
impl fmt::Display for SearchBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{:?}:{:?}", a.lo, a.hi)?;
        }
        Ok(())
    }
}

impl FromStr for SearchBox {
    type Err = BasError;

    fn from_str(s: &str) -> Result<Self> {
        let axes = s
            .split(',')
            .map(|part| {
                let (lo, hi) = part
                    .split_once(':')
                    .ok_or_else(|| BasError::invalid("box", format!("`{part}` is not lo:hi")))?;
                let parse = |v: &str| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| BasError::invalid("box", format!("`{v}` is not a number")))
                };
                Interval::new(parse(lo)?, parse(hi)?)
            })
            .collect::<Result<Vec<_>>>()?;
        SearchBox::new(axes)
    }
}
