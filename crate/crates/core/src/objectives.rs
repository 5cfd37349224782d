//! Benchmark objectives and the name-keyed registry used by the harness.

use std::f64::consts::PI;

use crate::bounds::SearchBox;
use crate::error::{BasError, Result};

pub const MICHALEWICZ: &str = "michalewicz";
pub const GOLDSTEIN_PRICE: &str = "goldstein_price";
pub const SPHERE: &str = "sphere";

/// Names accepted by [`lookup_objective`].
pub const OBJECTIVE_NAMES: [&str; 3] = [MICHALEWICZ, GOLDSTEIN_PRICE, SPHERE];

/// Default Michalewicz steepness.
pub const MICHALEWICZ_STEEPNESS: u32 = 10;

/// Negated Michalewicz function, `-sum_i sin(x_i) sin(i x_i^2 / pi)^(2m)` with 1-based `i`.
pub fn michalewicz(x: &[f64], m: u32) -> f64 {
    let power = 2 * m as i32;
    -x.iter()
        .enumerate()
        .map(|(i, &xi)| {
            let index = (i + 1) as f64;
            xi.sin() * (index * xi * xi / PI).sin().powi(power)
        })
        .sum::<f64>()
}

/// Goldstein-Price function. Two-dimensional only.
pub fn goldstein_price(x: &[f64]) -> Result<f64> {
    match x {
        [x1, x2] => Ok(goldstein_price_2d(*x1, *x2)),
        _ => Err(BasError::DimensionMismatch {
            expected: 2,
            got: x.len(),
        }),
    }
}

fn goldstein_price_2d(x1: f64, x2: f64) -> f64 {
    let a = x1 + x2 + 1.0;
    let a_poly = 19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2;
    let b = 2.0 * x1 - 3.0 * x2;
    let b_poly = 18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2;
    (1.0 + a * a * a_poly) * (30.0 + b * b * b_poly)
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Michalewicz { m: u32 },
    GoldsteinPrice,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimensionality {
    Fixed(usize),
    Flexible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnownOptimum {
    pub position: Vec<f64>,
    pub value: f64,
}

/// A registered benchmark instantiated at a concrete dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    kind: ObjectiveKind,
    dimension: usize,
    default_init_box: SearchBox,
    known_optimum: Option<KnownOptimum>,
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self.kind {
            ObjectiveKind::Michalewicz { .. } => MICHALEWICZ,
            ObjectiveKind::GoldsteinPrice => GOLDSTEIN_PRICE,
            ObjectiveKind::Sphere => SPHERE,
        }
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn dimensionality(&self) -> Dimensionality {
        match self.kind {
            ObjectiveKind::GoldsteinPrice => Dimensionality::Fixed(2),
            _ => Dimensionality::Flexible,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn default_init_box(&self) -> &SearchBox {
        &self.default_init_box
    }

    pub fn known_optimum(&self) -> Option<&KnownOptimum> {
        self.known_optimum.as_ref()
    }

    /// Evaluates at `x`.
    ///
    /// Panics if `x` does not have [`Objective::dimension`] coordinates; use
    /// [`Objective::try_evaluate`] for a checked call.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(
            x.len(),
            self.dimension,
            "{} expects {} coordinates",
            self.name(),
            self.dimension
        );
        match self.kind {
            ObjectiveKind::Michalewicz { m } => michalewicz(x, m),
            ObjectiveKind::GoldsteinPrice => goldstein_price_2d(x[0], x[1]),
            ObjectiveKind::Sphere => sphere(x),
        }
    }

    pub fn try_evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(BasError::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        Ok(self.evaluate(x))
    }
}

/// Looks up a registered objective by name and instantiates it at `dimension`.
pub fn lookup_objective(name: &str, dimension: usize) -> Result<Objective> {
    let kind = match name {
        MICHALEWICZ => ObjectiveKind::Michalewicz {
            m: MICHALEWICZ_STEEPNESS,
        },
        GOLDSTEIN_PRICE => ObjectiveKind::GoldsteinPrice,
        SPHERE => ObjectiveKind::Sphere,
        _ => {
            return Err(BasError::UnknownObjective {
                name: name.to_string(),
                valid: OBJECTIVE_NAMES.join(", "),
            })
        }
    };
    if dimension == 0 {
        return Err(BasError::invalid("dim", "must be >= 1"));
    }
    let (default_init_box, known_optimum) = match kind {
        ObjectiveKind::Michalewicz { .. } => {
            // Only the two-dimensional optimum is tabulated.
            let opt = (dimension == 2).then(|| KnownOptimum {
                position: vec![2.20319, 1.57049],
                value: -1.8013,
            });
            (SearchBox::cube(0.0, PI, dimension)?, opt)
        }
        ObjectiveKind::GoldsteinPrice => {
            if dimension != 2 {
                return Err(BasError::DimensionMismatch {
                    expected: 2,
                    got: dimension,
                });
            }
            let opt = KnownOptimum {
                position: vec![0.0, -1.0],
                value: 3.0,
            };
            (SearchBox::cube(-2.0, 2.0, 2)?, Some(opt))
        }
        ObjectiveKind::Sphere => {
            let opt = KnownOptimum {
                position: vec![0.0; dimension],
                value: 0.0,
            };
            (SearchBox::cube(-1.0, 1.0, dimension)?, Some(opt))
        }
    };
    Ok(Objective {
        kind,
        dimension,
        default_init_box,
        known_optimum,
    })
}
