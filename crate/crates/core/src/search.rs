//! The beetle antennae search state machine.
//!
//! Each iteration draws a random unit bearing, probes the objective at two
//! antenna tips placed symmetrically around the current position, and steps
//! a distance `delta` toward the lower tip. Antenna length `d` and step size
//! `delta` decay between iterations according to their [`ScheduleSpec`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::SearchBox;
use crate::error::{BasError, Result};

/// Pre-normalization norms below this are resampled.
const MIN_DIRECTION_NORM: f64 = 1e-12;

/// A point in the search space. Every coordinate is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Position(Vec<f64>);

impl Position {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(BasError::invalid(
                "position",
                "needs at least one coordinate",
            ));
        }
        if let Some(v) = coords.iter().find(|v| !v.is_finite()) {
            return Err(BasError::invalid(
                "position",
                format!("non-finite coordinate {v}"),
            ));
        }
        Ok(Position(coords))
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// A unit-norm bearing along which both antennae are placed.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalizes `components` to unit length.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        let norm = euclidean_norm(&components);
        if !norm.is_finite() || norm < MIN_DIRECTION_NORM {
            return Err(BasError::invalid(
                "direction",
                format!("cannot normalize norm {norm}"),
            ));
        }
        Ok(Direction(
            components.into_iter().map(|c| c / norm).collect(),
        ))
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        euclidean_norm(&self.0)
    }
}

fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    /// `v <- rate * v + offset`
    GeometricOffset,
    /// `v <- rate * v`
    Geometric,
    /// `v <- v`
    Constant,
}

/// Decay rule applied to the antenna length or step size after each iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleSpec {
    kind: ScheduleKind,
    rate: f64,
    offset: f64,
}

impl ScheduleSpec {
    pub const DEFAULT_RATE: f64 = 0.95;
    pub const DEFAULT_OFFSET: f64 = 0.01;

    pub fn geometric_offset(rate: f64, offset: f64) -> Result<Self> {
        check_rate(rate)?;
        if !(offset.is_finite() && offset >= 0.0) {
            return Err(BasError::invalid(
                "offset",
                format!("must be >= 0, got {offset}"),
            ));
        }
        Ok(ScheduleSpec {
            kind: ScheduleKind::GeometricOffset,
            rate,
            offset,
        })
    }

    pub fn geometric(rate: f64) -> Result<Self> {
        check_rate(rate)?;
        Ok(ScheduleSpec {
            kind: ScheduleKind::Geometric,
            rate,
            offset: 0.0,
        })
    }

    pub fn constant() -> Self {
        ScheduleSpec {
            kind: ScheduleKind::Constant,
            rate: 1.0,
            offset: 0.0,
        }
    }

    /// Picks the simplest kind that represents `v <- rate * v + offset`.
    pub fn from_rate_offset(rate: f64, offset: f64) -> Result<Self> {
        if offset != 0.0 {
            Self::geometric_offset(rate, offset)
        } else if rate == 1.0 {
            Ok(Self::constant())
        } else {
            Self::geometric(rate)
        }
    }

    /// Default antenna-length decay: `d <- 0.95 d + 0.01`.
    pub fn default_antenna() -> Self {
        ScheduleSpec {
            kind: ScheduleKind::GeometricOffset,
            rate: Self::DEFAULT_RATE,
            offset: Self::DEFAULT_OFFSET,
        }
    }

    /// Default step-size decay: `delta <- 0.95 delta`.
    pub fn default_step() -> Self {
        ScheduleSpec {
            kind: ScheduleKind::Geometric,
            rate: Self::DEFAULT_RATE,
            offset: 0.0,
        }
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Fixed point of the recurrence, if it has a finite one other than the start value.
    pub fn fixed_point(&self) -> Option<f64> {
        match self.kind {
            ScheduleKind::GeometricOffset if self.rate < 1.0 => {
                Some(self.offset / (1.0 - self.rate))
            }
            ScheduleKind::Geometric if self.rate < 1.0 => Some(0.0),
            _ => None,
        }
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate <= 1.0 {
        Ok(())
    } else {
        Err(BasError::invalid(
            "rate",
            format!("must lie in (0, 1], got {rate}"),
        ))
    }
}

pub fn advance_schedule(value: f64, spec: &ScheduleSpec) -> f64 {
    match spec.kind {
        ScheduleKind::GeometricOffset => spec.rate * value + spec.offset,
        ScheduleKind::Geometric => spec.rate * value,
        ScheduleKind::Constant => value,
    }
}

/// Where the search starts.
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Point(Position),
    Uniform(SearchBox),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasConfig {
    pub dimension: usize,
    /// Initial antenna length.
    pub d0: f64,
    /// Initial step size.
    pub delta0: f64,
    pub d_schedule: ScheduleSpec,
    pub delta_schedule: ScheduleSpec,
    pub max_iters: usize,
    pub seed: u64,
    pub init: Init,
    /// When set, every post-move position is clamped into this box before evaluation.
    pub clamp_box: Option<SearchBox>,
    /// Stop once the best value is at or below this.
    pub target_value: Option<f64>,
    /// Stop after this many consecutive iterations without a strict improvement.
    pub stall_iters: Option<usize>,
}

impl BasConfig {
    /// `d0 = 2`, `delta0 = 0.5`, default schedules, 100 iterations, seed 0.
    pub fn new(dimension: usize, init: Init) -> Self {
        BasConfig {
            dimension,
            d0: 2.0,
            delta0: 0.5,
            d_schedule: ScheduleSpec::default_antenna(),
            delta_schedule: ScheduleSpec::default_step(),
            max_iters: 100,
            seed: 0,
            init,
            clamp_box: None,
            target_value: None,
            stall_iters: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(BasError::invalid("dimension", "must be >= 1"));
        }
        if !(self.d0.is_finite() && self.d0 > 0.0) {
            return Err(BasError::invalid(
                "d0",
                format!("must be > 0, got {}", self.d0),
            ));
        }
        if !(self.delta0.is_finite() && self.delta0 > 0.0) {
            return Err(BasError::invalid(
                "delta0",
                format!("must be > 0, got {}", self.delta0),
            ));
        }
        if self.max_iters == 0 {
            return Err(BasError::invalid("max_iters", "must be >= 1"));
        }
        match &self.init {
            Init::Point(p) if p.dimension() != self.dimension => {
                return Err(BasError::DimensionMismatch {
                    expected: self.dimension,
                    got: p.dimension(),
                })
            }
            Init::Uniform(b) => b.ensure_dimension(self.dimension)?,
            Init::Point(_) => {}
        }
        if let Some(b) = &self.clamp_box {
            b.ensure_dimension(self.dimension)?;
        }
        if let Some(t) = self.target_value {
            if !t.is_finite() {
                return Err(BasError::invalid("target_value", "must be finite"));
            }
        }
        if self.stall_iters == Some(0) {
            return Err(BasError::invalid("stall_iters", "must be >= 1"));
        }
        Ok(())
    }
}

/// Everything one run carries from iteration to iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchState {
    pub t: usize,
    pub x: Position,
    pub d: f64,
    pub delta: f64,
    pub x_bst: Position,
    pub f_bst: f64,
    pub evals: usize,
}

/// One trajectory row: the position reached at iteration `t` and the
/// antenna length and step size used to get there.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub t: usize,
    pub f_x: f64,
    pub f_bst: f64,
    pub d: f64,
    pub delta: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    MaxIters,
    TargetReached,
    Stalled,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::MaxIters => "max_iters",
            Termination::TargetReached => "target_reached",
            Termination::Stalled => "stalled",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Starting point and its value (iteration 0, not part of `records`).
    pub x0: Vec<f64>,
    pub f0: f64,
    pub records: Vec<IterationRecord>,
    pub x_bst: Vec<f64>,
    pub f_bst: f64,
    pub evals: usize,
    pub termination: Termination,
}

/// Draws a bearing with i.i.d. uniform `[-1, 1]` components, normalized.
pub fn sample_direction<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Direction {
    assert!(k >= 1, "direction needs at least one component");
    loop {
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let norm = euclidean_norm(&raw);
        if norm >= MIN_DIRECTION_NORM {
            return Direction(raw.into_iter().map(|c| c / norm).collect());
        }
    }
}

/// Right and left antenna tips `x + d b` and `x - d b`.
pub fn antenna_probe(x: &Position, d: f64, b: &Direction) -> Result<(Position, Position)> {
    check_same_dimension(x, b)?;
    let right = x.0.iter().zip(&b.0).map(|(xi, bi)| xi + d * bi).collect();
    let left = x.0.iter().zip(&b.0).map(|(xi, bi)| xi - d * bi).collect();
    Ok((Position(right), Position(left)))
}

fn check_same_dimension(x: &Position, b: &Direction) -> Result<()> {
    if x.dimension() != b.dimension() {
        return Err(BasError::DimensionMismatch {
            expected: x.dimension(),
            got: b.dimension(),
        });
    }
    Ok(())
}

/// Sign with `sign(0) = 0`.
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Moves `delta` along `b` toward whichever antenna saw the lower value:
/// `x - delta * b * sign(f_r - f_l)`. Equal readings leave `x` in place.
pub fn detect_step(
    x: &Position,
    delta: f64,
    b: &Direction,
    f_r: f64,
    f_l: f64,
) -> Result<Position> {
    check_same_dimension(x, b)?;
    for v in [f_r, f_l] {
        if !v.is_finite() {
            return Err(BasError::ObjectiveFailure {
                iteration: 0,
                value: v,
            });
        }
    }
    let s = sign(f_r - f_l);
    if s == 0.0 {
        return Ok(x.clone());
    }
    Ok(Position(
        x.0.iter()
            .zip(&b.0)
            .map(|(xi, bi)| xi - delta * bi * s)
            .collect(),
    ))
}

pub fn init_position<R: Rng + ?Sized>(config: &BasConfig, rng: &mut R) -> Result<Position> {
    match &config.init {
        Init::Point(p) => {
            if p.dimension() != config.dimension {
                return Err(BasError::DimensionMismatch {
                    expected: config.dimension,
                    got: p.dimension(),
                });
            }
            Ok(p.clone())
        }
        Init::Uniform(b) => {
            b.ensure_dimension(config.dimension)?;
            Position::new(b.sample(rng))
        }
    }
}

fn evaluate<F>(objective: &mut F, x: &Position, iteration: usize) -> Result<f64>
where
    F: FnMut(&[f64]) -> f64 + ?Sized,
{
    let value = objective(x.as_slice());
    if value.is_finite() {
        Ok(value)
    } else {
        Err(BasError::ObjectiveFailure { iteration, value })
    }
}

impl SearchState {
    /// Draws `x0`, evaluates it once and makes it the incumbent.
    pub fn initialize<F, R>(config: &BasConfig, objective: &mut F, rng: &mut R) -> Result<Self>
    where
        F: FnMut(&[f64]) -> f64 + ?Sized,
        R: Rng + ?Sized,
    {
        config.validate()?;
        let x = init_position(config, rng)?;
        let f0 = evaluate(objective, &x, 0)?;
        Ok(SearchState {
            t: 0,
            x_bst: x.clone(),
            x,
            d: config.d0,
            delta: config.delta0,
            f_bst: f0,
            evals: 1,
        })
    }

    /// Runs one iteration and returns the successor state with its trajectory row.
    /// `self` is untouched, so a failing objective leaves the caller's state as it was.
    pub fn iterate<F, R>(
        &self,
        objective: &mut F,
        rng: &mut R,
        config: &BasConfig,
    ) -> Result<(SearchState, IterationRecord)>
    where
        F: FnMut(&[f64]) -> f64 + ?Sized,
        R: Rng + ?Sized,
    {
        let t = self.t + 1;
        let b = sample_direction(self.x.dimension(), rng);
        let (x_r, x_l) = antenna_probe(&self.x, self.d, &b)?;
        let f_r = evaluate(objective, &x_r, t)?;
        let f_l = evaluate(objective, &x_l, t)?;
        let mut x = detect_step(&self.x, self.delta, &b, f_r, f_l)?;
        if let Some(bounds) = &config.clamp_box {
            bounds.clamp_in_place(&mut x.0);
        }
        let f_x = evaluate(objective, &x, t)?;

        let (x_bst, f_bst) = if f_x < self.f_bst {
            (x.clone(), f_x)
        } else {
            (self.x_bst.clone(), self.f_bst)
        };
        let record = IterationRecord {
            t,
            f_x,
            f_bst,
            d: self.d,
            delta: self.delta,
            x: x.0.clone(),
        };
        let next = SearchState {
            t,
            x,
            d: advance_schedule(self.d, &config.d_schedule),
            delta: advance_schedule(self.delta, &config.delta_schedule),
            x_bst,
            f_bst,
            evals: self.evals + 3,
        };
        Ok((next, record))
    }
}

/// Runs the search with a ChaCha8 stream seeded from `config.seed`.
pub fn run<F>(config: &BasConfig, objective: F) -> Result<RunResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    run_with_rng(config, objective, &mut rng)
}

pub fn run_with_rng<F, R>(config: &BasConfig, mut objective: F, rng: &mut R) -> Result<RunResult>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let mut state = SearchState::initialize(config, &mut objective, rng)?;
    let x0 = state.x.as_slice().to_vec();
    let f0 = state.f_bst;
    let mut records = Vec::with_capacity(config.max_iters);
    let mut since_improvement = 0usize;

    let termination = loop {
        let (next, record) = state.iterate(&mut objective, rng, config)?;
        if next.f_bst < state.f_bst {
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
        state = next;
        records.push(record);

        if config
            .target_value
            .is_some_and(|target| state.f_bst <= target)
        {
            break Termination::TargetReached;
        }
        if config.stall_iters.is_some_and(|n| since_improvement >= n) {
            break Termination::Stalled;
        }
        if state.t >= config.max_iters {
            break Termination::MaxIters;
        }
    };

    Ok(RunResult {
        x0,
        f0,
        records,
        x_bst: state.x_bst.into_vec(),
        f_bst: state.f_bst,
        evals: state.evals,
        termination,
    })
}
