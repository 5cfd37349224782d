//! Python bindings: objectives, the search primitives, whole runs with a
//! registry name or any Python callable as the objective, the oracles and
//! seeded campaigns.

use std::cell::RefCell;
use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bas::cli::{self, CliError, ConfigLayer, ExperimentConfig, TrajMode};
use bas::objectives::{self, Dimensionality, Objective};
use bas::oracle::{self, GridSpec};
use bas::search::{self, BasConfig, Direction, Init, Position, RunResult, ScheduleSpec};
use bas::{BasError, Interval, SearchBox};

fn value_error(e: BasError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cli_error(e: CliError) -> PyErr {
    match e {
        CliError::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_box(bounds: Vec<(f64, f64)>) -> PyResult<SearchBox> {
    let axes = bounds
        .into_iter()
        .map(|(lo, hi)| Interval::new(lo, hi))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_error)?;
    SearchBox::new(axes).map_err(value_error)
}

fn from_box(b: &SearchBox) -> Vec<(f64, f64)> {
    b.axes().iter().map(|a| (a.lo, a.hi)).collect()
}

fn registered(name: &str, dim: Option<usize>) -> PyResult<Objective> {
    let dim = match dim {
        Some(d) => d,
        None => match objectives::lookup_objective(name, 2)
            .map_err(value_error)?
            .dimensionality()
        {
            Dimensionality::Fixed(d) => d,
            Dimensionality::Flexible => 2,
        },
    };
    objectives::lookup_objective(name, dim).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (x, m = objectives::MICHALEWICZ_STEEPNESS))]
fn michalewicz(x: Vec<f64>, m: u32) -> f64 {
    objectives::michalewicz(&x, m)
}

#[pyfunction]
fn goldstein_price(x: Vec<f64>) -> PyResult<f64> {
    objectives::goldstein_price(&x).map_err(value_error)
}

#[pyfunction]
fn sphere(x: Vec<f64>) -> f64 {
    objectives::sphere(&x)
}

/// Metadata of a registered objective as a dict.
#[pyfunction]
#[pyo3(signature = (name, dim = None))]
fn objective_info<'py>(
    py: Python<'py>,
    name: &str,
    dim: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let obj = registered(name, dim)?;
    let d = PyDict::new(py);
    d.set_item("name", obj.name())?;
    d.set_item("dimension", obj.dimension())?;
    d.set_item(
        "fixed_dimension",
        matches!(obj.dimensionality(), Dimensionality::Fixed(_)),
    )?;
    d.set_item("default_init_box", from_box(obj.default_init_box()))?;
    match obj.known_optimum() {
        Some(opt) => d.set_item("known_optimum", (opt.position.clone(), opt.value))?,
        None => d.set_item("known_optimum", py.None())?,
    }
    Ok(d)
}

#[pyfunction]
fn sample_direction(k: usize, seed: u64) -> PyResult<Vec<f64>> {
    if k == 0 {
        return Err(PyValueError::new_err("k must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(search::sample_direction(k, &mut rng).as_slice().to_vec())
}

#[pyfunction]
fn antenna_probe(x: Vec<f64>, d: f64, b: Vec<f64>) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let x = Position::new(x).map_err(value_error)?;
    let b = Direction::new(b).map_err(value_error)?;
    let (r, l) = search::antenna_probe(&x, d, &b).map_err(value_error)?;
    Ok((r.into_vec(), l.into_vec()))
}

#[pyfunction]
fn detect_step(x: Vec<f64>, delta: f64, b: Vec<f64>, f_r: f64, f_l: f64) -> PyResult<Vec<f64>> {
    let x = Position::new(x).map_err(value_error)?;
    let b = Direction::new(b).map_err(value_error)?;
    search::detect_step(&x, delta, &b, f_r, f_l)
        .map(Position::into_vec)
        .map_err(value_error)
}

fn schedule(kind: &str, rate: f64, offset: f64) -> PyResult<ScheduleSpec> {
    match kind {
        "geometric_offset" => ScheduleSpec::geometric_offset(rate, offset),
        "geometric" => ScheduleSpec::geometric(rate),
        "constant" => Ok(ScheduleSpec::constant()),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown schedule kind `{other}` (geometric_offset, geometric, constant)"
            )))
        }
    }
    .map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (value, kind = "geometric_offset", rate = 0.95, offset = 0.01))]
fn advance_schedule(value: f64, kind: &str, rate: f64, offset: f64) -> PyResult<f64> {
    Ok(search::advance_schedule(
        value,
        &schedule(kind, rate, offset)?,
    ))
}

/// Result of one search run.
#[pyclass(name = "RunResult", frozen)]
struct PyRunResult {
    inner: RunResult,
}

#[pymethods]
impl PyRunResult {
    #[getter]
    fn x_bst(&self) -> Vec<f64> {
        self.inner.x_bst.clone()
    }

    #[getter]
    fn f_bst(&self) -> f64 {
        self.inner.f_bst
    }

    #[getter]
    fn x0(&self) -> Vec<f64> {
        self.inner.x0.clone()
    }

    #[getter]
    fn f0(&self) -> f64 {
        self.inner.f0
    }

    #[getter]
    fn evals(&self) -> usize {
        self.inner.evals
    }

    #[getter]
    fn termination(&self) -> &'static str {
        self.inner.termination.as_str()
    }

    /// `(t, f_x, f_bst, d, delta, x)` per iteration.
    #[getter]
    fn records(&self) -> Vec<(usize, f64, f64, f64, f64, Vec<f64>)> {
        self.inner
            .records
            .iter()
            .map(|r| (r.t, r.f_x, r.f_bst, r.d, r.delta, r.x.clone()))
            .collect()
    }

    /// Trajectory CSV text, same layout as the files the CLI writes.
    fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        cli::write_trajectory(&self.inner, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    fn __len__(&self) -> usize {
        self.inner.records.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "RunResult(f_bst={:?}, x_bst={:?}, iterations={}, evals={}, termination='{}')",
            self.inner.f_bst,
            self.inner.x_bst,
            self.inner.records.len(),
            self.inner.evals,
            self.inner.termination.as_str()
        )
    }
}

/// Runs the search. `objective` is a registered name or a callable taking a
/// list of floats and returning a float.
#[pyfunction]
#[pyo3(signature = (
    objective, dim = None, *, x0 = None, init_box = None, d0 = 2.0, delta0 = 0.5,
    eta_d = 0.95, offset_d = 0.01, eta_delta = 0.95, max_iters = 100, seed = 0,
    clamp_box = None, target = None, stall = None
))]
#[allow(clippy::too_many_arguments)]
fn run(
    py: Python<'_>,
    objective: &Bound<'_, PyAny>,
    dim: Option<usize>,
    x0: Option<Vec<f64>>,
    init_box: Option<Vec<(f64, f64)>>,
    d0: f64,
    delta0: f64,
    eta_d: f64,
    offset_d: f64,
    eta_delta: f64,
    max_iters: usize,
    seed: u64,
    clamp_box: Option<Vec<(f64, f64)>>,
    target: Option<f64>,
    stall: Option<usize>,
) -> PyResult<PyRunResult> {
    let named = match objective.extract::<String>() {
        Ok(name) => Some(registered(&name, dim.or(x0.as_ref().map(Vec::len)))?),
        Err(_) => None,
    };
    let dim = named
        .as_ref()
        .map(Objective::dimension)
        .or(dim)
        .or(x0.as_ref().map(Vec::len))
        .or(init_box.as_ref().map(Vec::len))
        .ok_or_else(|| PyValueError::new_err("cannot infer the dimension; pass dim"))?;

    let init = match (x0, init_box) {
        (Some(_), Some(_)) => return Err(PyValueError::new_err("pass x0 or init_box, not both")),
        (Some(x), None) => Init::Point(Position::new(x).map_err(value_error)?),
        (None, Some(b)) => Init::Uniform(to_box(b)?),
        (None, None) => match &named {
            Some(obj) => Init::Uniform(obj.default_init_box().clone()),
            None => {
                return Err(PyValueError::new_err(
                    "a callable objective needs x0 or init_box",
                ))
            }
        },
    };
    let mut cfg = BasConfig::new(dim, init);
    cfg.d0 = d0;
    cfg.delta0 = delta0;
    cfg.d_schedule = ScheduleSpec::from_rate_offset(eta_d, offset_d).map_err(value_error)?;
    cfg.delta_schedule = ScheduleSpec::from_rate_offset(eta_delta, 0.0).map_err(value_error)?;
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    cfg.clamp_box = clamp_box.map(to_box).transpose()?;
    cfg.target_value = target;
    cfg.stall_iters = stall;

    let result = match named {
        Some(obj) => py.detach(|| search::run(&cfg, |x| obj.evaluate(x))),
        None => {
            let raised: RefCell<Option<PyErr>> = RefCell::new(None);
            let outcome = search::run(&cfg, |x| {
                if raised.borrow().is_some() {
                    return f64::NAN;
                }
                match objective
                    .call1((x.to_vec(),))
                    .and_then(|v| v.extract::<f64>())
                {
                    Ok(v) => v,
                    Err(e) => {
                        *raised.borrow_mut() = Some(e);
                        f64::NAN
                    }
                }
            });
            if let Some(e) = raised.into_inner() {
                return Err(e);
            }
            outcome
        }
    };
    result
        .map(|inner| PyRunResult { inner })
        .map_err(value_error)
}

/// Exhaustive grid minimization of a registered objective.
#[pyfunction]
#[pyo3(signature = (objective, resolution, dim = None, bounds = None))]
fn grid_search(
    py: Python<'_>,
    objective: &str,
    resolution: usize,
    dim: Option<usize>,
    bounds: Option<Vec<(f64, f64)>>,
) -> PyResult<(Vec<f64>, f64)> {
    let obj = registered(objective, dim)?;
    let bounds = match bounds {
        Some(b) => to_box(b)?,
        None => obj.default_init_box().clone(),
    };
    let grid = GridSpec::new(bounds, resolution);
    py.detach(|| oracle::grid_search(&obj, &grid))
        .map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (objective, n_evals, seed = 0, dim = None, bounds = None))]
fn random_search_baseline(
    objective: &str,
    n_evals: usize,
    seed: u64,
    dim: Option<usize>,
    bounds: Option<Vec<(f64, f64)>>,
) -> PyResult<(Vec<f64>, f64)> {
    let obj = registered(objective, dim)?;
    let bounds = match bounds {
        Some(b) => to_box(b)?,
        None => obj.default_init_box().clone(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    oracle::random_search_baseline(&obj, &bounds, n_evals, &mut rng).map_err(value_error)
}

/// Runs a seeded multi-trial campaign. Writes artifacts when `out_dir` is
/// given and returns the summary document as TOML text.
#[pyfunction]
#[pyo3(signature = (
    objective, *, dim = None, trials = 1, seed = 0, iters = None, d0 = None, delta0 = None,
    eta_d = None, offset_d = None, eta_delta = None, init_box = None, clamp = false,
    target = None, stall = None, out_dir = None, traj = "first"
))]
#[allow(clippy::too_many_arguments)]
fn run_campaign(
    py: Python<'_>,
    objective: String,
    dim: Option<usize>,
    trials: usize,
    seed: u64,
    iters: Option<usize>,
    d0: Option<f64>,
    delta0: Option<f64>,
    eta_d: Option<f64>,
    offset_d: Option<f64>,
    eta_delta: Option<f64>,
    init_box: Option<String>,
    clamp: bool,
    target: Option<f64>,
    stall: Option<usize>,
    out_dir: Option<PathBuf>,
    traj: &str,
) -> PyResult<String> {
    let traj = match traj {
        "all" => TrajMode::All,
        "first" => TrajMode::First,
        "none" => TrajMode::None,
        other => {
            return Err(PyValueError::new_err(format!(
                "traj must be all, first or none, got `{other}`"
            )))
        }
    };
    let write = out_dir.is_some();
    let layer = ConfigLayer {
        objective: Some(objective),
        dim,
        iters,
        d0,
        delta0,
        eta_d,
        offset_d,
        eta_delta,
        trials: Some(trials),
        seed: Some(seed),
        init_box,
        clamp: Some(clamp),
        target,
        stall,
        out_dir,
        traj: Some(traj),
    };
    let config = ExperimentConfig::from_layer(&layer).map_err(cli_error)?;
    let summary = py
        .detach(|| {
            if write {
                cli::run_campaign(&config)
            } else {
                cli::execute_campaign(&config).map(|(s, _)| s)
            }
        })
        .map_err(cli_error)?;
    Ok(cli::SummaryDocument::from_summary(&summary).to_toml_string())
}

#[pymodule]
pub fn pybas(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRunResult>()?;
    m.add_function(wrap_pyfunction!(michalewicz, m)?)?;
    m.add_function(wrap_pyfunction!(goldstein_price, m)?)?;
    m.add_function(wrap_pyfunction!(sphere, m)?)?;
    m.add_function(wrap_pyfunction!(objective_info, m)?)?;
    m.add_function(wrap_pyfunction!(sample_direction, m)?)?;
    m.add_function(wrap_pyfunction!(antenna_probe, m)?)?;
    m.add_function(wrap_pyfunction!(detect_step, m)?)?;
    m.add_function(wrap_pyfunction!(advance_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(grid_search, m)?)?;
    m.add_function(wrap_pyfunction!(random_search_baseline, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    m.add("OBJECTIVES", objectives::OBJECTIVE_NAMES.to_vec())?;
    Ok(())
}
