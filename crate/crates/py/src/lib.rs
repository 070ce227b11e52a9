//! Python bindings: baths, rates, cycles, optimizers and figure datasets.

use btz_otto::cycle::{self, EntropyConvention};
use btz_otto::optimize::{self, EngineObjective, FridgeObjective, SearchOptions};
use btz_otto::response::{self, Boundary, DEFAULT_N_MAX, DEFAULT_TERM_TOL};
use btz_otto::specfun::{self, ConicalArgs};
use btz_otto::sweep::{self, Figure};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: btz_otto::Error) -> PyErr {
    match e {
        btz_otto::Error::Invalid { .. } | btz_otto::Error::Domain { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for btz_otto::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// A thermal bath seen by a static detector.
#[pyclass(name = "BathSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBathSpec(response::BathSpec);

#[pymethods]
impl PyBathSpec {
    #[new]
    #[pyo3(signature = (temperature, mass = 0.01, zeta = 0, n_max = DEFAULT_N_MAX, term_tol = DEFAULT_TERM_TOL))]
    fn new(temperature: f64, mass: f64, zeta: i64, n_max: usize, term_tol: f64) -> PyResult<Self> {
        let b = Boundary::from_zeta(zeta).py()?;
        let spec = response::BathSpec::new(temperature, mass, b)
            .and_then(|s| s.with_truncation(n_max, term_tol))
            .py()?;
        Ok(PyBathSpec(spec))
    }

    #[getter]
    fn temperature(&self) -> f64 {
        self.0.temperature
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.0.mass
    }

    #[getter]
    fn zeta(&self) -> i32 {
        self.0.boundary.zeta()
    }

    fn __repr__(&self) -> String {
        format!(
            "BathSpec(temperature={}, mass={}, zeta={})",
            self.0.temperature,
            self.0.mass,
            self.0.boundary.zeta()
        )
    }
}

#[pyclass(name = "RateData", frozen, skip_from_py_object)]
struct PyRateData(response::RateData);

#[pymethods]
impl PyRateData {
    #[getter]
    fn gamma_plus(&self) -> f64 {
        self.0.gamma_plus
    }
    #[getter]
    fn gamma_minus(&self) -> f64 {
        self.0.gamma_minus
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa
    }
    #[getter]
    fn truncated(&self) -> bool {
        self.0.truncated
    }

    fn __repr__(&self) -> String {
        format!("RateData(gamma={}, kappa={})", self.0.gamma, self.0.kappa)
    }
}

/// Otto cycle parameters; both baths share mass, boundary and truncation.
#[pyclass(name = "CycleConfig", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCycleConfig(cycle::CycleConfig);

#[pymethods]
impl PyCycleConfig {
    #[new]
    #[pyo3(signature = (omega_c, omega_h, t_h, t_c, tau_h, tau_c, mass = 0.01, zeta = -1, entropy = "standard"))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        omega_c: f64,
        omega_h: f64,
        t_h: f64,
        t_c: f64,
        tau_h: f64,
        tau_c: f64,
        mass: f64,
        zeta: i64,
        entropy: &str,
    ) -> PyResult<Self> {
        let b = Boundary::from_zeta(zeta).py()?;
        let entropy = match entropy {
            "standard" => EntropyConvention::Standard,
            "paper" => EntropyConvention::Paper,
            other => return Err(PyValueError::new_err(format!("unknown entropy convention `{other}`"))),
        };
        Ok(PyCycleConfig(cycle::CycleConfig {
            omega_c,
            omega_h,
            hot: response::BathSpec::new(t_h, mass, b).py()?,
            cold: response::BathSpec::new(t_c, mass, b).py()?,
            tau_h,
            tau_c,
            entropy,
        }))
    }

    #[getter]
    fn omega_c(&self) -> f64 {
        self.0.omega_c
    }
    #[getter]
    fn omega_h(&self) -> f64 {
        self.0.omega_h
    }
    #[getter]
    fn t_h(&self) -> f64 {
        self.0.hot.temperature
    }
    #[getter]
    fn t_c(&self) -> f64 {
        self.0.cold.temperature
    }
    #[getter]
    fn tau_h(&self) -> f64 {
        self.0.tau_h
    }
    #[getter]
    fn tau_c(&self) -> f64 {
        self.0.tau_c
    }
}

#[pyclass(name = "CycleResult", frozen, skip_from_py_object)]
struct PyCycleResult(cycle::CycleResult);

#[pymethods]
impl PyCycleResult {
    #[getter]
    fn r3_in(&self) -> f64 {
        self.0.r3_in
    }
    #[getter]
    fn r3_h(&self) -> f64 {
        self.0.r3_h
    }
    #[getter]
    fn r3_c(&self) -> f64 {
        self.0.r3_c
    }
    #[getter]
    fn w1(&self) -> f64 {
        self.0.w1
    }
    #[getter]
    fn qh(&self) -> f64 {
        self.0.qh
    }
    #[getter]
    fn w3(&self) -> f64 {
        self.0.w3
    }
    #[getter]
    fn qc(&self) -> f64 {
        self.0.qc
    }
    #[getter]
    fn w_tot(&self) -> f64 {
        self.0.w_tot
    }
    #[getter]
    fn closure_defect(&self) -> f64 {
        self.0.closure_defect
    }
    /// Engine efficiency, or None outside the engine regime.
    #[getter]
    fn efficiency(&self) -> Option<f64> {
        self.0.engine.map(|m| m.efficiency)
    }
    #[getter]
    fn power(&self) -> Option<f64> {
        self.0.engine.map(|m| m.power)
    }
    /// Refrigerator COP, or None outside the refrigerator regime.
    #[getter]
    fn cop(&self) -> Option<f64> {
        self.0.fridge.map(|m| m.cop)
    }
    #[getter]
    fn chi(&self) -> Option<f64> {
        self.0.fridge.map(|m| m.chi)
    }

    fn __repr__(&self) -> String {
        format!("CycleResult(w_tot={}, qh={}, qc={})", self.0.w_tot, self.0.qh, self.0.qc)
    }
}

#[pyclass(name = "OptimumReport", frozen, skip_from_py_object)]
struct PyOptimumReport(optimize::OptimumReport);

#[pymethods]
impl PyOptimumReport {
    #[getter]
    fn argmax(&self) -> f64 {
        self.0.argmax
    }
    #[getter]
    fn objective_value(&self) -> f64 {
        self.0.objective_value
    }
    #[getter]
    fn efficiency_or_cop_at_opt(&self) -> Option<f64> {
        self.0.efficiency_or_cop_at_opt
    }
    #[getter]
    fn bracket(&self) -> (f64, f64) {
        self.0.bracket
    }
    #[getter]
    fn iterations(&self) -> usize {
        self.0.iterations
    }
    #[getter]
    fn at_edge(&self) -> bool {
        self.0.at_edge
    }

    fn __repr__(&self) -> String {
        format!(
            "OptimumReport(argmax={}, objective_value={})",
            self.0.argmax, self.0.objective_value
        )
    }
}

/// Conical function `P_{-1/2+iξ}(x)` for `x ≥ 1`.
#[pyfunction]
#[pyo3(signature = (xi, x, tol = 1e-10))]
fn conical_p(xi: f64, x: f64, tol: f64) -> PyResult<f64> {
    specfun::conical_p(&ConicalArgs::new(xi, x).with_tol(tol)).py()
}

/// Local temperature of a static detector at radius `r`.
#[pyfunction]
fn kms_temperature(r: f64, mass: f64) -> PyResult<f64> {
    response::kms_temperature(r, mass).py()
}

/// `Γ(Ω)`; positive `omega` is excitation.
#[pyfunction]
fn transition_rate(omega: f64, bath: PyRef<'_, PyBathSpec>) -> PyResult<f64> {
    response::transition_rate(omega, &bath.0).py()
}

#[pyfunction]
fn rate_data(omega: f64, bath: PyRef<'_, PyBathSpec>) -> PyResult<PyRateData> {
    response::rate_data(omega, &bath.0).py().map(PyRateData)
}

#[pyfunction]
fn run_cycle(cfg: PyRef<'_, PyCycleConfig>) -> PyResult<PyCycleResult> {
    cycle::run_cycle(&cfg.0).py().map(PyCycleResult)
}

/// Maximize `"power"` or `"ecological"` over the hot gap.
#[pyfunction]
#[pyo3(signature = (cfg, objective = "power"))]
fn optimize_engine(cfg: PyRef<'_, PyCycleConfig>, objective: &str) -> PyResult<PyOptimumReport> {
    let objective = match objective {
        "power" => EngineObjective::Power,
        "ecological" => EngineObjective::Ecological,
        other => return Err(PyValueError::new_err(format!("unknown engine objective `{other}`"))),
    };
    optimize::optimize_engine(&cfg.0, objective, &SearchOptions::default())
        .py()
        .map(PyOptimumReport)
}

/// Maximize `"chi"` or `"ecological"` over the cold gap.
#[pyfunction]
#[pyo3(signature = (cfg, objective = "chi"))]
fn optimize_fridge(cfg: PyRef<'_, PyCycleConfig>, objective: &str) -> PyResult<PyOptimumReport> {
    let objective = match objective {
        "chi" => FridgeObjective::Chi,
        "ecological" => FridgeObjective::Ecological,
        other => return Err(PyValueError::new_err(format!("unknown refrigerator objective `{other}`"))),
    };
    optimize::optimize_fridge(&cfg.0, objective, &SearchOptions::default())
        .py()
        .map(PyOptimumReport)
}

type Row5 = (f64, Option<f64>, Option<f64>, Option<f64>, Option<f64>);

/// Rows of `(ratio, eta_star, eta_eco, eta_carnot, eta_ca)`.
#[pyfunction]
fn emp_curve(py: Python<'_>, cfg: PyRef<'_, PyCycleConfig>, ratios: Vec<f64>) -> PyResult<Vec<Row5>> {
    let cfg = cfg.0;
    let rows = py
        .detach(|| optimize::emp_curve(&cfg, &ratios, &SearchOptions::default()))
        .py()?;
    Ok(rows
        .iter()
        .map(|r| (r.ratio, r.eta_star, r.eta_eco, r.eta_carnot, r.eta_ca))
        .collect())
}

/// Rows of `(ratio, cop_star, cop_eco, cop_carnot, cop_yan)`.
#[pyfunction]
fn cop_curve(py: Python<'_>, cfg: PyRef<'_, PyCycleConfig>, ratios: Vec<f64>) -> PyResult<Vec<Row5>> {
    let cfg = cfg.0;
    let rows = py
        .detach(|| optimize::cop_curve(&cfg, &ratios, &SearchOptions::default()))
        .py()?;
    Ok(rows
        .iter()
        .map(|r| (r.ratio, r.cop_star, r.cop_eco, r.cop_carnot, r.cop_yan))
        .collect())
}

/// Default dataset of a figure as `(columns, rows)`; absent values are None.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn figure(py: Python<'_>, id: &str) -> PyResult<(Vec<String>, Vec<Vec<Option<f64>>>)> {
    let fig = Figure::parse(id).py()?;
    let ds = py
        .detach(|| sweep::figure_spec(fig).and_then(|s| sweep::run_sweep(&s)))
        .py()?;
    Ok((ds.columns, ds.rows))
}

#[pymodule]
#[pyo3(name = "btz_otto")]
fn btz_otto_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBathSpec>()?;
    m.add_class::<PyRateData>()?;
    m.add_class::<PyCycleConfig>()?;
    m.add_class::<PyCycleResult>()?;
    m.add_class::<PyOptimumReport>()?;
    m.add_function(wrap_pyfunction!(conical_p, m)?)?;
    m.add_function(wrap_pyfunction!(kms_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(transition_rate, m)?)?;
    m.add_function(wrap_pyfunction!(rate_data, m)?)?;
    m.add_function(wrap_pyfunction!(run_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_engine, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_fridge, m)?)?;
    m.add_function(wrap_pyfunction!(emp_curve, m)?)?;
    m.add_function(wrap_pyfunction!(cop_curve, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
