//! Python bindings: the parameter model, closed-form spectrum and
//! eigenfunctions, the numerical solver and the limit studies.

use lienard_core::classical::{analytic_solution, analytic_state, integrate_lienard};
use lienard_core::eigensolver::{verify_spectrum, YGrid};
use lienard_core::quantize::effective_potential;
use lienard_core::specfun;
use lienard_core::susy::spectrum_of;
use lienard_core::wavefn::{self, gram_defect};
use lienard_core::{AmbiguityParams, Error, PhysicalParams};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } | Error::Overflow(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Validated oscillator parameters.
#[pyclass(name = "Model", frozen)]
struct Model {
    inner: lienard_core::Model,
}

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (k, omega, hbar = 1.0, alpha = 0.0, gamma = 0.0))]
    fn new(k: f64, omega: f64, hbar: f64, alpha: f64, gamma: f64) -> PyResult<Self> {
        let phys = PhysicalParams::new(k, omega, hbar).map_err(py_err)?;
        let amb = AmbiguityParams::new(alpha, gamma).map_err(py_err)?;
        let inner = lienard_core::Model::new(phys, amb).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.phys.k
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.inner.phys.omega
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.phys.hbar
    }

    #[getter]
    fn alpha_gamma(&self) -> f64 {
        self.inner.amb.product()
    }

    #[getter]
    fn is_harmonic(&self) -> bool {
        self.inner.is_harmonic()
    }

    /// `None` on the harmonic branch.
    #[getter]
    fn a_script(&self) -> Option<f64> {
        self.inner.derived().map(|d| d.a_script)
    }

    #[getter]
    fn lambda_(&self) -> Option<f64> {
        self.inner.derived().map(|d| d.lambda)
    }

    #[getter]
    fn p_max(&self) -> Option<f64> {
        self.inner.derived().map(|d| d.p_max)
    }

    #[getter]
    fn shift(&self) -> f64 {
        self.inner.shift()
    }

    fn energy(&self, n: usize) -> f64 {
        (n as f64 + 0.5 + self.inner.shift()) * self.inner.hbar_omega()
    }

    fn spectrum(&self, n_max: usize) -> Vec<f64> {
        spectrum_of(&self.inner, n_max).levels.iter().map(|l| l.energy).collect()
    }

    fn potential(&self, p: f64) -> PyResult<f64> {
        effective_potential(&self.inner, p).map_err(py_err)
    }

    fn psi(&self, n: usize, p: f64) -> PyResult<f64> {
        wavefn::psi(&self.inner, n, p).map_err(py_err)
    }

    fn psi_many(&self, n: usize, ps: Vec<f64>) -> PyResult<Vec<f64>> {
        let state = wavefn::Eigenstate::new(&self.inner, n);
        ps.into_iter().map(|p| state.eval(p).map_err(py_err)).collect()
    }

    fn overlap_matrix(&self, n_max: usize) -> PyResult<Vec<Vec<f64>>> {
        wavefn::overlap_matrix(&self.inner, n_max).map_err(py_err)
    }

    fn gram_defect(&self, n_max: usize) -> PyResult<f64> {
        Ok(gram_defect(&self.overlap_matrix(n_max)?))
    }

    /// `(n, analytic, numeric, abs_error)` per level from the finite-difference solver.
    #[pyo3(signature = (n_max, y_max = 150.0, points = 6000))]
    fn solve_spectrum(&self, n_max: usize, y_max: f64, points: usize) -> PyResult<Vec<(usize, f64, f64, f64)>> {
        let grid = YGrid::new(y_max, points).map_err(py_err)?;
        let check = verify_spectrum(&self.inner, n_max, &grid).map_err(py_err)?;
        Ok(check.levels.iter().map(|l| (l.n, l.analytic, l.numeric, l.abs_error)).collect())
    }

    fn __repr__(&self) -> String {
        let p = &self.inner.phys;
        format!("Model(k={}, omega={}, hbar={}, alpha_gamma={})", p.k, p.omega, p.hbar, self.inner.amb.product())
    }
}

#[pyfunction]
#[pyo3(signature = (n, p, omega = 1.0, hbar = 1.0))]
fn lho_psi(n: usize, p: f64, omega: f64, hbar: f64) -> PyResult<f64> {
    let phys = PhysicalParams::new(0.0, omega, hbar).map_err(py_err)?;
    Ok(wavefn::lho_psi(&phys, n, p))
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    specfun::log_gamma(x).map_err(py_err)
}

#[pyfunction]
fn laguerre(n: usize, alpha: f64, y: f64) -> f64 {
    specfun::laguerre_assoc(n, alpha, y)
}

#[pyfunction]
fn hermite(n: usize, x: f64) -> f64 {
    specfun::hermite(n, x)
}

/// Closed-form trajectory value `x(t)`.
#[pyfunction]
#[pyo3(signature = (k, omega, amplitude, t, phase = 0.0))]
fn classical_position(k: f64, omega: f64, amplitude: f64, t: f64, phase: f64) -> PyResult<f64> {
    let phys = PhysicalParams::new(k, omega, 1.0).map_err(py_err)?;
    analytic_solution(&phys, amplitude, phase, t).map_err(py_err)
}

/// RK4 from the closed-form initial state; returns `(times, positions)`.
#[pyfunction]
#[pyo3(signature = (k, omega, amplitude, t_end, step, phase = 0.0))]
fn integrate(k: f64, omega: f64, amplitude: f64, t_end: f64, step: f64, phase: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let phys = PhysicalParams::new(k, omega, 1.0).map_err(py_err)?;
    let start = analytic_state(&phys, amplitude, phase, 0.0).map_err(py_err)?;
    let traj = integrate_lienard(&phys, start, t_end, step).map_err(py_err)?;
    Ok((traj.times, traj.positions))
}

/// `(k, a, deviation)` rows of the approach to the harmonic eigenfunction.
#[pyfunction]
#[pyo3(signature = (n, k_values, omega = 1.0, hbar = 1.0))]
fn limit_deviation(n: usize, k_values: Vec<f64>, omega: f64, hbar: f64) -> PyResult<Vec<(f64, f64, f64)>> {
    let base = PhysicalParams::new(0.0, omega, hbar).map_err(py_err)?;
    let rows = wavefn::limit_deviation(n, &k_values, &base, &AmbiguityParams::default()).map_err(py_err)?;
    Ok(rows.iter().map(|r| (r.k, r.a_script, r.deviation)).collect())
}

/// `(a, n, relative_error)` rows.
#[pyfunction]
fn gamma_asymptotic_check(a_values: Vec<f64>) -> PyResult<Vec<(f64, usize, f64)>> {
    let rows = wavefn::gamma_asymptotic_check(&a_values).map_err(py_err)?;
    Ok(rows.iter().map(|r| (r.a_script, r.n, r.rel_error)).collect())
}

/// `(a, deviation)` rows.
#[pyfunction]
fn laguerre_hermite_limit(n: usize, x: f64, a_values: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let rows = wavefn::laguerre_hermite_limit(n, x, &a_values).map_err(py_err)?;
    Ok(rows.iter().map(|r| (r.a_script, r.deviation)).collect())
}

#[pymodule]
fn lienard(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(lho_psi, m)?)?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(classical_position, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(limit_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_asymptotic_check, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre_hermite_limit, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
