//! Python bindings. Structured results come back as plain dicts and lists.

use markovdyn::classify::{classify_on, ConvergencePolicy};
use markovdyn::dynamics;
use markovdyn::error::Error;
use markovdyn::inverse_kernel::{kernel_basis, KernelOptions, RightInverse};
use markovdyn::operators::{make_walk, BandedOp, PSeq};
use markovdyn::seqspace::{FinSeq, Lattice, Space, Tolerance};
use markovdyn::spectral;
use markovdyn::walk_oracle::{estimate_transition, WalkConfig};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::Hypothesis(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, x: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(x).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn space_of(s: &str) -> PyResult<Space> {
    s.parse().map_err(err)
}

fn real_vector(lattice: Lattice, offset: i64, values: &[f64]) -> PyResult<FinSeq> {
    FinSeq::from_reals(lattice, offset, values).map_err(err)
}

/// Birth-death walk on `half` (Z+) or `line` (Z).
#[pyclass(name = "Walk", frozen)]
struct PyWalk {
    op: BandedOp,
}

#[pymethods]
impl PyWalk {
    #[new]
    #[pyo3(signature = (pseq, lattice = "half"))]
    fn new(pseq: &str, lattice: &str) -> PyResult<Self> {
        let lattice: Lattice = lattice.parse().map_err(err)?;
        let pseq: PSeq = pseq.parse().map_err(err)?;
        Ok(PyWalk {
            op: make_walk(lattice, pseq).map_err(err)?,
        })
    }

    #[getter]
    fn pseq(&self) -> String {
        self.op.pseq().to_string()
    }

    fn entry(&self, i: i64, j: i64) -> f64 {
        self.op.entry(i, j)
    }

    fn power_entry(&self, n: usize, i: i64, j: i64) -> PyResult<f64> {
        self.op.power_entry(n, i, j).map_err(err)
    }

    /// `W^n x` for `x` stored from `offset`; returns `(offset, values)`.
    #[pyo3(signature = (x, n = 1, offset = 0))]
    fn apply(&self, x: Vec<f64>, n: usize, offset: i64) -> PyResult<(i64, Vec<f64>)> {
        let v = real_vector(self.op.lattice(), offset, &x)?;
        let y = self.op.power_apply(n, &v).map_err(err)?;
        Ok((y.offset(), y.re()))
    }

    /// `S^n v` from index 0.
    #[pyo3(signature = (v, n = 1))]
    fn right_inverse(&self, v: Vec<f64>, n: usize) -> PyResult<Vec<f64>> {
        let s = RightInverse::new(&self.op).map_err(err)?;
        let u = s.power(&FinSeq::half_line(&v), n).map_err(err)?;
        Ok(u.window(0, u.end()).iter().map(|z| z.re).collect())
    }

    /// Basis vectors of `Ker W^n`.
    fn kernel_basis(&self, n: usize) -> PyResult<Vec<Vec<f64>>> {
        let b = kernel_basis(&self.op, n, &KernelOptions::default()).map_err(err)?;
        Ok(b.vectors.iter().map(|v| v.re()).collect())
    }

    #[pyo3(signature = (horizon = 10_000))]
    fn classify(&self, py: Python<'_>, horizon: usize) -> PyResult<Py<PyAny>> {
        let v = classify_on(self.op.lattice(), self.op.pseq(), horizon, &ConvergencePolicy::default()).map_err(err)?;
        to_py(py, &v)
    }

    #[pyo3(signature = (n, i, j, samples = 100_000, seed = 0))]
    fn estimate_transition(&self, py: Python<'_>, n: usize, i: i64, j: i64, samples: u64, seed: u64) -> PyResult<Py<PyAny>> {
        let cfg = WalkConfig::new(self.op.lattice(), self.op.pseq().clone(), seed, samples).map_err(err)?;
        to_py(py, &estimate_transition(&cfg, n, i, j).map_err(err)?)
    }

    #[pyo3(signature = (lam, space = "c0", n_max = 20))]
    fn fhc_certificate(&self, py: Python<'_>, lam: Complex64, space: &str, n_max: usize) -> PyResult<Py<PyAny>> {
        let c = dynamics::fhc_chaos_certificate(&self.op, lam, space_of(space)?, n_max, &Tolerance::default())
            .map_err(err)?;
        to_py(py, &c)
    }

    #[pyo3(signature = (space = "c0", n_max = 20))]
    fn supercyclicity_certificate(&self, py: Python<'_>, space: &str, n_max: usize) -> PyResult<Py<PyAny>> {
        let c = dynamics::supercyclicity_criterion_certificate(&self.op, space_of(space)?, n_max).map_err(err)?;
        to_py(py, &c)
    }

    fn __repr__(&self) -> String {
        format!("Walk({:?}, {:?})", self.op.pseq().to_string(), self.op.lattice().name())
    }
}

#[pyfunction]
#[pyo3(signature = (p, lam, space = "c0"))]
fn point_spectrum(py: Python<'_>, p: f64, lam: Complex64, space: &str) -> PyResult<Py<PyAny>> {
    to_py(py, &spectral::point_spectrum_probe(p, lam, space_of(space)?).map_err(err)?)
}

#[pyfunction]
fn eigen_sequence(p: f64, lam: Complex64, n_max: usize) -> PyResult<Vec<Complex64>> {
    spectral::eigen_sequence(p, lam, n_max).map_err(err)
}

#[pyfunction]
fn g_zero_eigenvector(pseq: &str, n_max: usize) -> PyResult<Vec<f64>> {
    spectral::g_zero_eigenvector(&pseq.parse().map_err(err)?, n_max).map_err(err)
}

#[pyfunction]
fn dual_zero_eigenvector(pseq: &str, n_max: usize) -> PyResult<Vec<f64>> {
    spectral::dual_zero_eigenvector(&pseq.parse().map_err(err)?, n_max).map_err(err)
}

/// Runs the command-line tool in-process; returns `(exit_code, report)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    markovdyn::cli::run(std::iter::once("markovdyn".to_string()).chain(args))
}

#[pymodule]
fn pymarkovdyn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWalk>()?;
    m.add_function(wrap_pyfunction!(point_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(eigen_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(g_zero_eigenvector, m)?)?;
    m.add_function(wrap_pyfunction!(dual_zero_eigenvector, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("__version__", markovdyn::cli::TOOL_VERSION)?;
    Ok(())
}
