use antagonistic_core::exact::{self, Functional, ThetaArray};
use antagonistic_core::laws;
use antagonistic_core::matgen::{self, EnsembleSpec, PairDensity};
use antagonistic_core::perturb::{self, PerturbationInput};
use antagonistic_core::spectral::{self, Spectrum};
use antagonistic_core::{Error, RealMatrix};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. } | Error::EmptySpectrum => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Hands a serializable report to Python as plain dicts and lists.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<RealMatrix> {
    RealMatrix::from_rows(&rows).map_err(err)
}

fn theta(rows: &[Vec<f64>]) -> PyResult<ThetaArray> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("theta must be a square array"));
    }
    ThetaArray::from_fn(n, |i, j| rows[i][j]).map_err(err)
}

/// A random-matrix ensemble: dimension, master seed and composition.
#[pyclass(name = "Ensemble", frozen, module = "antagonistic")]
struct PyEnsemble {
    inner: EnsembleSpec,
}

#[pymethods]
impl PyEnsemble {
    /// `composition` is the JSON object, e.g. `{"kind": "antagonistic", "pairs": {"kind": "gaussian-antagonistic"}}`.
    #[new]
    #[pyo3(signature = (composition, n, seed = 0))]
    fn new(composition: &str, n: usize, seed: u64) -> PyResult<Self> {
        let composition = serde_json::from_str(composition).map_err(json_err)?;
        let inner = EnsembleSpec::new(n, seed, composition);
        inner.validate().map_err(err)?;
        Ok(PyEnsemble { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: EnsembleSpec = serde_json::from_str(text).map_err(json_err)?;
        inner.validate().map_err(err)?;
        Ok(PyEnsemble { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[pyo3(signature = (index = 0))]
    fn sample(&self, index: u64) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.inner.sample_nth(index).map_err(err)?.rows())
    }

    #[pyo3(signature = (index = 0))]
    fn spectrum(&self, py: Python<'_>, index: u64) -> PyResult<PySpectrum> {
        let m = self.inner.sample_nth(index).map_err(err)?;
        let inner = py.detach(|| spectral::eigenvalues(&m)).map_err(err)?;
        Ok(PySpectrum { inner })
    }

    /// Monte Carlo mean of `functional` with the exact value when available.
    #[pyo3(signature = (functional = "det", trials = 10_000))]
    fn mc_expect<'py>(&self, py: Python<'py>, functional: &str, trials: usize) -> PyResult<Bound<'py, PyAny>> {
        let f: Functional = functional.parse().map_err(err)?;
        let spec = self.inner;
        let est = py.detach(|| exact::mc_expect(&spec, f, trials)).map_err(err)?;
        let exact_value = match exact::theta_for(&spec).map_err(err)? {
            Some(t) => f.exact(&t).ok(),
            None => None,
        };
        let report = serde_json::json!({
            "mc": est,
            "exact": exact_value,
            "z_score": exact_value.map(|v| est.z_score(v)),
        });
        to_py(py, &report)
    }

    fn __repr__(&self) -> String {
        format!("Ensemble(n={}, seed={}, composition={:?})", self.inner.n, self.inner.seed, self.inner.composition)
    }
}

/// Eigenvalues sorted by real then imaginary part.
#[pyclass(name = "Spectrum", frozen, module = "antagonistic")]
struct PySpectrum {
    inner: Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn eigenvalues(&self) -> Vec<Complex64> {
        self.inner.eigenvalues.clone()
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    fn stability<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &spectral::stability_report(&self.inner).map_err(err)?)
    }

    fn real_range(&self) -> Option<(f64, f64)> {
        self.inner.real_range()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Spectrum(len={}, residual={:e})", self.inner.len(), self.inner.residual)
    }
}

#[pyfunction]
fn eigenvalues(py: Python<'_>, rows: Vec<Vec<f64>>) -> PyResult<PySpectrum> {
    let m = matrix(rows)?;
    let inner = py.detach(|| spectral::eigenvalues(&m)).map_err(err)?;
    Ok(PySpectrum { inner })
}

/// `(re_lo, re_hi, im_lo, im_hi)`.
#[pyfunction]
fn bendixson_box(rows: Vec<Vec<f64>>) -> PyResult<(f64, f64, f64, f64)> {
    let b = spectral::bendixson_box(&matrix(rows)?).map_err(err)?;
    Ok((b.re_lo, b.re_hi, b.im_lo, b.im_hi))
}

#[pyfunction]
fn is_antagonistic(rows: Vec<Vec<f64>>) -> PyResult<bool> {
    Ok(matgen::is_antagonistic(&matrix(rows)?))
}

#[pyfunction]
fn pfaffian(rows: Vec<Vec<f64>>) -> PyResult<f64> {
    Ok(exact::pfaffian(&matrix(rows)?))
}

#[pyfunction]
fn determinant(rows: Vec<Vec<f64>>) -> PyResult<f64> {
    Ok(exact::determinant(&matrix(rows)?))
}

/// Marginal moments and `theta = -E[xy]` of a pair density given as JSON.
#[pyfunction]
#[pyo3(signature = (density, i = 0, k = 1))]
fn pair_moments<'py>(py: Python<'py>, density: &str, i: usize, k: usize) -> PyResult<Bound<'py, PyAny>> {
    let d: PairDensity = serde_json::from_str(density).map_err(json_err)?;
    d.validate("density").map_err(err)?;
    to_py(py, &d.moments(i, k))
}

#[pyfunction]
fn rho_from_density(density: &str) -> PyResult<f64> {
    let d: PairDensity = serde_json::from_str(density).map_err(json_err)?;
    laws::rho_from_density(&d).map_err(err)
}

/// Coefficients of `E[det(z I - A)]`, lowest power first; `theta[i][j]`, `i < j`, is read.
#[pyfunction]
fn expected_char_poly(theta_rows: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let p = exact::expected_char_poly(&theta(&theta_rows)?).map_err(err)?;
    Ok(p.coefficients)
}

#[pyfunction]
fn expected_det(theta_rows: Vec<Vec<f64>>) -> PyResult<f64> {
    exact::expected_det(&theta(&theta_rows)?).map_err(err)
}

/// Perturbative extremes of `diag(d) + eps A` for antagonistic `A`.
#[pyfunction]
fn predict_extremes<'py>(py: Python<'py>, d: Vec<f64>, a: Vec<Vec<f64>>, eps: f64) -> PyResult<Bound<'py, PyAny>> {
    let input = PerturbationInput::new(d, matrix(a)?, eps).map_err(err)?;
    to_py(py, &perturb::predict(&input).map_err(err)?)
}

#[pymodule]
fn antagonistic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEnsemble>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(bendixson_box, m)?)?;
    m.add_function(wrap_pyfunction!(is_antagonistic, m)?)?;
    m.add_function(wrap_pyfunction!(pfaffian, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(pair_moments, m)?)?;
    m.add_function(wrap_pyfunction!(rho_from_density, m)?)?;
    m.add_function(wrap_pyfunction!(expected_char_poly, m)?)?;
    m.add_function(wrap_pyfunction!(expected_det, m)?)?;
    m.add_function(wrap_pyfunction!(predict_extremes, m)?)?;
    Ok(())
}
