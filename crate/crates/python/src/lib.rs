//! Python module `ccsketch`.

use std::str::FromStr;

use ccsketch_core as core;
use ccsketch_core::{EstimatorKind, ProjectionMode, Route, Skewness};
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::OutOfBounds { .. } => PyIndexError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: FromStr<Err = core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

#[pyclass(name = "ProjectionSketch", module = "ccsketch", from_py_object)]
#[derive(Clone)]
struct PySketch {
    inner: core::ProjectionSketch,
}

#[pymethods]
impl PySketch {
    #[new]
    #[pyo3(signature = (alpha, k, seed, dimension, skew = "skewed"))]
    fn new(alpha: f64, k: usize, seed: u64, dimension: u64, skew: &str) -> PyResult<Self> {
        let inner = core::ProjectionSketch::new(alpha, parse(skew)?, k, seed, dimension).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Sketch of a sparse vector given as `(index, value)` pairs.
    #[staticmethod]
    #[pyo3(signature = (entries, alpha, k, seed, dimension, skew = "skewed", projection = "streamed"))]
    fn project(
        entries: Vec<(u64, f64)>,
        alpha: f64,
        k: usize,
        seed: u64,
        dimension: u64,
        skew: &str,
        projection: &str,
    ) -> PyResult<Self> {
        let v = core::SparseVector::new(dimension, entries).map_err(to_py)?;
        let inner = core::project_vector(&v, alpha, parse(skew)?, k, seed, parse(projection)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(Self { inner: core::ProjectionSketch::from_bytes(data).map_err(to_py)? })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_bytes())
    }

    fn update(&mut self, index: u64, increment: f64) -> PyResult<()> {
        self.inner.update(index, increment).map_err(to_py)
    }

    fn extend(&mut self, updates: Vec<(u64, f64)>) -> PyResult<()> {
        let updates = updates.into_iter().map(|(i, a)| core::TurnstileUpdate::new(i, a));
        self.inner.extend(updates).map_err(to_py)
    }

    fn merge(&self, other: &PySketch) -> PyResult<Self> {
        Ok(Self { inner: self.inner.merge(&other.inner).map_err(to_py)? })
    }

    fn merge_from(&mut self, other: &PySketch) -> PyResult<()> {
        self.inner.merge_from(&other.inner).map_err(to_py)
    }

    /// Moment estimate with the named estimator ("gm", "hm", "oq", "sym-gm").
    #[pyo3(signature = (estimator = "oq"))]
    fn estimate(&self, estimator: &str) -> PyResult<f64> {
        let kind: EstimatorKind = parse(estimator)?;
        Ok(core::estimate(kind, &self.inner).map_err(to_py)?.value)
    }

    /// Shannon entropy through the Rényi or Tsallis entropy at the sketch's alpha.
    #[pyo3(signature = (estimator = "oq", route = "renyi"))]
    fn shannon(&self, estimator: &str, route: &str) -> PyResult<f64> {
        let kind: EstimatorKind = parse(estimator)?;
        let f_hat = core::estimate(kind, &self.inner).map_err(to_py)?;
        let route: Route = parse(route)?;
        Ok(core::shannon_via(&f_hat, self.inner.f1(), route, None).map_err(to_py)?.value)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn skew(&self) -> String {
        self.inner.skew().to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed()
    }

    #[getter]
    fn dimension(&self) -> u64 {
        self.inner.dimension()
    }

    #[getter]
    fn update_count(&self) -> u64 {
        self.inner.update_count()
    }

    #[getter]
    fn f1(&self) -> f64 {
        self.inner.f1()
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.x()
    }

    fn __len__(&self) -> usize {
        self.inner.k()
    }

    fn __eq__(&self, other: &PySketch) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "ProjectionSketch(alpha={}, k={}, seed={}, dimension={}, skew={:?})",
            self.inner.alpha(),
            self.inner.k(),
            self.inner.seed(),
            self.inner.dimension(),
            self.inner.skew().to_string()
        )
    }
}

/// Moment estimate from projected samples. The samples must come from the
/// factored sampler for the skewed estimators.
#[pyfunction]
#[pyo3(signature = (samples, alpha, estimator = "oq"))]
fn estimate_samples(mut samples: Vec<f64>, alpha: f64, estimator: &str) -> PyResult<f64> {
    let est = core::MomentEstimator::new(parse(estimator)?, alpha, samples.len()).map_err(to_py)?;
    est.estimate_samples(&mut samples).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (seed, i, j, k, alpha, skew = "skewed"))]
fn projection_entry(seed: u64, i: u64, j: u64, k: u64, alpha: f64, skew: &str) -> PyResult<f64> {
    core::projection_entry(seed, i, j, k, alpha, parse::<Skewness>(skew)?).map_err(to_py)
}

/// The raw 64-bit word at `(counter, lane)` of the tape seeded with `seed`.
#[pyfunction]
fn tape_word(seed: u64, counter: u64, lane: u64) -> u64 {
    core::RandomTape::new(seed).word(counter, lane)
}

#[pyfunction]
fn angle_exp(seed: u64, counter: u64) -> (f64, f64) {
    core::RandomTape::new(seed).angle_exp_at(counter)
}

#[pyfunction]
fn derive_seed(parts: Vec<u64>) -> u64 {
    core::derive_seed(&parts)
}

/// `(q_star, w_alpha, v_oq)` for a tabulated alpha.
#[pyfunction]
fn quantile_constants(alpha: f64) -> PyResult<(f64, f64, f64)> {
    let c = core::quantile_constants(alpha).map_err(to_py)?;
    Ok((c.q_star, c.w_alpha, c.v_oq))
}

#[pyfunction]
fn supported_alphas() -> Vec<f64> {
    core::supported_alphas().collect()
}

#[pyfunction]
fn variance_factor(estimator: &str, alpha: f64) -> PyResult<f64> {
    core::variance_factor(parse(estimator)?, alpha).map_err(to_py)
}

fn sparse(entries: Vec<(u64, f64)>) -> PyResult<core::SparseVector> {
    let dimension = entries.iter().map(|e| e.0 + 1).max().unwrap_or(1);
    core::SparseVector::new(dimension, entries).map_err(to_py)
}

#[pyfunction]
fn exact_moment(entries: Vec<(u64, f64)>, alpha: f64) -> PyResult<f64> {
    Ok(core::exact_moment(&sparse(entries)?, alpha))
}

#[pyfunction]
fn exact_shannon(entries: Vec<(u64, f64)>) -> PyResult<f64> {
    core::exact_shannon(&sparse(entries)?).map_err(to_py)
}

#[pyfunction]
fn exact_renyi(entries: Vec<(u64, f64)>, alpha: f64) -> PyResult<f64> {
    core::exact_renyi(&sparse(entries)?, alpha).map_err(to_py)
}

#[pyfunction]
fn exact_tsallis(entries: Vec<(u64, f64)>, alpha: f64) -> PyResult<f64> {
    core::exact_tsallis(&sparse(entries)?, alpha).map_err(to_py)
}

/// Grid point with the smallest Monte-Carlo MSE for the Shannon estimate,
/// and the whole `(alpha, mse)` curve.
#[pyfunction]
#[pyo3(signature = (entries, k, alphas, estimator = "oq", route = "renyi", repetitions = 200, seed = 0, projection = "distributional"))]
#[allow(clippy::too_many_arguments)]
fn select_optimal_alpha(
    py: Python<'_>,
    entries: Vec<(u64, f64)>,
    k: usize,
    alphas: Vec<f64>,
    estimator: &str,
    route: &str,
    repetitions: usize,
    seed: u64,
    projection: &str,
) -> PyResult<(f64, Vec<(f64, f64)>)> {
    let v = sparse(entries)?;
    let kind: EstimatorKind = parse(estimator)?;
    let route: Route = parse(route)?;
    let mode: ProjectionMode = parse(projection)?;
    let sel = py
        .detach(|| core::select_optimal_alpha(&v, k, kind, route, &alphas, repetitions, seed, mode))
        .map_err(to_py)?;
    Ok((sel.alpha_star, sel.curve))
}

#[pymodule]
#[pyo3(name = "ccsketch")]
fn ccsketch_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySketch>()?;
    m.add_function(wrap_pyfunction!(estimate_samples, m)?)?;
    m.add_function(wrap_pyfunction!(projection_entry, m)?)?;
    m.add_function(wrap_pyfunction!(tape_word, m)?)?;
    m.add_function(wrap_pyfunction!(angle_exp, m)?)?;
    m.add_function(wrap_pyfunction!(derive_seed, m)?)?;
    m.add_function(wrap_pyfunction!(quantile_constants, m)?)?;
    m.add_function(wrap_pyfunction!(supported_alphas, m)?)?;
    m.add_function(wrap_pyfunction!(variance_factor, m)?)?;
    m.add_function(wrap_pyfunction!(exact_moment, m)?)?;
    m.add_function(wrap_pyfunction!(exact_shannon, m)?)?;
    m.add_function(wrap_pyfunction!(exact_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(exact_tsallis, m)?)?;
    m.add_function(wrap_pyfunction!(select_optimal_alpha, m)?)?;
    Ok(())
}
