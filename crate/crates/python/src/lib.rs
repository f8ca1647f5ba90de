//! Python bindings: solving, cohomology, bracket tables, local models and
//! the verification suite.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde_json::Value;

use repspace::error::Error;
use repspace::lie::GroupElement;
use repspace::poly::rational_to_f64;
use repspace::strata::{self, LocalModelSpec, PoissonModel};
use repspace::words::{self, StratumLabel};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_stratum(s: &str) -> PyResult<StratumLabel> {
    s.parse().map_err(|_| PyValueError::new_err(format!("unknown stratum {s:?}; use Z, T or G")))
}

/// Converts JSON data to the matching Python objects.
fn json_to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    match v {
        Value::Null => Ok(py.None()),
        Value::Bool(b) => b.into_py_any(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_py_any(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_py_any(py),
        },
        Value::String(s) => s.into_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

/// A representation of the surface group in SU(2), images as unit
/// quaternions `(w, x, y, z)`.
#[pyclass(name = "Representation", module = "repspace_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRepresentation {
    inner: words::Representation,
}

#[pymethods]
impl PyRepresentation {
    #[new]
    fn new(genus: usize, images: Vec<[f64; 4]>) -> PyResult<Self> {
        let images = images.into_iter().map(|q| GroupElement::new(q[0], q[1], q[2], q[3])).collect();
        let inner = words::Representation::new(genus, images).map_err(to_py_err)?;
        Ok(PyRepresentation { inner })
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus
    }

    #[getter]
    fn images(&self) -> Vec<[f64; 4]> {
        self.inner.images.iter().map(|g| g.to_array()).collect()
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    /// Orbit type: "Z", "T" or "G".
    fn stratum(&self) -> &'static str {
        words::orbit_type(&self.inner).as_str()
    }

    /// Dimensions, pairing rank and λ analysis as a dict.
    fn cohomology(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let data = repspace::cohomology::cohomology(&self.inner).map_err(to_py_err)?;
        json_to_py(py, &data.to_json())
    }

    /// The `3 × 6ℓ` derivative of the relator map, as nested lists.
    fn relator_derivative(&self) -> Vec<Vec<f64>> {
        let m = words::relator_derivative(&self.inner);
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Representation(genus={}, stratum={}, residual={:e})",
            self.inner.genus,
            self.stratum(),
            self.inner.residual
        )
    }
}

/// A Poisson model with its feasibility and singularity detectors.
#[pyclass(name = "PoissonModel", module = "repspace_py", frozen)]
struct PyPoissonModel {
    inner: PoissonModel,
    ambient_dim: Option<usize>,
}

#[pymethods]
impl PyPoissonModel {
    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn relation_count(&self) -> usize {
        self.inner.relations.len()
    }

    /// Dimension of the symplectic vector space the model reduces, if the
    /// model is a local model of a stratum.
    #[getter]
    fn ambient_dim(&self) -> Option<usize> {
        self.ambient_dim
    }

    fn origin(&self) -> Vec<f64> {
        self.inner.origin()
    }

    fn poisson_rank_at(&self, point: Vec<f64>) -> PyResult<usize> {
        self.inner.poisson_rank_at(&point).map_err(to_py_err)
    }

    fn zariski_tangent_dim(&self, point: Vec<f64>) -> PyResult<usize> {
        self.inner.zariski_tangent_dim(&point).map_err(to_py_err)
    }

    fn semialgebraic_member(&self, point: Vec<f64>) -> bool {
        self.inner.semialgebraic_member(&point)
    }

    /// Generator values at a point of the underlying phase space.
    fn point_from_ambient(&self, ambient: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.point_from_ambient(&ambient).map_err(to_py_err)
    }

    /// Bracket of generators `a` and `b`, as a polynomial string.
    fn bracket(&self, a: &str, b: &str) -> PyResult<String> {
        let i = self.inner.vars().index(a).map_err(to_py_err)?;
        let j = self.inner.vars().index(b).map_err(to_py_err)?;
        Ok(self.inner.brackets[i][j].to_canonical_string())
    }
}

#[pyfunction]
#[pyo3(signature = (genus, stratum, seed = 0))]
fn solve_flat(genus: usize, stratum: &str, seed: u64) -> PyResult<PyRepresentation> {
    let inner = words::solve_flat(genus, parse_stratum(stratum)?, seed).map_err(to_py_err)?;
    Ok(PyRepresentation { inner })
}

#[pyfunction]
fn enumerate_central(genus: usize) -> Vec<PyRepresentation> {
    words::enumerate_central(genus)
        .into_iter()
        .map(|inner| PyRepresentation { inner })
        .collect()
}

/// Local model of a stratum of the genus `genus` representation space.
#[pyfunction]
fn local_model(genus: usize, stratum: &str) -> PyResult<PyPoissonModel> {
    let LocalModelSpec { model, ambient_dim, .. } =
        strata::local_model(genus, parse_stratum(stratum)?).map_err(to_py_err)?;
    Ok(PyPoissonModel {
        inner: model,
        ambient_dim: Some(ambient_dim),
    })
}

/// The reduced single planar particle `x1² + x2² = rho²`, `rho ≥ 0`.
#[pyfunction]
fn cone_model() -> PyPoissonModel {
    PyPoissonModel {
        inner: strata::cone_model(),
        ambient_dim: None,
    }
}

/// Rows of the stratum report as dicts.
#[pyfunction]
#[pyo3(signature = (genus, seed = 0))]
fn stratum_report(py: Python<'_>, genus: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let rows = strata::stratum_report(genus, seed).map_err(to_py_err)?;
    let v = serde_json::to_value(&rows).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

/// Exact bracket table of "cone", "planar" or "spatial" generators.
#[pyfunction]
fn bracket_table(py: Python<'_>, model: &str) -> PyResult<Py<PyAny>> {
    use repspace::poisson::{planar_invariants, spatial_invariants};
    let set = match model {
        "cone" => planar_invariants().subset(&["x1", "x2", "rho"]),
        "planar" => Ok(planar_invariants()),
        "spatial" => spatial_invariants(2),
        other => return Err(PyValueError::new_err(format!("unknown model {other:?}"))),
    }
    .map_err(to_py_err)?;
    let table = set.bracket_table().map_err(to_py_err)?;
    json_to_py(py, &table.to_json())
}

/// The constant `c` with `reference = c · computed` for the cone table,
/// as a float.
#[pyfunction]
fn cone_constant() -> PyResult<Option<f64>> {
    use repspace::poisson::{cone_reference_table, planar_invariants, proportionality_constant};
    let set = planar_invariants().subset(&["x1", "x2", "rho"]).map_err(to_py_err)?;
    let table = set.bracket_table().map_err(to_py_err)?;
    let reference = cone_reference_table(&table.generator_vars).map_err(to_py_err)?;
    Ok(proportionality_constant(&table, &reference)
        .map_err(to_py_err)?
        .map(|c| rational_to_f64(&c)))
}

/// `sp(4)` momentum of two particles in 3-space; `config` is
/// `[q1, q2, p1, p2]` flattened.
#[pyfunction]
fn sp4_moment(config: [f64; 12]) -> [[f64; 4]; 4] {
    repspace::poisson::moment::sp4_moment_f64(&config)
}

/// Runs the verification suite; returns `(passed, manifest_json)`.
#[pyfunction]
#[pyo3(signature = (only = None))]
fn verify(only: Option<String>) -> (bool, String) {
    let opts = repspace::verify::VerifyOptions {
        only,
        ..Default::default()
    };
    let manifest = repspace::verify::run_verify(&opts);
    (manifest.passed(), manifest.to_canonical())
}

#[pymodule]
fn repspace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRepresentation>()?;
    m.add_class::<PyPoissonModel>()?;
    m.add_function(wrap_pyfunction!(solve_flat, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_central, m)?)?;
    m.add_function(wrap_pyfunction!(local_model, m)?)?;
    m.add_function(wrap_pyfunction!(cone_model, m)?)?;
    m.add_function(wrap_pyfunction!(stratum_report, m)?)?;
    m.add_function(wrap_pyfunction!(bracket_table, m)?)?;
    m.add_function(wrap_pyfunction!(cone_constant, m)?)?;
    m.add_function(wrap_pyfunction!(sp4_moment, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
