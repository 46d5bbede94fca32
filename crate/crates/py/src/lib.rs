//! Python bindings. Matrices are `Mat2` objects; structured results come back
//! as plain dicts decoded from the canonical JSON form. Failures raise
//! `ValueError` whose message is the `{"error": code, ...}` JSON diagnostic.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde_json::Value;

use kcomm_core::json::{
    decomposition_to_json, error_to_json, hspec_from_json, identity_outcome_to_json, mat_from_json, mat_to_json,
    pair_verdict_to_json, parse, report_to_json, scalar_from_json, scalar_to_json, spectral_verdict_to_json,
    system_from_json, table_from_json, table_to_json, to_canonical_string, verdict_to_json,
};
use kcomm_core::preserver::all_pairs;
use kcomm_core::{FieldKind, FieldTag, Method, SolveMode};

fn err(e: kcomm_core::Error) -> PyErr {
    PyValueError::new_err(to_canonical_string(&error_to_json(&e)))
}

fn field_tag(field: &str, tolerance: Option<f64>) -> PyResult<FieldTag> {
    let kind: FieldKind = field.parse().map_err(err)?;
    let tag = FieldTag::new(kind);
    Ok(match tolerance {
        Some(t) => tag.with_tolerance(t),
        None => tag,
    })
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let loads = py.import("json")?.getattr("loads")?;
    Ok(loads.call1((v.to_string(),))?.unbind())
}

/// Python objects go through `json.dumps`; a `str` is taken as JSON text
/// when it parses and as a plain string value (e.g. `"1/2"`, `"trace"`) otherwise.
fn from_py(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    if let Ok(s) = obj.extract::<String>() {
        return Ok(parse(&s).unwrap_or(Value::String(s)));
    }
    let text: String = py.import("json")?.getattr("dumps")?.call1((obj,))?.extract()?;
    parse(&text).map_err(err)
}

/// A 2x2 matrix over one of the fields `Q`, `Qi`, `R64`, `C64`.
#[pyclass(name = "Mat2", frozen, from_py_object)]
#[derive(Clone)]
struct PyMat2 {
    inner: kcomm_core::Mat2,
}

#[pymethods]
impl PyMat2 {
    /// `rows` is `[[a, b], [c, d]]`. Exact entries are ints or strings like
    /// `"-3/5"`; Gaussian and complex entries may be `{"re": .., "im": ..}`.
    #[new]
    #[pyo3(signature = (rows, field = "Q", tolerance = None))]
    fn new(py: Python<'_>, rows: &Bound<'_, PyAny>, field: &str, tolerance: Option<f64>) -> PyResult<Self> {
        let tag = field_tag(field, tolerance)?;
        let inner = mat_from_json(&from_py(py, rows)?, Some(tag)).map_err(err)?;
        Ok(PyMat2 { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (field = "Q"))]
    fn identity(field: &str) -> PyResult<Self> {
        Ok(PyMat2 {
            inner: kcomm_core::Mat2::identity(field_tag(field, None)?),
        })
    }

    /// Matrix unit `E_ij` with 1-based indices.
    #[staticmethod]
    #[pyo3(signature = (i, j, field = "Q"))]
    fn unit(i: usize, j: usize, field: &str) -> PyResult<Self> {
        if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
            return Err(PyValueError::new_err("unit indices are 1 or 2"));
        }
        Ok(PyMat2 {
            inner: kcomm_core::Mat2::unit(field_tag(field, None)?, i - 1, j - 1),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = mat_from_json(&parse(text).map_err(err)?, None).map_err(err)?;
        Ok(PyMat2 { inner })
    }

    fn to_json(&self) -> String {
        to_canonical_string(&mat_to_json(&self.inner))
    }

    #[getter]
    fn field(&self) -> &'static str {
        self.inner.kind().code()
    }

    /// Entries as strings, row-major.
    fn entries(&self) -> Vec<Vec<String>> {
        self.inner
            .entries()
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect()
    }

    fn trace(&self) -> String {
        self.inner.trace().to_string()
    }

    fn det(&self) -> String {
        self.inner.det().to_string()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_scalar(&self) -> bool {
        self.inner.is_scalar()
    }

    fn is_nilpotent(&self) -> bool {
        self.inner.is_nilpotent()
    }

    fn is_idempotent(&self) -> bool {
        self.inner.is_idempotent()
    }

    fn __add__(&self, other: &PyMat2) -> PyResult<Self> {
        let inner = self.inner.try_add(&other.inner).map_err(err)?;
        Ok(PyMat2 { inner })
    }

    fn __sub__(&self, other: &PyMat2) -> PyResult<Self> {
        let inner = self.inner.try_sub(&other.inner).map_err(err)?;
        Ok(PyMat2 { inner })
    }

    fn __matmul__(&self, other: &PyMat2) -> PyResult<Self> {
        let inner = self.inner.try_mul(&other.inner).map_err(err)?;
        Ok(PyMat2 { inner })
    }

    fn __neg__(&self) -> Self {
        PyMat2 { inner: -&self.inner }
    }

    fn __eq__(&self, other: &PyMat2) -> bool {
        self.inner.same_field(&other.inner).is_ok() && self.inner.approx_eq(&other.inner)
    }

    fn __repr__(&self) -> String {
        let e = self.entries();
        format!(
            "Mat2([[{}, {}], [{}, {}]], field={:?})",
            e[0][0],
            e[0][1],
            e[1][0],
            e[1][1],
            self.field()
        )
    }
}

/// `[A, B]_k`; `method` is `recursive`, `closed` or `auto`.
#[pyfunction(name = "kcomm")]
#[pyo3(signature = (a, b, k, method = "auto"))]
fn bracket(a: &PyMat2, b: &PyMat2, k: u32, method: &str) -> PyResult<PyMat2> {
    let method: Method = method.parse().map_err(err)?;
    let inner = kcomm_core::kcomm(&a.inner, &b.inner, k, method).map_err(err)?;
    Ok(PyMat2 { inner })
}

/// The m-th roots of unity in `field`, as JSON-style values.
#[pyfunction]
fn roots_of_unity(py: Python<'_>, field: &str, m: u32) -> PyResult<Py<PyAny>> {
    let roots = kcomm_core::roots_of_unity(&field_tag(field, None)?, m).map_err(err)?;
    to_py(py, &Value::Array(roots.iter().map(scalar_to_json).collect()))
}

#[pyfunction]
fn scalar_witness_test(py: Python<'_>, z: &PyMat2, k: u32) -> PyResult<Py<PyAny>> {
    let v = kcomm_core::scalar_witness_test(&z.inner, k).map_err(err)?;
    to_py(py, &verdict_to_json(&v))
}

#[pyfunction]
fn scalar_plus_nilpotent_spectral(py: Python<'_>, s: &PyMat2) -> PyResult<Py<PyAny>> {
    to_py(py, &spectral_verdict_to_json(&kcomm_core::scalar_plus_nilpotent_spectral(&s.inner)))
}

#[pyfunction]
#[pyo3(signature = (s, k, trials = 32, seed = 0))]
fn scalar_plus_nilpotent_kcomm(py: Python<'_>, s: &PyMat2, k: u32, trials: u32, seed: u64) -> PyResult<Py<PyAny>> {
    let v = kcomm_core::scalar_plus_nilpotent_kcomm(&s.inner, k, trials, seed).map_err(err)?;
    to_py(py, &verdict_to_json(&v))
}

/// `system` is `{"left": [[A, B], ...], "right": [[C, D], ...]}` (dict or JSON text).
#[pyfunction]
#[pyo3(signature = (system, field = "Q", mode = "auto"))]
fn rank_one_identity_solve(py: Python<'_>, system: &Bound<'_, PyAny>, field: &str, mode: &str) -> PyResult<Py<PyAny>> {
    let mode: SolveMode = mode.parse().map_err(err)?;
    let sys = system_from_json(&from_py(py, system)?, Some(field_tag(field, None)?)).map_err(err)?;
    let out = kcomm_core::rank_one_identity_solve(&sys, mode).map_err(err)?;
    to_py(py, &identity_outcome_to_json(&out))
}

/// Tabulates `A -> lambda A + h(A) I` on the probe set (or `inputs`) and
/// returns the map table as a dict.
#[pyfunction]
#[pyo3(signature = (lam, k, field = "Q", h = None, inputs = None, seed = 0, tolerance = None))]
#[allow(clippy::too_many_arguments)]
fn gen_map(
    py: Python<'_>,
    lam: &Bound<'_, PyAny>,
    k: u32,
    field: &str,
    h: Option<&Bound<'_, PyAny>>,
    inputs: Option<Vec<PyMat2>>,
    seed: u64,
    tolerance: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let tag = field_tag(field, tolerance)?;
    let lambda = scalar_from_json(&from_py(py, lam)?, tag.kind).map_err(err)?;
    let h = match h {
        Some(h) => hspec_from_json(&from_py(py, h)?, tag, seed).map_err(err)?,
        None => kcomm_core::HSpec::Zero,
    };
    let inputs = match inputs {
        Some(ms) => ms.into_iter().map(|m| m.inner.with_field(tag)).collect::<Result<Vec<_>, _>>().map_err(err)?,
        None => kcomm_core::probe_set(tag),
    };
    let table = kcomm_core::generate_map(tag, &lambda, &h, &inputs, k).map_err(err)?;
    to_py(py, &table_to_json(&table))
}

/// Checks the map on every ordered pair of its inputs.
#[pyfunction]
fn verify_map(py: Python<'_>, table: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    let t = table_from_json(&from_py(py, table)?, None, None).map_err(err)?;
    let v = kcomm_core::verify_preserving(&t, &all_pairs(&t.inputs())).map_err(err)?;
    to_py(py, &pair_verdict_to_json(&v))
}

#[pyfunction]
fn decompose_map(py: Python<'_>, table: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    let t = table_from_json(&from_py(py, table)?, None, None).map_err(err)?;
    let d = kcomm_core::decompose(&t).map_err(err)?;
    to_py(py, &decomposition_to_json(&d))
}

#[pyfunction]
#[pyo3(signature = (k, field = "Q", trials = 100, seed = 0))]
fn probe_campaign(py: Python<'_>, k: u32, field: &str, trials: u32, seed: u64) -> PyResult<Py<PyAny>> {
    let report = kcomm_core::probe_campaign(k, field_tag(field, None)?, trials, seed).map_err(err)?;
    to_py(py, &report_to_json(&report))
}

#[pymodule]
fn kcomm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMat2>()?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(roots_of_unity, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_witness_test, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_plus_nilpotent_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_plus_nilpotent_kcomm, m)?)?;
    m.add_function(wrap_pyfunction!(rank_one_identity_solve, m)?)?;
    m.add_function(wrap_pyfunction!(gen_map, m)?)?;
    m.add_function(wrap_pyfunction!(verify_map, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_map, m)?)?;
    m.add_function(wrap_pyfunction!(probe_campaign, m)?)?;
    Ok(())
}
