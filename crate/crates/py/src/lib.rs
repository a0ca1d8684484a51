//! Python module `pylatcube`.
//!
//! Coordinates cross the boundary as in the JSON file format: Python ints
//! for integers, `"p/q"` strings otherwise. Reports come back as dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde_json::{json, Value};

use latcube::cubeface::recognize_cube;
use latcube::gen::{self, GenParams};
use latcube::idp;
use latcube::io;
use latcube::polytope;
use latcube::prismatoid;
use latcube::report::TheoremId;
use latcube::smooth::is_smooth;
use latcube::verify::{self, Instance, VerifyOptions};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(a) => {
            let items = a
                .iter()
                .map(|x| to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn coord(x: &Bound<'_, PyAny>) -> PyResult<Value> {
    if let Ok(i) = x.extract::<i64>() {
        return Ok(json!(i));
    }
    // str() of an int, a string or a fractions.Fraction parses as "p/q".
    Ok(Value::String(x.str()?.to_string()))
}

#[pyclass(name = "Polytope", frozen, module = "pylatcube", from_py_object)]
#[derive(Clone)]
struct PyPolytope {
    inner: polytope::Polytope,
}

impl From<polytope::Polytope> for PyPolytope {
    fn from(inner: polytope::Polytope) -> Self {
        PyPolytope { inner }
    }
}

#[pymethods]
impl PyPolytope {
    /// Convex hull of the given points. Coordinates may be ints,
    /// `fractions.Fraction`s or `"p/q"` strings.
    #[new]
    fn new(vertices: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let dim = vertices.first().map_or(0, Vec::len);
        let verts = vertices
            .iter()
            .map(|v| v.iter().map(coord).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        io::polytope_from_json(&json!({"dim": dim, "vertices": verts}))
            .map(Into::into)
            .map_err(err)
    }

    #[staticmethod]
    fn unit_cube(d: usize) -> Self {
        polytope::Polytope::unit_cube(d).into()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::polytope_from_str(text).map(Into::into).map_err(err)
    }

    fn to_json(&self) -> String {
        io::polytope_to_string(&self.inner)
    }

    #[getter]
    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &io::polytope_json(&self.inner)["vertices"])
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    fn is_lattice(&self) -> bool {
        self.inner.is_lattice()
    }

    fn lattice_points<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let pts: Vec<Value> = self
            .inner
            .lattice_points()
            .iter()
            .map(io::lattice_json)
            .collect();
        to_py(py, &Value::Array(pts))
    }

    fn dilate(&self, k: u64) -> Self {
        self.inner.dilate(k).into()
    }

    fn translate(&self, t: Vec<i64>) -> PyResult<Self> {
        if t.len() != self.inner.ambient_dim() {
            return Err(err("translation has the wrong length"));
        }
        Ok(self
            .inner
            .translate(&latcube::exactlat::LatticeVector::from_i64s(&t))
            .into())
    }

    fn is_smooth(&self) -> PyResult<bool> {
        is_smooth(&self.inner).map(|r| r.smooth).map_err(err)
    }

    fn is_cube(&self) -> bool {
        recognize_cube(&self.inner).is_ok()
    }

    /// Least axis whose two cube facets are parallel, or None.
    fn parallel_facet_pair(&self) -> PyResult<Option<usize>> {
        let c = recognize_cube(&self.inner).map_err(err)?;
        Ok(c.parallel_facet_pair())
    }

    fn is_prismatoid(&self) -> bool {
        prismatoid::detect_prismatoid(&self.inner).is_ok()
    }

    #[pyo3(signature = (extra_k = 0))]
    fn is_idp<'py>(&self, py: Python<'py>, extra_k: u64) -> PyResult<Bound<'py, PyAny>> {
        let r = idp::is_idp(&self.inner, extra_k).map_err(err)?;
        to_py(py, &io::idp_report_json(&r))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Polytope({})",
            io::polytope_to_string(&self.inner).trim_end()
        )
    }
}

/// IDP of the pair, by the region criterion or (`method="bruteforce"`) by
/// the definition.
#[pyfunction]
#[pyo3(signature = (p, q, method = "region"))]
fn is_idp_pair<'py>(
    py: Python<'py>,
    p: &PyPolytope,
    q: &PyPolytope,
    method: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let r = match method {
        "region" => idp::is_idp_pair_ra(&p.inner, &q.inner),
        "bruteforce" => idp::is_idp_pair_bruteforce(&p.inner, &q.inner),
        other => return Err(err(format!("unknown method {other:?}"))),
    }
    .map_err(err)?;
    to_py(py, &io::idp_report_json(&r))
}

#[pyfunction]
fn idp_via_slices<'py>(
    py: Python<'py>,
    p: &PyPolytope,
    q: &PyPolytope,
) -> PyResult<Bound<'py, PyAny>> {
    let r = prismatoid::idp_via_slices(&p.inner, &q.inner).map_err(err)?;
    to_py(
        py,
        &json!({
            "verdict": r.verdict,
            "slice_pairs": r.slice_pairs,
            "failing_pairs": r.failing_pairs,
            "direct": io::idp_report_json(&r.direct),
        }),
    )
}

#[pyfunction]
fn minkowski_equivalent(p: &PyPolytope, q: &PyPolytope) -> bool {
    polytope::minkowski_equivalent(&p.inner, &q.inner)
}

#[pyfunction]
fn reeve_simplex(q: i64) -> PyResult<PyPolytope> {
    gen::reeve_simplex(q).map(Into::into).map_err(err)
}

#[pyfunction]
fn trapezoid(w0: i64, w1: i64, h: i64) -> PyResult<PyPolytope> {
    gen::trapezoid(w0, w1, h).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (dim, seed, coord_bound = 4, scramble_rounds = 2))]
fn generate_cube(
    dim: usize,
    seed: u64,
    coord_bound: i64,
    scramble_rounds: u32,
) -> PyResult<PyPolytope> {
    let params = GenParams::new(dim, coord_bound, scramble_rounds, seed);
    gen::gen_smooth_cube(&params)
        .map(|c| c.polytope().clone().into())
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (seed, coord_bound = 4, scramble_rounds = 2))]
fn generate_prismatoid(seed: u64, coord_bound: i64, scramble_rounds: u32) -> PyResult<PyPolytope> {
    let params = GenParams::new(3, coord_bound, scramble_rounds, seed);
    gen::gen_smooth_prismatoid(&params)
        .map(Into::into)
        .map_err(err)
}

/// Runs a statement over the polytopes; instance ids are list positions.
#[pyfunction]
#[pyo3(signature = (theorem_id, polytopes, extra_k = 0))]
fn verify_theorem<'py>(
    py: Python<'py>,
    theorem_id: &str,
    polytopes: Vec<PyPolytope>,
    extra_k: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let t: TheoremId = theorem_id.parse().map_err(err)?;
    let corpus: Vec<Instance> = polytopes
        .into_iter()
        .enumerate()
        .map(|(i, p)| Instance::new(i.to_string(), p.inner))
        .collect();
    let report = py.detach(|| verify::verify(t, &corpus, &VerifyOptions { extra_k }));
    to_py(py, &serde_json::to_value(&report).map_err(err)?)
}

#[pymodule]
fn pylatcube(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", io::VERSION)?;
    m.add_class::<PyPolytope>()?;
    m.add_function(wrap_pyfunction!(is_idp_pair, m)?)?;
    m.add_function(wrap_pyfunction!(idp_via_slices, m)?)?;
    m.add_function(wrap_pyfunction!(minkowski_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(reeve_simplex, m)?)?;
    m.add_function(wrap_pyfunction!(trapezoid, m)?)?;
    m.add_function(wrap_pyfunction!(generate_cube, m)?)?;
    m.add_function(wrap_pyfunction!(generate_prismatoid, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    Ok(())
}
