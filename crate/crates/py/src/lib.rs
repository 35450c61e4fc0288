//! Python bindings for `bq-core`, importable as `bqtools`.
//!
//! Fields, elements and points are parsed from the same text forms the
//! `bq` command line accepts. Every check takes `samples` and `seed`; with
//! `samples=None` a finite field is checked exhaustively.

use std::sync::Arc;

use bq_core::chains::{self, Chain, ChainMode, RationalBudget};
use bq_core::decompose::{self, DecompositionResult};
use bq_core::geometry;
use bq_core::maps::{self, MapTable, PlaneMap};
use bq_core::sampling::DEFAULT_SEED;
use bq_core::syntax::{self, MapExpr};
use bq_core::{Domain, Elem, Field, Point};
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

pyo3::create_exception!(bqtools, BqError, PyException);

const DEFAULT_SAMPLES: usize = 200;

fn err(e: bq_core::Error) -> PyErr {
    BqError::new_err(e.to_string())
}

fn domain(k: &Field, samples: Option<usize>, seed: u64) -> Domain {
    match samples {
        None if k.is_finite() => Domain::Exhaustive,
        n => Domain::Samples {
            count: n.unwrap_or(DEFAULT_SAMPLES),
            seed,
        },
    }
}

#[pyclass(name = "Field", frozen, from_py_object, module = "bqtools")]
#[derive(Clone)]
struct PyField(Field);

#[pymethods]
impl PyField {
    /// `Q`, `GF(p)`, or a tower such as `Q[sqrt 2][i]`.
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        syntax::parse_field(descriptor).map(PyField).map_err(err)
    }

    fn elem(&self, text: &str) -> PyResult<PyElem> {
        syntax::parse_elem(text, &self.0).map(PyElem).map_err(err)
    }

    fn point(&self, text: &str) -> PyResult<PyPoint> {
        syntax::parse_point(text, &self.0).map(PyPoint).map_err(err)
    }

    fn generator(&self, level: usize) -> PyResult<PyElem> {
        self.0.generator(level).map(PyElem).map_err(err)
    }

    #[getter]
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    #[getter]
    fn modulus(&self) -> Option<u64> {
        self.0.modulus()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.0)
    }
}

#[pyclass(name = "Elem", frozen, from_py_object, module = "bqtools")]
#[derive(Clone)]
struct PyElem(Elem);

/// An `Elem`, a Python int, or element text, read in `k`.
fn coerce(k: &Field, obj: &Bound<'_, PyAny>) -> PyResult<Elem> {
    if let Ok(e) = obj.cast::<PyElem>() {
        return Ok(e.get().0.clone());
    }
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(k.int(n));
    }
    if let Ok(s) = obj.extract::<String>() {
        return syntax::parse_elem(&s, k).map_err(err);
    }
    Err(BqError::new_err("expected an Elem, an int or element text"))
}

#[pymethods]
impl PyElem {
    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn sqrt(&self) -> Option<PyElem> {
        self.0.sqrt().map(PyElem)
    }

    fn inv(&self) -> PyResult<PyElem> {
        self.0.inv().map(PyElem).map_err(err)
    }

    /// Rational coordinates over the tower basis, as strings.
    fn coefficients(&self) -> Vec<String> {
        self.0
            .coefficients()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElem> {
        let b = coerce(self.0.field(), other)?;
        self.0.checked_add(&b).map(PyElem).map_err(err)
    }

    fn __radd__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElem> {
        self.__add__(other)
    }

    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElem> {
        let b = coerce(self.0.field(), other)?;
        self.0.checked_sub(&b).map(PyElem).map_err(err)
    }

    fn __rsub__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElem> {
        let a = coerce(self.0.field(), other)?;
        a.checked_sub(&self.0).map(PyElem).map_err(err)
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElem> {
        let b = coerce(self.0.field(), other)?;
        self.0.checked_mul(&b).map(PyElem).map_err(err)
    }

    fn __rmul__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElem> {
        self.__mul__(other)
    }

    fn __truediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElem> {
        let b = coerce(self.0.field(), other)?;
        self.0.checked_div(&b).map(PyElem).map_err(err)
    }

    fn __rtruediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElem> {
        let a = coerce(self.0.field(), other)?;
        a.checked_div(&self.0).map(PyElem).map_err(err)
    }

    fn __neg__(&self) -> PyElem {
        PyElem(-&self.0)
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        coerce(self.0.field(), other).is_ok_and(|b| b == self.0)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Elem('{}')", self.0)
    }
}

#[pyclass(name = "Point", frozen, from_py_object, module = "bqtools")]
#[derive(Clone)]
struct PyPoint(Point);

#[pymethods]
impl PyPoint {
    #[new]
    fn new(field: &PyField, x1: &Bound<'_, PyAny>, x2: &Bound<'_, PyAny>) -> PyResult<Self> {
        let k = &field.0;
        Point::new(coerce(k, x1)?, coerce(k, x2)?)
            .map(PyPoint)
            .map_err(err)
    }

    #[getter]
    fn x1(&self) -> PyElem {
        PyElem(self.0.x1().clone())
    }

    #[getter]
    fn x2(&self) -> PyElem {
        PyElem(self.0.x2().clone())
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Point('{}')", self.0)
    }
}

/// A map of the plane, from an expression such as `translate(1,2) . rot(0,1)`
/// or from a table.
#[pyclass(name = "Map", frozen, module = "bqtools")]
struct PyMap {
    text: String,
    map: Arc<dyn PlaneMap>,
}

fn decomposition<'py>(py: Python<'py>, d: &DecompositionResult) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("normalizer", d.normalizer.to_string())?;
    out.set_item("gamma", d.gamma.to_string())?;
    out.set_item("branch", d.branch.to_string())?;
    out.set_item("verified_on", d.verified_on.to_string())?;
    out.set_item("reconstruction", d.reconstruction().map(|r| r.to_string()))?;
    if let Some(l) = &d.lorentz {
        let sub = PyDict::new(py);
        sub.set_item("a", PyElem(l.a.clone()))?;
        sub.set_item("case", l.case.to_string())?;
        sub.set_item("matrix", l.matrix.to_string())?;
        out.set_item("lorentz", sub)?;
    } else {
        out.set_item("lorentz", py.None())?;
    }
    Ok(out)
}

#[pymethods]
impl PyMap {
    #[new]
    fn new(field: &PyField, expr: &str) -> PyResult<Self> {
        let e = MapExpr::parse(expr, &field.0).map_err(err)?;
        let m = e.elaborate().map_err(err)?;
        Ok(PyMap {
            text: e.to_string(),
            map: Arc::new(m),
        })
    }

    /// Lines `x1,x2 -> y1,y2` covering every point of GF(p)^2.
    #[staticmethod]
    fn from_table(field: &PyField, text: &str) -> PyResult<Self> {
        let t = syntax::parse_map_table(text, &field.0).map_err(err)?;
        Ok(PyMap {
            text: "<table>".into(),
            map: Arc::new(t),
        })
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.map.field().clone())
    }

    fn __call__(&self, x: &PyPoint) -> PyResult<PyPoint> {
        self.map.apply(&x.0).map(PyPoint).map_err(err)
    }

    fn table(&self) -> PyResult<String> {
        let t = MapTable::tabulate(self.map.as_ref()).map_err(err)?;
        Ok(syntax::format_map_table(&t))
    }

    #[pyo3(signature = (samples=None, seed=DEFAULT_SEED))]
    fn preserves_unit_distance<'py>(
        &self,
        py: Python<'py>,
        samples: Option<usize>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let d = domain(self.map.field(), samples, seed);
        let v = maps::preserves_unit_distance(self.map.as_ref(), d).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("passed", v.passed())?;
        out.set_item("pairs_checked", v.pairs_checked)?;
        out.set_item("witness", v.witness.map(|w| w.to_string()))?;
        Ok(out)
    }

    #[pyo3(signature = (samples=None, seed=DEFAULT_SEED))]
    fn decompose<'py>(
        &self,
        py: Python<'py>,
        samples: Option<usize>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let d = domain(self.map.field(), samples, seed);
        let r = decompose::decompose(self.map.as_ref(), d).map_err(err)?;
        decomposition(py, &r)
    }

    #[pyo3(signature = (samples=None, seed=DEFAULT_SEED))]
    fn decompose_lorentz<'py>(
        &self,
        py: Python<'py>,
        samples: Option<usize>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let d = domain(self.map.field(), samples, seed);
        let r = decompose::decompose_lorentz(self.map.as_ref(), d).map_err(err)?;
        decomposition(py, &r)
    }

    fn __str__(&self) -> String {
        self.text.clone()
    }

    fn __repr__(&self) -> String {
        format!("Map('{}')", self.text)
    }
}

#[pyfunction]
fn phi(x: &PyPoint, y: &PyPoint) -> PyResult<PyElem> {
    geometry::phi(&x.0, &y.0).map(PyElem).map_err(err)
}

#[pyfunction]
fn psi(x: &PyPoint, y: &PyPoint) -> PyResult<PyElem> {
    geometry::psi(&x.0, &y.0).map(PyElem).map_err(err)
}

#[pyfunction]
fn lm_distance(x: &PyPoint, y: &PyPoint) -> PyResult<PyElem> {
    geometry::lm_distance(&x.0, &y.0).map(PyElem).map_err(err)
}

#[pyfunction]
fn xi(x: &PyPoint) -> PyResult<PyPoint> {
    geometry::xi(&x.0).map(PyPoint).map_err(err)
}

#[pyfunction]
fn eta(x: &PyPoint) -> PyResult<PyPoint> {
    geometry::eta(&x.0).map(PyPoint).map_err(err)
}

#[pyfunction]
fn lambda_map(z: &PyElem, x: &PyPoint) -> PyResult<PyPoint> {
    geometry::lambda_map(&z.0, &x.0).map(PyPoint).map_err(err)
}

/// Row-major entries of every matrix in O(2) of a prime field.
#[pyfunction]
fn enumerate_orthogonal_group(field: &PyField) -> PyResult<Vec<[PyElem; 4]>> {
    let group = maps::enumerate_orthogonal_group(&field.0).map_err(err)?;
    Ok(group
        .iter()
        .map(|q| q.entries().map(|e| PyElem(e.clone())))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (field, samples=None, seed=DEFAULT_SEED))]
fn verify_transform_identities<'py>(
    py: Python<'py>,
    field: &PyField,
    samples: Option<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let d = domain(&field.0, samples, seed);
    let r = geometry::verify_transform_identities(&field.0, d).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("passed", r.passed())?;
    out.set_item("pairs_checked", r.pairs_checked)?;
    out.set_item("points_checked", r.points_checked)?;
    out.set_item("violations", r.violations.len())?;
    Ok(out)
}

/// A unit-distance chain from `start` to `end`. With `rational=True` the
/// chain stays in the input field.
#[pyfunction]
#[pyo3(signature = (start, end, rational=false, max_steps=None, max_denominator=None))]
fn real_chain(
    start: &PyPoint,
    end: &PyPoint,
    rational: bool,
    max_steps: Option<usize>,
    max_denominator: Option<u64>,
) -> PyResult<Vec<PyPoint>> {
    let mode = if rational {
        ChainMode::RationalOnly
    } else {
        ChainMode::AutoExtend
    };
    let mut budget = RationalBudget::default();
    if let Some(n) = max_steps {
        budget.max_steps = n;
    }
    if let Some(n) = max_denominator {
        budget.max_denominator = n;
    }
    let c = chains::build_real_chain(&start.0, &end.0, mode, budget).map_err(err)?;
    Ok(c.chain.into_points().into_iter().map(PyPoint).collect())
}

/// The chain from `(a1 + b1 i, a2 + b2 i)` to `(i, i)`.
#[pyfunction]
fn imaginary_chain(point: &PyPoint) -> PyResult<Vec<PyPoint>> {
    let c = chains::build_imaginary_chain(&point.0).map_err(err)?;
    Ok(c.chain.into_points().into_iter().map(PyPoint).collect())
}

/// Violations of a chain: edges with `phi != 1`, or with `psi = 0` when
/// `require_psi` is set. Empty means the chain is valid.
#[pyfunction]
#[pyo3(signature = (points, require_psi=false))]
fn verify_chain(points: Vec<PyPoint>, require_psi: bool) -> PyResult<Vec<String>> {
    let c = Chain::new(points.into_iter().map(|p| p.0).collect()).map_err(err)?;
    let r = chains::verify_chain(&c, require_psi);
    Ok(r.violations.iter().map(ToString::to_string).collect())
}

/// Census of all unit-distance preservers of GF(p)^2. Releases the GIL.
#[pyfunction]
#[pyo3(signature = (p, budget=50_000_000))]
fn search_unit_preservers<'py>(
    py: Python<'py>,
    p: u64,
    budget: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let out = py
        .detach(|| decompose::search_unit_preservers(p, budget))
        .map_err(err)?;
    let c = &out.census;
    let d = PyDict::new(py);
    d.set_item("found", c.found)?;
    d.set_item("expected", c.expected)?;
    d.set_item("complete", c.complete)?;
    d.set_item("nodes", c.nodes)?;
    d.set_item(
        "anomalies",
        c.anomalies
            .iter()
            .map(|a| a.reason.clone())
            .collect::<Vec<_>>(),
    )?;
    d.set_item("confirms", c.confirms())?;
    Ok(d)
}

#[pymodule]
fn bqtools<'py>(py: Python<'py>, m: &Bound<'py, PyModule>) -> PyResult<()> {
    m.add("BqError", py.get_type::<BqError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyElem>()?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(lm_distance, m)?)?;
    m.add_function(wrap_pyfunction!(xi, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_map, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_orthogonal_group, m)?)?;
    m.add_function(wrap_pyfunction!(verify_transform_identities, m)?)?;
    m.add_function(wrap_pyfunction!(real_chain, m)?)?;
    m.add_function(wrap_pyfunction!(imaginary_chain, m)?)?;
    m.add_function(wrap_pyfunction!(verify_chain, m)?)?;
    m.add_function(wrap_pyfunction!(search_unit_preservers, m)?)?;
    Ok(())
}
