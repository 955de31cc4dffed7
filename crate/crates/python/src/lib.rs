//! Python bindings. Rationals cross the boundary as `fractions.Fraction`.

use flowgap_core::cutcheck::{check_any, CutCertificate, DEFAULT_BRUTE_LIMIT};
use flowgap_core::cutcover::{self, verify_certificate};
use flowgap_core::facedemands::{self, DemandSet};
use flowgap_core::format;
use flowgap_core::generate::{self, DemandKind, InstanceSpec};
use flowgap_core::laminar::{self, Phase};
use flowgap_core::pipeline;
use flowgap_core::planar::FaceInstance;
use flowgap_core::rational;
use flowgap_core::route::{self, Flow};
use flowgap_core::{Error, Rational};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: Error) -> PyErr {
    match e {
        Error::OracleShortfall(_) | Error::NotFound => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn frac<'py>(py: Python<'py>, x: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((rational::fmt(x),))
}

fn to_rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s = x.str()?.to_string();
    rational::parse(&s).ok_or_else(|| PyValueError::new_err(format!("not a rational: {s}")))
}

fn certificate<'py>(py: Python<'py>, c: &CutCertificate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("violated", c.is_violated())?;
    d.set_item("set", c.set.clone())?;
    d.set_item("supply", frac(py, &c.supply)?)?;
    d.set_item("demand", frac(py, &c.demand)?)?;
    Ok(d)
}

fn flow<'py>(py: Python<'py>, f: &Flow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("lambda", frac(py, &f.lambda)?)?;
    let paths = f
        .paths
        .iter()
        .map(|p| Ok((p.demand, frac(py, &p.value)?, p.edges.clone())))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("paths", paths)?;
    Ok(d)
}

/// A chord `(a, b, weight)` with a Python number as weight.
type PyChord<'py> = (usize, usize, Bound<'py, PyAny>);

/// `(alpha, level, phase, chords)`.
type PyMember<'py> = (Bound<'py, PyAny>, Option<usize>, u8, Vec<PyChord<'py>>);

fn demand_set(t: usize, chords: Vec<PyChord<'_>>) -> PyResult<DemandSet> {
    let mut d = DemandSet::new(t);
    for (a, b, w) in chords {
        if a >= t || b >= t || a == b {
            return Err(PyValueError::new_err(format!(
                "bad chord ({a}, {b}) on a face of length {t}"
            )));
        }
        d.add(a, b, to_rational(&w)?);
    }
    Ok(d)
}

fn chords<'py>(py: Python<'py>, d: &DemandSet) -> PyResult<Vec<PyChord<'py>>> {
    d.chords()
        .map(|c| Ok((c.a, c.b, frac(py, &c.weight)?)))
        .collect()
}

/// A planar supply graph with demands on its faces.
#[pyclass(name = "Instance", module = "flowgap_py")]
struct PyInstance {
    inner: FaceInstance,
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: format::parse_instance(text).map_err(err)?,
        })
    }

    /// Random instance; `kind` is "separable", "general" or "laminar".
    #[staticmethod]
    #[pyo3(signature = (n, kind = "separable", demands = 4, faces = 1, routable = false, seed = 0))]
    fn generate(
        n: usize,
        kind: &str,
        demands: usize,
        faces: usize,
        routable: bool,
        seed: u64,
    ) -> PyResult<Self> {
        if n < 3 {
            return Err(PyValueError::new_err("need at least 3 vertices"));
        }
        let kind = match kind {
            "separable" => DemandKind::Separable,
            "general" => DemandKind::General,
            "laminar" => DemandKind::Laminar,
            other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
        };
        let mut spec = InstanceSpec::new(n, kind);
        spec.demands = demands;
        spec.faces = faces;
        let mut rng = generate::rng(seed);
        let inner = if routable {
            generate::random_routable_instance(&mut rng, &spec, 1)
        } else {
            generate::random_instance(&mut rng, &spec)
        };
        Ok(PyInstance { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.graph.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.graph.m()
    }

    /// Boundary vertex lists, keyed by face id.
    #[getter]
    fn faces(&self) -> Vec<(usize, Vec<usize>)> {
        self.inner
            .graph
            .faces()
            .iter()
            .map(|f| (f.id, f.vertices.clone()))
            .collect()
    }

    /// `(u, v, face id, value)` per demand.
    #[getter]
    fn demands(&self) -> Vec<(usize, usize, usize, u64)> {
        self.inner
            .demands
            .iter()
            .map(|d| (d.u, d.v, d.face, d.value))
            .collect()
    }

    fn is_separable(&self) -> bool {
        self.inner.is_separable()
    }

    fn to_text(&self) -> String {
        format::print_instance(&self.inner)
    }

    fn to_dot(&self) -> String {
        format::to_dot(&self.inner, None)
    }

    #[pyo3(signature = (brute_limit = DEFAULT_BRUTE_LIMIT))]
    fn check_cut<'py>(&self, py: Python<'py>, brute_limit: usize) -> PyResult<Bound<'py, PyDict>> {
        certificate(py, &check_any(&self.inner, brute_limit).map_err(err)?)
    }

    #[pyo3(signature = (eps = 0.05))]
    fn max_concurrent_flow<'py>(&self, py: Python<'py>, eps: f64) -> PyResult<Bound<'py, PyDict>> {
        let f = route::max_concurrent_flow(&self.inner.graph, &self.inner.commodities(), eps)
            .map_err(err)?;
        flow(py, &f)
    }

    /// Routes every demand in full; raises ValueError with the violated cut
    /// when the cut condition fails.
    #[pyo3(signature = (eps = 0.05))]
    fn route_with_gap<'py>(&self, py: Python<'py>, eps: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = pipeline::route_with_gap(&self.inner, eps).map_err(err)?;
        let d = flow(py, &r.flow)?;
        d.set_item("gap_bound", frac(py, &r.gap_bound)?)?;
        d.set_item("max_load_ratio", frac(py, &r.max_load_ratio)?)?;
        d.set_item(
            "load_bound",
            frac(py, &pipeline::load_bound(&r.gap_bound, eps))?,
        )?;
        Ok(d)
    }

    fn sparsest_cut<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = pipeline::approx_sparsest_cut(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("set", s.set)?;
        d.set_item("supply", frac(py, &s.supply)?)?;
        d.set_item("demand", frac(py, &s.demand)?)?;
        d.set_item("ratio", s.ratio.as_ref().map(|r| frac(py, r)).transpose()?)?;
        d.set_item("factor", frac(py, &s.factor)?)?;
        Ok(d)
    }

    fn multicut<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let mc = cutcover::seymour_multicut(&self.inner.graph, &self.inner.face_demand_sets())
            .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("edges", mc.edges)?;
        d.set_item("cost", frac(py, &mc.cost)?)?;
        d.set_item("dual_value", frac(py, &mc.dual_value)?)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n={}, m={}, demands={})",
            self.inner.graph.n(),
            self.inner.graph.m(),
            self.inner.demands.len()
        )
    }
}

/// Uncrosses chords `(a, b, weight)` on a face of length `t`. Returns the
/// laminar chords and the iteration count.
#[pyfunction]
fn uncross<'py>(
    py: Python<'py>,
    t: usize,
    chords_in: Vec<PyChord<'py>>,
) -> PyResult<(Vec<PyChord<'py>>, usize)> {
    let d = demand_set(t, chords_in)?;
    let (out, stats) = facedemands::uncross_all(&d);
    Ok((chords(py, &out)?, stats.iterations))
}

/// Laminar approximating family: a list of `(alpha, level, phase, chords)`.
#[pyfunction]
fn approximate<'py>(
    py: Python<'py>,
    t: usize,
    chords_in: Vec<PyChord<'py>>,
) -> PyResult<Vec<PyMember<'py>>> {
    let d = demand_set(t, chords_in)?;
    let fam = laminar::approximate(&d).map_err(err)?;
    fam.members
        .iter()
        .map(|m| {
            let phase = if m.phase == Phase::One { 1 } else { 2 };
            Ok((frac(py, &m.alpha)?, m.level, phase, chords(py, &m.set)?))
        })
        .collect()
}

/// Primal-dual run on a cut cover instance given in text form.
#[pyfunction]
fn wgmv<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyDict>> {
    let inst = format::parse_cutcover(text).map_err(err)?;
    let res = cutcover::wgmv(&inst).map_err(err)?;
    let rep = verify_certificate(&inst, &res.picked, &res.duals, &res.trace);
    let d = PyDict::new(py);
    d.set_item("picked", res.picked.clone())?;
    d.set_item("cost", frac(py, &rep.cost)?)?;
    d.set_item("dual_value", frac(py, &rep.dual_value)?)?;
    let duals = res
        .duals
        .iter()
        .map(|(s, y)| Ok((s.clone(), frac(py, y)?)))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("duals", duals)?;
    d.set_item("certificate_valid", rep.is_valid())?;
    Ok(d)
}

#[pymodule]
fn flowgap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(uncross, m)?)?;
    m.add_function(wrap_pyfunction!(approximate, m)?)?;
    m.add_function(wrap_pyfunction!(wgmv, m)?)?;
    Ok(())
}
