//! Python bindings. Structured results come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use realconic::bundle::{self, SurfaceState, Topology, Transformation};
use realconic::cohom::{self, smith_normal_form, IntMatrix};
use realconic::decide::{
    self, CRationalKind, CRationalSurfaceKind, MapDescriptor, SphereApproximation, TargetTopology,
};
use realconic::document::parse_spec;
use realconic::exactpoly::{
    self, parse_rational, Bound as Endpoint, Polynomial, DEFAULT_REFINE_BITS,
};
use realconic::report::{self, Options};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `json.loads` on a serialized value, so callers get dicts rather than strings.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: serde::de::DeserializeOwned>(py: Python<'_>, v: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = py.import("json")?.call_method1("dumps", (v,))?.extract()?;
    serde_json::from_str(&text).map_err(value_error)
}

fn polynomial(coeffs: Vec<String>) -> PyResult<Polynomial> {
    coeffs
        .iter()
        .map(|c| parse_rational(c))
        .collect::<Result<Vec<_>, _>>()
        .map(Polynomial::new)
        .map_err(value_error)
}

fn endpoint(v: Option<String>, infinity: Endpoint) -> PyResult<Endpoint> {
    match v {
        None => Ok(infinity),
        Some(s) => parse_rational(&s)
            .map(Endpoint::Finite)
            .map_err(value_error),
    }
}

/// A real conic-bundle surface: the real locus after a list of transformations.
#[pyclass(frozen, skip_from_py_object, module = "realconic_py")]
#[derive(Clone)]
struct Surface {
    state: SurfaceState,
}

#[pymethods]
impl Surface {
    /// Builds the surface described by a JSON spec document.
    #[new]
    #[pyo3(signature = (spec, refine_bits = DEFAULT_REFINE_BITS))]
    fn new(spec: &str, refine_bits: u32) -> PyResult<Self> {
        let doc = parse_spec(spec).map_err(value_error)?;
        let spec = doc.to_bundle_spec().map_err(value_error)?;
        let state = bundle::build_surface(&spec, refine_bits).map_err(value_error)?;
        Ok(Surface { state })
    }

    /// Returns a new surface with one more transformation applied.
    #[pyo3(signature = (kind, target = None))]
    fn apply(&self, kind: &str, target: Option<usize>) -> PyResult<Self> {
        let t = match (kind, target) {
            ("elm_real", Some(i)) => Transformation::elm_real(i),
            ("blowup_real", Some(i)) => Transformation::blowup_real(i),
            ("elm_conj_pair", None) => Transformation::elm_conj_pair(),
            ("blowup_conj_pair", None) => Transformation::blowup_conj_pair(),
            _ => {
                return Err(PyValueError::new_err(format!(
                    "unknown transformation {kind:?} with target {target:?}"
                )))
            }
        };
        let state = bundle::apply(&self.state, &t).map_err(value_error)?;
        Ok(Surface { state })
    }

    #[getter]
    fn minimal(&self) -> bool {
        self.state.minimal
    }

    #[getter]
    fn components<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.state.components)
    }

    fn census<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &bundle::component_census(&self.state))
    }

    fn lattice<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cohom::lattice_of(&self.state))
    }

    fn restriction_table<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cohom::restriction_table(&self.state).rows)
    }

    /// The obstruction group with its closed-form prediction.
    fn gamma<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cohom::gamma(&self.state).map_err(value_error)?)
    }

    /// The obstruction group written like `Z^2 + Z/2`.
    fn gamma_str(&self) -> PyResult<String> {
        Ok(cohom::gamma(&self.state)
            .map_err(value_error)?
            .group
            .to_string())
    }

    /// Decision for a map to the sphere given by per-component degrees.
    fn decide_approx_sphere<'py>(
        &self,
        py: Python<'py>,
        degrees: Vec<i64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let d = decide::decide_approx_sphere(&self.state, &MapDescriptor::new(degrees))
            .map_err(value_error)?;
        to_py(py, &d)
    }

    /// Membership-only check, reusing one factorization for many maps.
    fn approximable_many(&self, maps: Vec<Vec<i64>>) -> PyResult<Vec<bool>> {
        let m = SphereApproximation::new(&self.state).map_err(value_error)?;
        maps.into_iter()
            .map(|d| {
                m.is_approximable(&MapDescriptor::new(d))
                    .map_err(value_error)
            })
            .collect()
    }

    fn canonical_class_vanishes(&self) -> bool {
        decide::canonical_class_vanishes(&self.state)
    }

    fn __len__(&self) -> usize {
        self.state.components.len()
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self
            .state
            .components
            .iter()
            .map(|c| c.topology.to_string())
            .collect();
        format!("Surface([{}])", parts.join(", "))
    }
}

/// Full analysis report for a JSON spec, as a dict.
#[pyfunction]
#[pyo3(signature = (spec, refine_bits = DEFAULT_REFINE_BITS))]
fn analyze<'py>(py: Python<'py>, spec: &str, refine_bits: u32) -> PyResult<Bound<'py, PyAny>> {
    let doc = parse_spec(spec).map_err(value_error)?;
    let r = report::analyze(&doc, Options { refine_bits }).map_err(value_error)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (spec, refine_bits = DEFAULT_REFINE_BITS))]
fn validate<'py>(py: Python<'py>, spec: &str, refine_bits: u32) -> PyResult<Bound<'py, PyAny>> {
    let doc = parse_spec(spec).map_err(value_error)?;
    to_py(
        py,
        &report::validate_document(&doc, Options { refine_bits }),
    )
}

/// Real roots of a square-free polynomial in the open interval `(low, high)`.
/// Coefficients are ascending integer or `p/q` strings; omitted bounds are infinite.
#[pyfunction]
#[pyo3(signature = (coeffs, low = None, high = None))]
fn count_real_roots(
    coeffs: Vec<String>,
    low: Option<String>,
    high: Option<String>,
) -> PyResult<usize> {
    let p = polynomial(coeffs)?;
    exactpoly::count_real_roots(
        &p,
        &endpoint(low, Endpoint::NegInfinity)?,
        &endpoint(high, Endpoint::PosInfinity)?,
    )
    .map_err(value_error)
}

/// Isolating intervals `(low, high)` as rational strings.
#[pyfunction]
#[pyo3(signature = (coeffs, refine_bits = DEFAULT_REFINE_BITS))]
fn isolate_real_roots(coeffs: Vec<String>, refine_bits: u32) -> PyResult<Vec<(String, String)>> {
    let p = polynomial(coeffs)?;
    let out = exactpoly::isolate_real_roots(&p, refine_bits).map_err(value_error)?;
    Ok(out
        .into_iter()
        .filter_map(|iv| match iv {
            exactpoly::IsolatingInterval::Finite { low, high } => {
                Some((low.to_string(), high.to_string()))
            }
            exactpoly::IsolatingInterval::Infinity => None,
        })
        .collect())
}

#[pyfunction]
fn squarefree_part(coeffs: Vec<String>) -> PyResult<Vec<String>> {
    let p = exactpoly::squarefree_part(&polynomial(coeffs)?).map_err(value_error)?;
    Ok(p.coeffs().iter().map(ToString::to_string).collect())
}

/// Invariant factors of an integer matrix (zeros included up to the smaller dimension).
#[pyfunction]
fn invariant_factors(matrix: Vec<Vec<i64>>) -> PyResult<Vec<String>> {
    let cols = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    let f = smith_normal_form(&IntMatrix::from_rows(&matrix, cols));
    let n = matrix.len().min(cols);
    Ok((0..n).map(|i| f.d[(i, i)].to_string()).collect())
}

/// Obstruction group of a geometrically rational surface:
/// `kind` is `torus_model`, `maximal_del_pezzo_degree2` or `other`;
/// components are topology dicts such as `{"type": "sphere"}`.
#[pyfunction]
fn gamma_c_rational<'py>(
    py: Python<'py>,
    kind: &Bound<'py, PyAny>,
    components: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let kind: CRationalKind = from_py(py, kind)?;
    let components: Vec<Topology> = from_py(py, components)?;
    let s = CRationalSurfaceKind::new(kind, components).map_err(value_error)?;
    to_py(py, &decide::gamma_c_rational(&s))
}

/// `dense` or `closure_null_homotopic`, for a connected source component and target surface.
#[pyfunction]
fn decide_approx_rational_target<'py>(
    py: Python<'py>,
    source: &Bound<'py, PyAny>,
    target: &Bound<'py, PyAny>,
) -> PyResult<String> {
    let v: Topology = from_py(py, source)?;
    let w: TargetTopology = from_py(py, target)?;
    Ok(decide::decide_approx_rational_target(v, w).to_string())
}

#[pymodule]
fn realconic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Surface>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(count_real_roots, m)?)?;
    m.add_function(wrap_pyfunction!(isolate_real_roots, m)?)?;
    m.add_function(wrap_pyfunction!(squarefree_part, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_factors, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_c_rational, m)?)?;
    m.add_function(wrap_pyfunction!(decide_approx_rational_target, m)?)?;
    Ok(())
}
