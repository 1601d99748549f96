//! Python extension module over the core library: polytopes with exact
//! Ehrhart data, the model families, prequantization, rooted-cactus
//! enumeration, and unimodular equivalence. Coordinates, counts, and
//! h*-entries cross the boundary as Python ints, so nothing is truncated.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use latpoly::cactus;
use latpoly::ehrhart;
use latpoly::equiv;
use latpoly::families;
use latpoly::linalg::AffineMap;
use latpoly::polytope;

fn err(e: latpoly::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `(rows of the linear part, shift)` — the wire shape of an affine map.
fn map_parts(m: &AffineMap) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    (m.linear().row_vecs(), m.shift().to_vec())
}

/// Full-dimensional lattice polytope, stored as its vertex hull.
#[pyclass(frozen, name = "Polytope")]
struct PyPolytope {
    inner: polytope::Polytope,
}

impl PyPolytope {
    fn wrap(inner: polytope::Polytope) -> PyPolytope {
        PyPolytope { inner }
    }
}

#[pymethods]
impl PyPolytope {
    /// Convex hull of the given lattice points; must be full-dimensional.
    #[new]
    fn new(points: Vec<Vec<BigInt>>) -> PyResult<Self> {
        Ok(PyPolytope::wrap(polytope::Polytope::hull(points).map_err(err)?))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn vertices(&self) -> Vec<Vec<BigInt>> {
        self.inner.vertices().to_vec()
    }

    /// Number of lattice points of the `t`-th dilate (`t >= 0`).
    fn count_points(&self, t: BigInt) -> PyResult<BigInt> {
        ehrhart::count_points(&self.inner, &t).map_err(err)
    }

    /// h*-vector, computed by exact counting with a built-in
    /// interpolation self-check.
    fn hstar(&self) -> PyResult<Vec<BigInt>> {
        Ok(ehrhart::ehrhart(&self.inner).map_err(err)?.hstar().coeffs().to_vec())
    }

    /// Even contact Betti numbers `(cb_0, cb_2, ..., cb_{2n})` derived
    /// from the h*-vector.
    fn contact_betti(&self) -> PyResult<Vec<BigInt>> {
        let l = ehrhart::ehrhart(&self.inner).map_err(err)?;
        let b = ehrhart::contact_betti(l.hstar());
        Ok((0..=self.inner.dim()).map(|i| b.cb(i).clone()).collect())
    }

    fn is_reflexive(&self) -> bool {
        self.inner.is_reflexive()
    }

    fn is_delzant(&self) -> bool {
        self.inner.is_delzant()
    }

    fn gorenstein_index(&self) -> Option<u32> {
        self.inner.gorenstein_index()
    }

    /// Canonical vertex list: equal across exactly the unimodular images
    /// of the same polytope.
    fn canonical_form(&self) -> PyResult<Vec<Vec<BigInt>>> {
        equiv::canonical_form(&self.inner).map_err(err)
    }

    /// Real parts of the Ehrhart polynomial's roots (ascending) and
    /// whether all of them lie within `tol` of `target`.
    #[pyo3(signature = (target, tol = 1e-9))]
    fn root_real_parts(&self, target: f64, tol: f64) -> PyResult<(Vec<f64>, bool)> {
        let l = ehrhart::ehrhart(&self.inner).map_err(err)?;
        let check = ehrhart::root_real_parts(&l, target, tol).map_err(err)?;
        Ok((check.real_parts, check.all_match))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPolytope::wrap(polytope::Polytope::from_json(text).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("Polytope(dim={}, vertices={})", self.inner.dim(), self.inner.vertex_count())
    }
}

#[pyfunction]
#[pyo3(signature = (n, lo = 0, hi = 1))]
fn cube(n: usize, lo: i64, hi: i64) -> PyResult<PyPolytope> {
    Ok(PyPolytope::wrap(families::cube(n, lo, hi).map_err(err)?))
}

#[pyfunction]
fn cross(n: usize) -> PyResult<PyPolytope> {
    Ok(PyPolytope::wrap(families::cross_polytope(n).map_err(err)?))
}

#[pyfunction]
fn small_cross(n: usize) -> PyResult<PyPolytope> {
    Ok(PyPolytope::wrap(families::small_cross_polytope(n).map_err(err)?))
}

#[pyfunction]
fn family_pk(n: usize, k: i64) -> PyResult<PyPolytope> {
    Ok(PyPolytope::wrap(families::family_pk(n, k).map_err(err)?))
}

#[pyfunction]
fn family_tk(n: usize, k: i64) -> PyResult<PyPolytope> {
    Ok(PyPolytope::wrap(families::family_tk(n, k).map_err(err)?))
}

#[pyfunction]
fn family_dk(n: usize, k: i64) -> PyResult<PyPolytope> {
    Ok(PyPolytope::wrap(families::family_dk(n, k).map_err(err)?))
}

/// Toric diagram of a lower-triangular monotone Bott matrix, given as rows.
#[pyfunction]
fn bott_diagram(rows: Vec<Vec<BigInt>>) -> PyResult<PyPolytope> {
    let m = latpoly::linalg::IntMatrix::from_rows(&rows).map_err(err)?;
    let b = families::BottMatrix::new(m).map_err(err)?;
    Ok(PyPolytope::wrap(b.diagram().map_err(err)?))
}

/// Prequantizes a Delzant reflexive polytope; returns the toric diagram
/// and the height functional that cut it out.
#[pyfunction]
fn prequantize(p: &PyPolytope) -> PyResult<(PyPolytope, Vec<BigInt>)> {
    let q = families::prequantize_polytope(&p.inner).map_err(err)?;
    Ok((PyPolytope::wrap(q.diagram), q.height_functional))
}

/// Affine unimodular equivalence: the witness map as `(linear rows, shift)`
/// with `x -> linear @ x + shift`, or `None` when inequivalent.
#[pyfunction]
fn unimodular_equivalent(
    a: &PyPolytope,
    b: &PyPolytope,
) -> PyResult<Option<(Vec<Vec<BigInt>>, Vec<BigInt>)>> {
    let w = equiv::unimodular_equivalent(&a.inner, &b.inner).map_err(err)?;
    Ok(w.map.as_ref().map(map_parts))
}

#[pyfunction]
fn ehrhart_equivalent(a: &PyPolytope, b: &PyPolytope) -> PyResult<bool> {
    equiv::ehrhart_equivalent(&a.inner, &b.inner).map_err(err)
}

/// Recovers the parameter `k` (and a witness map) when `p` is a unimodular
/// image of the `k`-th pseudo-bipyramid family member; `None` otherwise.
#[pyfunction]
fn identify_dk(p: &PyPolytope) -> PyResult<Option<(i64, (Vec<Vec<BigInt>>, Vec<BigInt>))>> {
    match equiv::identify_dk(&p.inner) {
        Ok(id) => Ok(Some((id.k, map_parts(&id.map)))),
        Err(latpoly::Error::NotInFamily(_)) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

#[pyfunction]
fn is_small_cross(p: &PyPolytope) -> PyResult<bool> {
    Ok(equiv::is_small_cross(&p.inner).map_err(err)?.equivalent)
}

/// Number of rooted 3-cacti on `n` triangles, by the counting recurrence.
#[pyfunction]
fn count_cacti(n: usize) -> BigInt {
    cactus::count_cacti(n)
}

/// All rooted 3-cacti on `n` triangles as JSON codes, canonically ordered.
#[pyfunction]
fn enumerate_cacti(n: usize) -> Vec<String> {
    cactus::enumerate_cacti(n).iter().map(cactus::RootedCactus::to_json).collect()
}

/// Realizes a cactus JSON code as its lattice polytope.
#[pyfunction]
fn realize_cactus(code: &str) -> PyResult<PyPolytope> {
    let c = cactus::RootedCactus::from_json(code).map_err(err)?;
    Ok(PyPolytope::wrap(cactus::realize(&c).map_err(err)?))
}

/// Reads the cactus structure back off a realized polytope.
#[pyfunction]
fn extract_cactus(p: &PyPolytope) -> PyResult<String> {
    Ok(cactus::extract_cactus(&p.inner).map_err(err)?.to_json())
}

#[pymodule]
fn latpoly_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_function(wrap_pyfunction!(cube, m)?)?;
    m.add_function(wrap_pyfunction!(cross, m)?)?;
    m.add_function(wrap_pyfunction!(small_cross, m)?)?;
    m.add_function(wrap_pyfunction!(family_pk, m)?)?;
    m.add_function(wrap_pyfunction!(family_tk, m)?)?;
    m.add_function(wrap_pyfunction!(family_dk, m)?)?;
    m.add_function(wrap_pyfunction!(bott_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(prequantize, m)?)?;
    m.add_function(wrap_pyfunction!(unimodular_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(ehrhart_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(identify_dk, m)?)?;
    m.add_function(wrap_pyfunction!(is_small_cross, m)?)?;
    m.add_function(wrap_pyfunction!(count_cacti, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_cacti, m)?)?;
    m.add_function(wrap_pyfunction!(realize_cactus, m)?)?;
    m.add_function(wrap_pyfunction!(extract_cactus, m)?)?;
    Ok(())
}
