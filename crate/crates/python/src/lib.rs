//! Python module `expmap_py`: rings, polynomials, exponential maps,
//! invariants and slice decompositions.

use expmap::cli::{self, Command};
use expmap::decompose;
use expmap::invariants::{self, MinimalSlice};
use expmap::{DegreeWindow, ExpMap, FieldSpec, MPoly, PolyRing, SliceRecord};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn window(maxdeg: u32) -> PyResult<DegreeWindow> {
    DegreeWindow::new(maxdeg).map_err(err)
}

#[pyclass(name = "Ring", module = "expmap_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRing {
    inner: PolyRing,
}

#[pymethods]
impl PyRing {
    /// `field` is "Q" or "Fp:<prime>".
    #[new]
    fn new(field: &str, vars: Vec<String>) -> PyResult<Self> {
        let field: FieldSpec = field.parse().map_err(err)?;
        Ok(PyRing {
            inner: PolyRing::new(field, &vars).map_err(err)?,
        })
    }

    fn parse(&self, text: &str) -> PyResult<PyPoly> {
        expmap::parse_poly(text, &self.inner).map(PyPoly::from).map_err(err)
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.vars().to_vec()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ring({})", self.inner)
    }
}

#[pyclass(name = "Poly", module = "expmap_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoly {
    inner: MPoly,
}

impl From<MPoly> for PyPoly {
    fn from(inner: MPoly) -> Self {
        PyPoly { inner }
    }
}

impl PyPoly {
    fn same_ring(&self, other: &PyPoly) -> PyResult<()> {
        if self.inner.ring() == other.inner.ring() {
            Ok(())
        } else {
            Err(PyValueError::new_err("polynomials live in different rings"))
        }
    }
}

#[pymethods]
impl PyPoly {
    fn __add__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.same_ring(other)?;
        Ok((&self.inner + &other.inner).into())
    }

    fn __sub__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.same_ring(other)?;
        Ok((&self.inner - &other.inner).into())
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.same_ring(other)?;
        Ok((&self.inner * &other.inner).into())
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> PyPoly {
        self.inner.pow(e).into()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({:?})", self.inner.to_string())
    }
}

#[pyclass(name = "ExpMap", module = "expmap_py", frozen)]
struct PyExpMap {
    inner: ExpMap,
}

impl PyExpMap {
    fn poly(&self, text: &str) -> PyResult<MPoly> {
        expmap::parse_poly(text, self.inner.ring()).map_err(err)
    }
}

fn strs(ps: &[MPoly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

#[pymethods]
impl PyExpMap {
    /// One image per ring variable, as text in the variables and `x`.
    #[new]
    fn new(ring: &PyRing, images: Vec<String>) -> PyResult<Self> {
        Ok(PyExpMap {
            inner: ExpMap::from_strs(&ring.inner, &images).map_err(err)?,
        })
    }

    #[getter]
    fn ring(&self) -> PyRing {
        PyRing {
            inner: self.inner.ring().clone(),
        }
    }

    /// `(valid, report)`.
    fn validate(&self) -> (bool, String) {
        let rep = self.inner.validate();
        (rep.valid, rep.to_string())
    }

    /// Coefficients `[a_0, ..., a_m]` of `σ(f) = Σ a_i x^i`.
    fn apply(&self, f: &str) -> PyResult<Vec<String>> {
        Ok(strs(self.inner.apply(&self.poly(f)?).coeffs()))
    }

    fn deg_sigma(&self, f: &str) -> PyResult<usize> {
        Ok(self.inner.deg_sigma(&self.poly(f)?))
    }

    fn lc_sigma(&self, f: &str) -> PyResult<String> {
        Ok(self.inner.profile(&self.poly(f)?).map_err(err)?.lc_sigma.to_string())
    }

    fn is_invariant(&self, f: &str) -> PyResult<bool> {
        Ok(self.inner.is_invariant(&self.poly(f)?))
    }

    fn invariant_basis(&self, maxdeg: u32) -> PyResult<Vec<String>> {
        Ok(strs(&invariants::invariant_basis(&self.inner, window(maxdeg)?)))
    }

    /// `(m_star, [(slice, lc), ...])`.
    fn local_slices(&self, maxdeg: u32) -> PyResult<(usize, Vec<(String, String)>)> {
        let found = invariants::find_local_slices(&self.inner, window(maxdeg)?).map_err(err)?;
        let pairs = found
            .slices
            .iter()
            .map(|s| (s.element.to_string(), s.lc.to_string()))
            .collect();
        Ok((found.m_star, pairs))
    }

    /// `(slice, lc)` or `None` when the window sample is inconclusive.
    fn minimal_local_slice(&self, maxdeg: u32) -> PyResult<Option<(String, String)>> {
        Ok(match invariants::minimal_local_slice(&self.inner, window(maxdeg)?).map_err(err)? {
            MinimalSlice::Found(s) => Some((s.element.to_string(), s.lc.to_string())),
            MinimalSlice::Inconclusive { .. } => None,
        })
    }

    /// `(n, [b_0, ..., b_M])` with `lc_σ(s)^n f = Σ b_i s^i`. With
    /// `factors`, the exponent is reduced to zero one factor at a time.
    #[pyo3(signature = (slice, f, factors=None))]
    fn decompose(&self, slice: &str, f: &str, factors: Option<Vec<String>>) -> PyResult<(u32, Vec<String>)> {
        let s_rec = SliceRecord::of(&self.inner, &self.poly(slice)?).map_err(err)?;
        let f = self.poly(f)?;
        let dec = if s_rec.lc.is_one() {
            decompose::decompose_with_slice(&self.inner, &s_rec.element, &f)
        } else {
            decompose::decompose_localized(&self.inner, &s_rec, &f)
        }
        .map_err(err)?;
        let dec = match factors {
            Some(fs) => {
                let fs = fs.iter().map(|t| self.poly(t)).collect::<PyResult<Vec<_>>>()?;
                decompose::reduce_denominator(&self.inner, &dec, &fs).map_err(err)?
            }
            None => dec,
        };
        Ok((dec.exponent, strs(&dec.coeffs)))
    }

    fn __repr__(&self) -> String {
        let imgs: Vec<String> = self.inner.images().iter().map(|i| i.to_string()).collect();
        format!("ExpMap({}: {})", self.inner.ring(), imgs.join(", "))
    }
}

/// gcd of the binomial coefficients `C(n, i)`, `0 < i < n`.
#[pyfunction]
fn d_of_n(n: u64) -> PyResult<u64> {
    let d = expmap::d_of_n(n).map_err(err)?;
    u64::try_from(d).map_err(err)
}

/// Runs a CLI command on instance text; returns `(exit_code, report)`.
#[pyfunction]
#[pyo3(signature = (command, instance, maxdeg=None, element=None))]
fn run_command(command: &str, instance: &str, maxdeg: Option<u32>, element: Option<String>) -> PyResult<(i32, String)> {
    let cmd = match (command, element) {
        ("validate", _) => Command::Validate,
        ("invariants", _) => Command::Invariants,
        ("slices", _) => Command::Slices,
        ("verify", _) => Command::Verify,
        ("decompose", Some(element)) => Command::Decompose { element },
        ("decompose", None) => return Err(PyValueError::new_err("decompose needs element=")),
        (other, _) => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    };
    let out = cli::run(&cmd, instance, maxdeg);
    Ok((out.code, out.text))
}

#[pymodule]
fn expmap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRing>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyExpMap>()?;
    m.add_function(wrap_pyfunction!(d_of_n, m)?)?;
    m.add_function(wrap_pyfunction!(run_command, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrappers_round_trip() {
        let ring = PyRing::new("Q", vec!["u".into(), "v".into()]).unwrap();
        let map = PyExpMap::new(&ring, vec!["u".into(), "v + u*x".into()]).unwrap();
        assert!(map.validate().0);
        assert_eq!(map.apply("v^2").unwrap(), ["v^2", "2*u*v", "u^2"]);
        assert_eq!(map.invariant_basis(2).unwrap(), ["1", "u", "u^2"]);
        assert_eq!(map.minimal_local_slice(2).unwrap(), Some(("v".into(), "u".into())));
        assert_eq!(
            map.decompose("v", "u*v^2 + u", Some(vec!["u".into()])).unwrap(),
            (0, vec!["u".into(), "0".into(), "u".into()])
        );
        assert_eq!(d_of_n(8).unwrap(), 2);
        let (code, text) = run_command("validate", "field = \"Q\"\nvars = [\"v\"]\nsigma.v = \"v + x\"\n", None, None).unwrap();
        assert_eq!(code, 0);
        assert!(text.ends_with("VALID\n"));
    }
}
