//! Python bindings.
//!
//! Rational numbers cross the boundary as `"p/q"` strings; any Python object
//! whose `str()` parses as a rational (int, `fractions.Fraction`, str) is
//! accepted on input. Structured reports are returned as plain dicts.

use std::sync::Arc;

use nilcpa_core::cpa::{self, CpaProduct as CoreProduct};
use nilcpa_core::eqn::{self, PairPolicy};
use nilcpa_core::exact::Rational;
use nilcpa_core::format::{AlgebraFile, ProductFile};
use nilcpa_core::liealg::catalog::catalog;
use nilcpa_core::polysolve::{self, GroebnerBudget, SolveBudget};
use nilcpa_core::{build_free_nilpotent, witt_dimension, LieAlgebraTable};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    obj.str()?.to_str()?.trim().parse().map_err(value_error)
}

fn vector(items: Vec<Bound<'_, PyAny>>, dim: usize) -> PyResult<Vec<Rational>> {
    if items.len() != dim {
        return Err(PyValueError::new_err(format!("expected {dim} coordinates, got {}", items.len())));
    }
    items.iter().map(rational).collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// A finite-dimensional Lie algebra given by structure constants.
#[pyclass(name = "LieAlgebra", frozen, skip_from_py_object, module = "nilcpa")]
#[derive(Clone)]
pub struct PyLieAlgebra {
    table: Arc<LieAlgebraTable>,
    free_nilpotent: Option<(usize, usize)>,
}

#[pymethods]
impl PyLieAlgebra {
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        let entry = catalog(name).map_err(value_error)?;
        Ok(PyLieAlgebra {
            table: Arc::new(entry.table),
            free_nilpotent: entry.free_nilpotent,
        })
    }

    #[staticmethod]
    fn free_nilpotent(generators: usize, class_: usize) -> PyResult<Self> {
        let p = build_free_nilpotent(generators, class_).map_err(value_error)?;
        Ok(PyLieAlgebra {
            table: Arc::new(p.table),
            free_nilpotent: Some((generators, class_)),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(value_error)?;
        Ok(PyLieAlgebra {
            table: Arc::new(LieAlgebraTable::from_file(&file).map_err(value_error)?),
            free_nilpotent: None,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.table.to_file()).map_err(value_error)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.table.dim()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.table.names().to_vec()
    }

    fn bracket(&self, x: Vec<Bound<'_, PyAny>>, y: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        let n = self.table.dim();
        let v = self.table.bracket(&vector(x, n)?, &vector(y, n)?).map_err(value_error)?;
        Ok(strings(&v))
    }

    fn validate(&self) -> PyResult<()> {
        self.table.validate().map_err(value_error)
    }

    fn is_nilpotent(&self) -> bool {
        self.table.is_nilpotent()
    }

    fn center_dim(&self) -> usize {
        self.table.center().dim()
    }

    fn commutator_dim(&self) -> usize {
        self.table.commutator().dim()
    }

    fn lower_central_dims(&self) -> Vec<usize> {
        self.table.series().lower_central_dims()
    }

    fn nilpotency_class(&self) -> Option<usize> {
        self.table.series().nilpotency_class
    }

    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.table.invariants())
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra(dim={}, names={:?})", self.table.dim(), self.table.names())
    }
}

/// A bilinear product on a Lie algebra, checked against the CPA axioms.
#[pyclass(name = "CpaProduct", frozen, skip_from_py_object, module = "nilcpa")]
#[derive(Clone)]
pub struct PyCpaProduct {
    inner: CoreProduct,
}

#[pymethods]
impl PyCpaProduct {
    /// `products` maps 0-based pairs `(i, j)` to coordinate lists.
    #[new]
    fn new(algebra: &PyLieAlgebra, products: Vec<((usize, usize), Vec<Bound<'_, PyAny>>)>) -> PyResult<Self> {
        let n = algebra.table.dim();
        let mut rows = Vec::with_capacity(products.len());
        for ((i, j), v) in products {
            let v = vector(v, n)?;
            let sparse = nilcpa_core::exact::sparse_from_dense(&v);
            rows.push((i.min(j), i.max(j), sparse));
        }
        let inner = CoreProduct::from_products(algebra.table.clone(), rows).map_err(value_error)?;
        Ok(PyCpaProduct { inner })
    }

    #[staticmethod]
    fn from_json(algebra: &PyLieAlgebra, text: &str) -> PyResult<Self> {
        let file: ProductFile = serde_json::from_str(text).map_err(value_error)?;
        let inner = CoreProduct::from_file(algebra.table.clone(), &file).map_err(value_error)?;
        Ok(PyCpaProduct { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_file(None)).map_err(value_error)
    }

    fn product(&self, x: Vec<Bound<'_, PyAny>>, y: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        let n = self.inner.dim();
        Ok(strings(&self.inner.product(&vector(x, n)?, &vector(y, n)?)))
    }

    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cpa::verify(&self.inner))
    }

    fn is_complete(&self) -> bool {
        cpa::is_complete(&self.inner)
    }

    fn fitting_null_dim(&self) -> usize {
        cpa::fitting_null(&self.inner).dim()
    }

    fn nonzero_products(&self) -> Vec<((usize, usize), Vec<String>)> {
        cpa::nonzero_products(&self.inner)
            .into_iter()
            .map(|(k, v)| (k, strings(&v)))
            .collect()
    }
}

/// Dimensions of F(g, c) for classes 1..=c.
#[pyfunction]
fn witt_dimensions(generators: u64, class_: u64) -> Vec<String> {
    witt_dimension(generators, class_)
        .cumulative()
        .iter()
        .map(ToString::to_string)
        .collect()
}

/// Solves for all CPA structures and decides whether they are central.
#[pyfunction]
#[pyo3(signature = (algebra, max_pairs = 4000))]
fn solve_cpa<'py>(py: Python<'py>, algebra: &PyLieAlgebra, max_pairs: usize) -> PyResult<Bound<'py, PyAny>> {
    let budget = SolveBudget {
        groebner: GroebnerBudget {
            max_pairs,
            ..GroebnerBudget::default()
        },
        ..SolveBudget::default()
    };
    let table = algebra.table.clone();
    let (export, verdict, witness) = py.detach(|| {
        let v = polysolve::solve_cpa(table.clone(), &budget);
        let c = polysolve::variety_is_central(&v, &table.center(), &budget);
        (v.export(), c.verdict, c.witness)
    });
    let witness = witness.map(|w| PyCpaProduct { inner: w.product });
    let out = pyo3::types::PyDict::new(py);
    out.set_item("verdict", to_py(py, &verdict)?)?;
    out.set_item("variety", to_py(py, &export)?)?;
    out.set_item("witness", witness)?;
    Ok(out.into_any())
}

#[pyfunction]
#[pyo3(signature = (algebra, pairs = 25, seed = 0))]
fn property_f<'py>(py: Python<'py>, algebra: &PyLieAlgebra, pairs: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let policy = PairPolicy {
        random_pairs: pairs,
        seed,
        transitive: matches!(algebra.free_nilpotent, Some((2, _))),
        ..PairPolicy::default()
    };
    let report = eqn::has_property_f(&algebra.table, &policy).map_err(value_error)?;
    to_py(py, &report)
}

/// Grid system on the canonical generators; returns
/// `(solution_dim, all_central, equals_central_assignments)`.
#[pyfunction]
fn grid(algebra: &PyLieAlgebra) -> PyResult<(usize, bool, bool)> {
    let t = &algebra.table;
    let system = eqn::solve_grid(t, &eqn::canonical_generators(t)).map_err(value_error)?;
    let z = t.center();
    Ok((system.solution.dim(), system.is_central(&z), system.equals_central_assignments(&z)))
}

#[pyfunction]
fn conjecture<'py>(py: Python<'py>, cmax: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| eqn::conjecture_scan(cmax, &SolveBudget::default()))
        .map_err(value_error)?;
    to_py(py, &report)
}

#[pymodule]
fn nilcpa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLieAlgebra>()?;
    m.add_class::<PyCpaProduct>()?;
    m.add_function(wrap_pyfunction!(witt_dimensions, m)?)?;
    m.add_function(wrap_pyfunction!(solve_cpa, m)?)?;
    m.add_function(wrap_pyfunction!(property_f, m)?)?;
    m.add_function(wrap_pyfunction!(grid, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture, m)?)?;
    Ok(())
}
