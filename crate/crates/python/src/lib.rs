//! Python bindings: finite rings, derivations, skew inverse Laurent series,
//! and the radical machinery, as one extension module named `pdo`.
//!
//! Ring elements cross the boundary as plain integers (indices into the
//! element table); series stay opaque and carry their series ring so the
//! arithmetic operators work directly on them.

use pdo_core as pc;
use pdo_core::radicals;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::sync::Arc;

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Ring {
    inner: Arc<pc::FiniteRing>,
}

impl Ring {
    fn check(&self, a: usize) -> PyResult<usize> {
        if a < self.inner.order() {
            Ok(a)
        } else {
            Err(PyValueError::new_err(format!(
                "element {a} is outside ring of order {}",
                self.inner.order()
            )))
        }
    }

    fn check_all(&self, elems: &[usize]) -> PyResult<()> {
        for &a in elems {
            self.check(a)?;
        }
        Ok(())
    }
}

#[pymethods]
impl Ring {
    /// The integers modulo n.
    #[staticmethod]
    fn zn(n: usize) -> PyResult<Ring> {
        let inner = pc::ring::make_zn(n, pc::ring::DEFAULT_MAX_ORDER).map_err(value_err)?;
        Ok(Ring { inner })
    }

    /// Z_modulus[a1..ak] with ai^exponents[i] = 0; generators are named
    /// "a" for one variable, "a1", "a2", ... otherwise.
    #[staticmethod]
    fn truncated_poly(modulus: usize, exponents: Vec<usize>) -> PyResult<Ring> {
        let inner = pc::ring::make_truncated_poly(modulus, &exponents, pc::ring::DEFAULT_MAX_ORDER)
            .map_err(value_err)?;
        Ok(Ring { inner })
    }

    /// Upper triangular size x size matrices over Z_modulus, with matrix
    /// units named "e11", "e12", ...
    #[staticmethod]
    fn triangular(modulus: usize, size: usize) -> PyResult<Ring> {
        let inner = pc::ring::make_triangular_matrix_ring(modulus, size, pc::ring::DEFAULT_MAX_ORDER)
            .map_err(value_err)?;
        Ok(Ring { inner })
    }

    /// A ring from raw addition and multiplication tables (rows of element
    /// indices). The tables are checked against the ring axioms.
    #[staticmethod]
    fn from_tables(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> PyResult<Ring> {
        let order = add.len();
        let flat = |rows: Vec<Vec<usize>>, what: &str| -> PyResult<Vec<usize>> {
            if rows.len() != order || rows.iter().any(|row| row.len() != order) {
                return Err(PyValueError::new_err(format!(
                    "{what} table must be {order}x{order}"
                )));
            }
            Ok(rows.into_iter().flatten().collect())
        };
        let inner = pc::FiniteRing::from_add_mul(order, flat(add, "add")?, flat(mul, "mul")?)
            .map_err(value_err)?;
        let report = inner.validate();
        if let Some(v) = report.violations.first() {
            return Err(PyValueError::new_err(format!("not a ring: {v}")));
        }
        Ok(Ring {
            inner: Arc::new(inner),
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn zero(&self) -> usize {
        self.inner.zero()
    }

    /// The multiplicative identity, or None.
    #[getter]
    fn one(&self) -> Option<usize> {
        self.inner.one()
    }

    #[getter]
    fn is_unital(&self) -> bool {
        self.inner.one().is_some()
    }

    fn elements(&self) -> Vec<usize> {
        self.inner.elements().collect()
    }

    fn add(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.inner.add(self.check(a)?, self.check(b)?))
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.inner.mul(self.check(a)?, self.check(b)?))
    }

    fn neg(&self, a: usize) -> PyResult<usize> {
        Ok(self.inner.neg(self.check(a)?))
    }

    fn sub(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.inner.sub(self.check(a)?, self.check(b)?))
    }

    /// n-fold additive multiple of a (n may be negative).
    fn int_scale(&self, n: i64, a: usize) -> PyResult<usize> {
        Ok(self.inner.int_scale(n, self.check(a)?))
    }

    /// The image of the integer n, for unital rings.
    fn int(&self, n: i64) -> PyResult<usize> {
        let one = self
            .inner
            .one()
            .ok_or_else(|| PyValueError::new_err("ring has no identity"))?;
        Ok(self.inner.int_scale(n, one))
    }

    fn name(&self, a: usize) -> PyResult<String> {
        Ok(self.inner.elem_name(self.check(a)?).to_string())
    }

    /// Element index of a named generator, or None.
    fn symbol(&self, name: &str) -> Option<usize> {
        self.inner.lookup_symbol(name)
    }

    fn symbols(&self) -> Vec<(String, usize)> {
        self.inner.symbols().to_vec()
    }

    fn display_set(&self, elems: Vec<usize>) -> PyResult<String> {
        self.check_all(&elems)?;
        let set = pc::ElemSet::from_elems(self.inner.order(), elems);
        Ok(self.inner.display_set(&set))
    }

    fn __repr__(&self) -> String {
        format!(
            "Ring(order={}, {})",
            self.inner.order(),
            if self.inner.one().is_some() {
                "unital"
            } else {
                "no identity"
            }
        )
    }
}

#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Derivation {
    inner: pc::Derivation,
}

impl Derivation {
    fn checked(inner: pc::Derivation) -> PyResult<Derivation> {
        if let Some(v) = inner.validate().first() {
            return Err(PyValueError::new_err(format!("not a derivation: {v}")));
        }
        Ok(Derivation { inner })
    }
}

#[pymethods]
impl Derivation {
    #[staticmethod]
    fn zero(ring: &Ring) -> Derivation {
        Derivation {
            inner: pc::Derivation::zero(Arc::clone(&ring.inner)),
        }
    }

    /// a -> c*a - a*c.
    #[staticmethod]
    fn inner(ring: &Ring, c: usize) -> PyResult<Derivation> {
        ring.check(c)?;
        let d = pc::Derivation::inner(Arc::clone(&ring.inner), c).map_err(value_err)?;
        Derivation::checked(d)
    }

    /// Partial derivative with respect to the gen-th generator of a
    /// truncated polynomial ring.
    #[staticmethod]
    fn partial(ring: &Ring, gen: usize) -> PyResult<Derivation> {
        let d = pc::Derivation::partial(Arc::clone(&ring.inner), gen).map_err(value_err)?;
        Derivation::checked(d)
    }

    /// Arbitrary value table, checked for additivity and the Leibniz rule.
    #[staticmethod]
    fn from_table(ring: &Ring, table: Vec<u32>) -> PyResult<Derivation> {
        let d = pc::Derivation::from_table(Arc::clone(&ring.inner), table).map_err(value_err)?;
        Derivation::checked(d)
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn apply(&self, a: usize) -> PyResult<usize> {
        if a >= self.inner.ring().order() {
            return Err(PyValueError::new_err(format!("element {a} out of range")));
        }
        Ok(self.inner.apply(a))
    }

    fn apply_pow(&self, a: usize, t: u64) -> PyResult<usize> {
        if a >= self.inner.ring().order() {
            return Err(PyValueError::new_err(format!("element {a} out of range")));
        }
        Ok(self.inner.apply_pow(a, t))
    }

    /// First t with delta^t(a) = 0, or None when the orbit never dies.
    fn death(&self, a: usize) -> PyResult<Option<u32>> {
        if a >= self.inner.ring().order() {
            return Err(PyValueError::new_err(format!("element {a} out of range")));
        }
        Ok(self.inner.death(a))
    }

    fn table(&self) -> Vec<u32> {
        self.inner.table().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Derivation({})", self.inner.label())
    }
}

#[pyclass(frozen, name = "SeriesRing")]
struct PySeriesRing {
    inner: Arc<pc::SeriesRing>,
    ring: Ring,
}

impl PySeriesRing {
    fn wrap(&self, s: pc::Series) -> Series {
        Series {
            sr: Arc::clone(&self.inner),
            ring: self.ring.clone(),
            inner: s,
        }
    }
}

#[pymethods]
impl PySeriesRing {
    /// Series in x and x^-1 over `ring`, where moving a coefficient past x
    /// applies `derivation`. Products that do not terminate are truncated
    /// `floor_drop` degrees below their top.
    #[new]
    #[pyo3(signature = (ring, derivation, floor_drop = 24))]
    fn new(ring: &Ring, derivation: &Derivation, floor_drop: u32) -> PyResult<PySeriesRing> {
        if floor_drop == 0 {
            return Err(PyValueError::new_err("floor_drop must be positive"));
        }
        let sr = pc::SeriesRing::new(
            Arc::clone(&ring.inner),
            derivation.inner.clone(),
            pc::PrecisionPolicy::new(floor_drop),
        )
        .map_err(value_err)?;
        Ok(PySeriesRing {
            inner: Arc::new(sr),
            ring: ring.clone(),
        })
    }

    #[getter]
    fn ring(&self) -> Ring {
        self.ring.clone()
    }

    /// Build a series from (degree, element) pairs; repeated degrees add.
    fn series(&self, terms: Vec<(i64, usize)>) -> PyResult<Series> {
        Ok(self.wrap(self.inner.from_terms(&terms).map_err(value_err)?))
    }

    /// The scalar a as a degree-zero series.
    fn element(&self, a: usize) -> PyResult<Series> {
        self.ring.check(a)?;
        Ok(self.wrap(self.inner.embed_scalar(a).map_err(value_err)?))
    }

    /// x^k as a series (requires a ring identity).
    #[pyo3(signature = (k = 1))]
    fn x(&self, k: i64) -> PyResult<Series> {
        Ok(self.wrap(self.inner.x_power(k).map_err(value_err)?))
    }

    fn zero(&self) -> Series {
        self.wrap(self.inner.zero())
    }

    fn one(&self) -> PyResult<Series> {
        Ok(self.wrap(self.inner.one().map_err(value_err)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "SeriesRing(order={}, delta={})",
            self.ring.inner.order(),
            self.inner.delta().label()
        )
    }
}

#[pyclass(frozen, name = "Series")]
struct Series {
    sr: Arc<pc::SeriesRing>,
    ring: Ring,
    inner: pc::Series,
}

impl Series {
    fn same_ring<'a>(&self, other: &'a Series) -> PyResult<&'a pc::Series> {
        if Arc::ptr_eq(&self.sr, &other.sr) {
            Ok(&other.inner)
        } else {
            Err(PyValueError::new_err(
                "series belong to different series rings",
            ))
        }
    }

    fn wrap(&self, s: pc::Series) -> Series {
        Series {
            sr: Arc::clone(&self.sr),
            ring: self.ring.clone(),
            inner: s,
        }
    }
}

#[pymethods]
impl Series {
    fn __add__(&self, other: &Series) -> PyResult<Series> {
        let rhs = self.same_ring(other)?;
        Ok(self.wrap(self.sr.add(&self.inner, rhs)))
    }

    fn __sub__(&self, other: &Series) -> PyResult<Series> {
        let rhs = self.same_ring(other)?;
        Ok(self.wrap(self.sr.sub(&self.inner, rhs)))
    }

    fn __mul__(&self, other: &Series) -> PyResult<Series> {
        let rhs = self.same_ring(other)?;
        Ok(self.wrap(self.sr.mul(&self.inner, rhs)))
    }

    fn __neg__(&self) -> Series {
        self.wrap(self.sr.neg(&self.inner))
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        match other.cast::<Series>() {
            Ok(o) => {
                let o = o.get();
                Arc::ptr_eq(&self.sr, &o.sr) && self.inner == o.inner
            }
            Err(_) => false,
        }
    }

    /// x^k * self.
    fn x_mul(&self, k: i64) -> Series {
        self.wrap(self.sr.x_mul(k, &self.inner))
    }

    /// self * x^k (powers of x commute with themselves, so this shifts).
    fn shift(&self, k: i64) -> Series {
        self.wrap(self.sr.shift(&self.inner, k))
    }

    /// Coefficient-wise derivation.
    fn delta(&self) -> Series {
        self.wrap(self.sr.delta_series(&self.inner))
    }

    /// Coefficient-wise integer scaling.
    fn scale_int(&self, n: i64) -> Series {
        self.wrap(self.sr.scale_int(n, &self.inner))
    }

    #[getter]
    fn floor(&self) -> i64 {
        self.inner.floor()
    }

    #[getter]
    fn top(&self) -> i64 {
        self.inner.top()
    }

    #[getter]
    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }

    #[getter]
    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Coefficient of x^d, or None when the degree is below the floor of an
    /// inexact series.
    fn coefficient(&self, d: i64) -> Option<usize> {
        self.inner
            .coefficient_at(d, self.ring.inner.zero())
            .known()
    }

    /// Known nonzero (degree, element) pairs, ascending.
    fn terms(&self) -> Vec<(i64, usize)> {
        self.inner.terms(self.ring.inner.zero()).collect()
    }

    fn __str__(&self) -> String {
        self.sr.display(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.sr.display(&self.inner))
    }
}

/// Members of the left radideal: elements whose right multiples form a left
/// T-nilpotent set. Raises when that set is not an ideal of the ring.
#[pyfunction]
fn radideal_il(ring: &Ring) -> PyResult<Vec<usize>> {
    let ideal = radicals::radideal_il(&ring.inner).map_err(value_err)?;
    Ok(ideal.members().iter().collect())
}

/// Derivation-aware radideal: (members, is_ideal, is_delta_stable).
#[pyfunction]
fn radideal_il_delta(ring: &Ring, derivation: &Derivation) -> PyResult<(Vec<usize>, bool, bool)> {
    if !Arc::ptr_eq(&ring.inner, derivation.inner.ring()) {
        return Err(PyValueError::new_err("derivation belongs to a different ring"));
    }
    let rad = radicals::radideal_il_delta(&ring.inner, &derivation.inner);
    Ok((rad.members.iter().collect(), rad.is_ideal, rad.is_delta_stable))
}

#[pyfunction]
fn prime_radical(ring: &Ring) -> PyResult<Vec<usize>> {
    let ideal = radicals::prime_radical(&ring.inner).map_err(value_err)?;
    Ok(ideal.members().iter().collect())
}

/// Ascending radideal chain through quotients:
/// (stages, limit, stabilization_step).
#[pyfunction]
#[pyo3(signature = (ring, derivation = None))]
fn higher_radideals(
    ring: &Ring,
    derivation: Option<&Derivation>,
) -> PyResult<(Vec<Vec<usize>>, Vec<usize>, usize)> {
    let chain =
        radicals::higher_radideals(&ring.inner, derivation.map(|d| &d.inner)).map_err(value_err)?;
    Ok((
        chain.stages.iter().map(|s| s.iter().collect()).collect(),
        chain.limit.iter().collect(),
        chain.stabilization_step,
    ))
}

/// Upper left annihilator tower of the two-sided ideal generated by
/// `gens`, viewed as a ring of its own; on a unital ring the tower of the
/// whole ring never leaves {0}. Stages come back in parent indexing.
/// Returns (stages, reached_top, stabilization_step, delta_stable flags).
/// The derivation contributes only when the ideal is closed under it.
#[pyfunction]
#[pyo3(signature = (ring, gens, derivation = None))]
fn annihilator_series(
    ring: &Ring,
    gens: Vec<usize>,
    derivation: Option<&Derivation>,
) -> PyResult<(Vec<Vec<usize>>, bool, usize, Option<Vec<bool>>)> {
    ring.check_all(&gens)?;
    if let Some(d) = derivation {
        if !Arc::ptr_eq(&ring.inner, d.inner.ring()) {
            return Err(PyValueError::new_err("derivation belongs to a different ring"));
        }
    }
    let ideal = pc::ring::ideal_generated(&ring.inner, &gens, pc::Sidedness::TwoSided);
    let sub = ideal.as_ring();
    let d_sub = derivation
        .filter(|d| pc::ring::is_delta_ideal(&ideal, &d.inner))
        .and_then(|d| d.inner.restrict_to(Arc::clone(&sub.ring), &sub.embedding));
    let tower = radicals::upper_left_annihilator_series(&sub.ring, d_sub.as_ref());
    let stages = tower
        .stages
        .iter()
        .map(|s| s.iter().map(|i| sub.embedding[i]).collect())
        .collect();
    Ok((
        stages,
        tower.reached_top,
        tower.stabilization_step,
        tower.delta_stable,
    ))
}

/// Left T-nilpotency of a set: (verdict, bound, cycle). `bound` is the
/// product length past which everything vanishes; `cycle` lists the
/// repeating prefix products of a witness when the verdict is negative.
#[pyfunction]
fn is_left_t_nilpotent(
    ring: &Ring,
    elems: Vec<usize>,
) -> PyResult<(bool, Option<usize>, Option<Vec<usize>>)> {
    ring.check_all(&elems)?;
    let set = pc::ElemSet::from_elems(ring.inner.order(), elems);
    match radicals::is_left_t_nilpotent(&ring.inner, &set) {
        radicals::TNilpVerdict::TNilpotent { bound } => Ok((true, Some(bound), None)),
        radicals::TNilpVerdict::NotTNilpotent(w) => {
            Ok((false, None, Some(w.products[w.repeat_at..].to_vec())))
        }
    }
}

/// Members of the two-sided ideal generated by `gens`.
#[pyfunction]
fn ideal(ring: &Ring, gens: Vec<usize>) -> PyResult<Vec<usize>> {
    ring.check_all(&gens)?;
    let ideal = pc::ring::ideal_generated(&ring.inner, &gens, pc::Sidedness::TwoSided);
    Ok(ideal.members().iter().collect())
}

/// Least k with I^k = 0 for the two-sided ideal generated by `gens`, or
/// None when the power chain stabilizes above zero.
#[pyfunction]
fn nilpotency_index(ring: &Ring, gens: Vec<usize>) -> PyResult<Option<u32>> {
    ring.check_all(&gens)?;
    let ideal = pc::ring::ideal_generated(&ring.inner, &gens, pc::Sidedness::TwoSided);
    Ok(radicals::nilpotency_index(&ideal))
}

/// Run every verification suite over the built-in fixture catalog.
/// Returns (all_passed, summary_lines, structured_jsonl).
#[pyfunction]
#[pyo3(signature = (seed = 0, trials = 200))]
fn verify_all(seed: u64, trials: usize) -> (bool, Vec<String>, String) {
    let cfg = pc::VerifyConfig {
        seed,
        trials,
        ..pc::VerifyConfig::default()
    };
    let reports = pc::run_all(&pc::default_catalog(), &cfg);
    let ok = reports
        .iter()
        .all(|r| !matches!(r.status, pc::ReportStatus::Failed));
    let lines = reports.iter().map(|r| r.summary_line()).collect();
    let jsonl = pc::reports_to_jsonl(&reports);
    (ok, lines, jsonl)
}

#[pymodule]
fn pdo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ring>()?;
    m.add_class::<Derivation>()?;
    m.add_class::<PySeriesRing>()?;
    m.add_class::<Series>()?;
    m.add_function(wrap_pyfunction!(radideal_il, m)?)?;
    m.add_function(wrap_pyfunction!(radideal_il_delta, m)?)?;
    m.add_function(wrap_pyfunction!(prime_radical, m)?)?;
    m.add_function(wrap_pyfunction!(higher_radideals, m)?)?;
    m.add_function(wrap_pyfunction!(annihilator_series, m)?)?;
    m.add_function(wrap_pyfunction!(is_left_t_nilpotent, m)?)?;
    m.add_function(wrap_pyfunction!(ideal, m)?)?;
    m.add_function(wrap_pyfunction!(nilpotency_index, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
