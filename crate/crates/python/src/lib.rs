//! Python bindings: sieves, phases, multiplicative functions, sums, the
//! hyperbola partition, Vinogradov counts, polynomial congruences,
//! characters and equidistribution statistics.

use std::sync::Arc;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mw::characters::{self as chars, CharGroup};
use mw::congruence::{self as cong, Irreducibility};
use mw::{equidist, multfunc, partition, phase, vinogradov, weylsum};

create_exception!(
    multweyl,
    ResourceError,
    PyRuntimeError,
    "A computation exceeded a memory or work guard."
);

fn to_py(e: mw::Error) -> PyErr {
    match e {
        mw::Error::Resource(m) => ResourceError::new_err(m),
        mw::Error::Parameter(m) | mw::Error::Evaluation(m) => PyValueError::new_err(m),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for mw::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// A serializable record as a Python dict.
fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "PrimeSieve", module = "multweyl", frozen)]
struct PySieve {
    inner: Arc<mw::PrimeSieve>,
}

#[pymethods]
impl PySieve {
    #[new]
    fn new(py: Python<'_>, limit: u64) -> PyResult<Self> {
        let inner = py.detach(|| mw::PrimeSieve::new(limit)).or_raise()?;
        Ok(PySieve {
            inner: Arc::new(inner),
        })
    }

    #[getter]
    fn limit(&self) -> u64 {
        self.inner.limit()
    }

    fn is_prime(&self, n: u64) -> bool {
        n <= self.inner.limit() && self.inner.is_prime(n)
    }

    /// Primes in [lo, hi].
    #[pyo3(signature = (lo = 2, hi = None))]
    fn primes(&self, lo: u64, hi: Option<u64>) -> Vec<u32> {
        let hi = hi.unwrap_or(self.inner.limit()).min(self.inner.limit());
        self.inner.primes_between(lo, hi).to_vec()
    }

    fn prime_count(&self, x: u64) -> usize {
        self.inner.prime_count(x.min(self.inner.limit()))
    }

    /// (prime, exponent) pairs of n.
    fn factorize(&self, n: u64) -> PyResult<Vec<(u64, u32)>> {
        Ok(self.inner.factorize(n).or_raise()?.factors)
    }

    fn __repr__(&self) -> String {
        format!("PrimeSieve(limit={})", self.inner.limit())
    }
}

#[pyclass(name = "Phase", module = "multweyl", frozen)]
struct PyPhase {
    inner: phase::PolyPhase,
    expr: String,
}

#[pymethods]
impl PyPhase {
    /// Polynomial phase such as "sqrt:2*x^2 + golden*x", stored mod 1.
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        Ok(PyPhase {
            inner: phase::PolyPhase::parse(expr).or_raise()?,
            expr: expr.to_string(),
        })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// Coefficient of x^ell reduced mod 1.
    fn coeff(&self, ell: usize) -> f64 {
        self.inner.coeff(ell).to_f64()
    }

    /// {F(n)} in [0, 1).
    fn frac_at(&self, n: i64) -> f64 {
        self.inner.frac_at(n as i128).to_f64()
    }

    /// e(F(n)).
    fn exp_at(&self, n: i64) -> Complex64 {
        self.inner.exp_at(n as i128)
    }

    fn __repr__(&self) -> String {
        format!("Phase({:?})", self.expr)
    }
}

/// Best approximation a/q of alpha mod 1 with q <= R.
#[pyfunction]
#[pyo3(name = "dirichlet_approx")]
fn py_dirichlet_approx<'py>(
    py: Python<'py>,
    alpha: &str,
    r_bound: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let frac = phase::parse_real(alpha).or_raise()?;
    let ap = phase::dirichlet_approx(frac, r_bound).or_raise()?;
    to_dict(py, &ap)
}

/// Major/minor arc label with R_ell = N^ell / (log N)^B.
#[pyfunction]
#[pyo3(name = "classify_arc")]
fn py_classify_arc<'py>(
    py: Python<'py>,
    phase: &PyPhase,
    n: u64,
    b: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &phase::classify_arc(&phase.inner, n, b).or_raise()?)
}

/// Values f(0..=N) of mobius, liouville or unit (f(0) = 0).
#[pyfunction]
fn function_values(
    py: Python<'_>,
    name: &str,
    sieve: &PySieve,
    n: u64,
) -> PyResult<Vec<Complex64>> {
    let f = multfunc::MultiplicativeFunction::by_name(name).or_raise()?;
    py.detach(|| f.sieve_values(&sieve.inner, n)).or_raise()
}

/// The extremal construction with f(p) = z0 on (N/2, N].
#[pyfunction]
#[pyo3(signature = (phase, sieve, n, grid = None))]
fn extremal_construct<'py>(
    py: Python<'py>,
    phase: &PyPhase,
    sieve: &PySieve,
    n: u64,
    grid: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = grid.unwrap_or_else(|| multfunc::default_grid_size(n));
    let r = py
        .detach(|| multfunc::extremal_construct(&phase.inner, &sieve.inner, n, grid))
        .or_raise()?;
    let values = py.detach(|| r.f.sieve_values(&sieve.inner, n)).or_raise()?;
    let d = PyDict::new(py);
    d.set_item("z0", r.z0)?;
    d.set_item("angle", r.angle)?;
    d.set_item("sum", r.sum_value)?;
    d.set_item("abs", r.sum_value.norm())?;
    d.set_item("lower_bound", r.lower_bound)?;
    d.set_item("log_bound", r.log_bound)?;
    d.set_item("g_at_zero", r.g_at_zero)?;
    d.set_item("g_at_z0", r.g_at_z0)?;
    d.set_item("grid_max", r.grid_max)?;
    d.set_item("grid_size", r.grid_size)?;
    d.set_item("g_coefficients", r.g_coefficients)?;
    d.set_item("warning", r.warning)?;
    d.set_item("values", values)?;
    Ok(d)
}

/// Σ_{n<=N} f(n) e(F(n)) for values indexed from 0.
#[pyfunction]
fn weyl_sum(
    py: Python<'_>,
    values: Vec<Complex64>,
    phase: &PyPhase,
    n: u64,
) -> PyResult<Complex64> {
    py.detach(|| weylsum::weyl_sum(&values, &phase.inner, n))
        .or_raise()
}

/// Σ_{n<=N} f(n) log(N/n) e(F(n)).
#[pyfunction]
fn log_weighted_sum(
    py: Python<'_>,
    values: Vec<Complex64>,
    phase: &PyPhase,
    n: u64,
) -> PyResult<Complex64> {
    py.detach(|| weylsum::log_weighted_sum(&values, &phase.inner, n))
        .or_raise()
}

/// Σ_{pn<=N} f(n) f(p) log p e(F(np)).
#[pyfunction]
fn hyperbola_bilinear(
    py: Python<'_>,
    values: Vec<Complex64>,
    sieve: &PySieve,
    phase: &PyPhase,
    n: u64,
) -> PyResult<Complex64> {
    py.detach(|| weylsum::hyperbola_bilinear(&values, &sieve.inner, &phase.inner, n))
        .or_raise()
}

/// |S| with the three bound terms for r > d(d+1).
#[pyfunction]
#[pyo3(signature = (values, phase, n, r, a = 0.0, r_bound = None))]
fn bound_report<'py>(
    py: Python<'py>,
    values: Vec<Complex64>,
    phase: &PyPhase,
    n: u64,
    r: u32,
    a: f64,
    r_bound: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = py
        .detach(|| weylsum::bound_report(&values, &phase.inner, n, r, a, r_bound))
        .or_raise()?;
    to_dict(py, &rep)
}

#[pyclass(name = "Partition", module = "multweyl", frozen)]
struct PyPartition {
    inner: partition::PartitionScheme,
}

#[pymethods]
impl PyPartition {
    /// Rectangles covering {(p, n): pn <= N} apart from a small set.
    #[new]
    fn new(py: Python<'_>, n: u64, s: f64) -> PyResult<Self> {
        let inner = py.detach(|| partition::build_partition(n, s)).or_raise()?;
        Ok(PyPartition { inner })
    }

    #[getter]
    fn main_count(&self) -> usize {
        self.inner.main_rects.len()
    }

    #[getter]
    fn sub_count(&self) -> usize {
        self.inner.sub_rects.len()
    }

    /// (p_lo, p_hi, n_lo, n_hi) of every rectangle, as floats.
    fn rectangles(&self) -> Vec<(f64, f64, f64, f64)> {
        self.inner
            .all_rects()
            .map(|r| (r.p_lo_f64(), r.p_hi_f64(), r.n_lo_f64(), r.n_hi_f64()))
            .collect()
    }

    fn exceptional_points(&self, py: Python<'_>, sieve: &PySieve) -> PyResult<Vec<(u64, u64)>> {
        py.detach(|| partition::exceptional_points(&self.inner, &sieve.inner))
            .or_raise()
    }

    /// Exact-cover check with unit weights, or f(n) log p e(F(pn)) when
    /// values and phase are given.
    #[pyo3(signature = (sieve, values = None, phase = None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        sieve: &PySieve,
        values: Option<Vec<Complex64>>,
        phase: Option<&PyPhase>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let rep = match (values, phase) {
            (None, None) => py.detach(|| {
                partition::verify_partition(&self.inner, &sieve.inner, |_, _| 1.0.into())
            }),
            (Some(v), Some(f)) => {
                if (v.len() as u64) <= self.inner.n {
                    return Err(PyValueError::new_err("values must cover 0..=N"));
                }
                let f = &f.inner;
                py.detach(|| {
                    partition::verify_partition(&self.inner, &sieve.inner, |p, m| {
                        v[m as usize] * (p as f64).ln() * f.exp_at((p * m) as i128)
                    })
                })
            }
            _ => {
                return Err(PyValueError::new_err(
                    "give both values and phase, or neither",
                ))
            }
        }
        .or_raise()?;
        to_dict(py, &rep)
    }
}

/// J_{r,d}(V): solutions of the degree-d system in [1, V]^{2r}.
#[pyfunction]
fn jrd(py: Python<'_>, v: u64, r: u32, d: u32) -> PyResult<u128> {
    py.detach(|| vinogradov::jrd(v, r, d)).or_raise()
}

/// Variables drawn from disjoint half-open intervals (lo, hi].
#[pyfunction]
fn jrd_intervals(py: Python<'_>, intervals: Vec<(u64, u64)>, r: u32, d: u32) -> PyResult<u128> {
    py.detach(|| vinogradov::jrd_intervals(&intervals, r, d))
        .or_raise()
}

/// Variables restricted to primes in (y, x].
#[pyfunction]
fn jrd_primes(py: Python<'_>, y: u64, x: u64, r: u32, d: u32, sieve: &PySieve) -> PyResult<u128> {
    py.detach(|| vinogradov::jrd_primes(y, x, r, d, &sieve.inner))
        .or_raise()
}

/// log(J(V_large)/J(V_small)) / log(V_large/V_small).
#[pyfunction]
fn slope_estimate(py: Python<'_>, r: u32, d: u32, v_small: u64, v_large: u64) -> PyResult<f64> {
    py.detach(|| vinogradov::slope_estimate(r, d, v_small, v_large))
        .or_raise()
}

#[pyclass(name = "IntPoly", module = "multweyl", frozen)]
struct PyIntPoly {
    inner: cong::IntPoly,
}

#[pymethods]
impl PyIntPoly {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        Ok(PyIntPoly {
            inner: cong::IntPoly::parse(expr).or_raise()?,
        })
    }

    /// Coefficients, constant term first.
    #[getter]
    fn coeffs(&self) -> Vec<i64> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn discriminant<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        py.import("builtins")?
            .call_method1("int", (self.inner.discriminant().to_string(),))
    }

    /// "rational_root_checked", "certified" or "asserted"; raises for a
    /// reducible polynomial.
    fn irreducibility<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let cert: Irreducibility = self.inner.irreducibility_check().or_raise()?;
        to_dict(py, &cert)
    }

    fn roots_mod_prime(&self, q: u64) -> Vec<u64> {
        cong::roots_mod_prime(&self.inner, q)
    }

    fn lift_roots(&self, q: u64, k: u32) -> Vec<u64> {
        cong::lift_roots(&self.inner, q, k)
    }

    fn __repr__(&self) -> String {
        format!("IntPoly({:?})", self.inner.to_string())
    }
}

#[pyclass(name = "RootTable", module = "multweyl", frozen)]
struct PyRootTable {
    inner: cong::RootTable,
}

#[pymethods]
impl PyRootTable {
    /// Roots of the polynomial mod every n <= N.
    #[new]
    #[pyo3(signature = (poly, sieve, n, allow_large = false))]
    fn new(
        py: Python<'_>,
        poly: &PyIntPoly,
        sieve: &PySieve,
        n: u64,
        allow_large: bool,
    ) -> PyResult<Self> {
        let inner = py
            .detach(|| cong::build_root_table(&poly.inner, &sieve.inner, n, allow_large))
            .or_raise()?;
        Ok(PyRootTable { inner })
    }

    #[getter]
    fn n_max(&self) -> u64 {
        self.inner.n_max()
    }

    fn roots(&self, n: u64) -> PyResult<Vec<u32>> {
        if n == 0 || n > self.inner.n_max() {
            return Err(PyValueError::new_err(format!(
                "n must lie in [1, {}]",
                self.inner.n_max()
            )));
        }
        Ok(self.inner.roots(n).to_vec())
    }

    fn rho(&self, n: u64) -> PyResult<u64> {
        Ok(self.roots(n)?.len() as u64)
    }

    fn rho_sum(&self, x: u64) -> u64 {
        self.inner.rho_sum(x.min(self.inner.n_max()))
    }

    #[pyo3(signature = (a = 2.0, d_const = 2.0, samples = 1000, seed = 0))]
    fn stats<'py>(
        &self,
        py: Python<'py>,
        a: f64,
        d_const: f64,
        samples: u64,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let s = py
            .detach(|| cong::rho_stats(&self.inner, a, d_const, samples, seed))
            .or_raise()?;
        to_dict(py, &s)
    }

    /// Σ_n e(h1 F(n)) Σ_v e(h2 v/n) over n <= N.
    fn joint_weyl_sum(
        &self,
        py: Python<'_>,
        phase: &PyPhase,
        n: u64,
        h1: i64,
        h2: i64,
    ) -> PyResult<Complex64> {
        py.detach(|| equidist::joint_weyl_sum(&self.inner, &phase.inner, n, h1, h2))
            .or_raise()
    }

    fn hooley_average(&self, py: Python<'_>, h: i64, x: u64) -> PyResult<f64> {
        py.detach(|| equidist::hooley_average(&self.inner, h, x))
            .or_raise()
    }

    /// Grid discrepancy of (v/n, {F(n)}) over n <= N.
    #[pyo3(signature = (phase, n, grid = 64))]
    fn discrepancy<'py>(
        &self,
        py: Python<'py>,
        phase: &PyPhase,
        n: u64,
        grid: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let d = py
            .detach(|| {
                equidist::joint_sequence(&self.inner, &phase.inner, n)
                    .and_then(|s| equidist::star_discrepancy_2d(&s, grid))
            })
            .or_raise()?;
        to_dict(py, &d)
    }
}

#[pyclass(name = "DirichletCharacter", module = "multweyl", frozen)]
struct PyCharacter {
    inner: chars::DirichletCharacter,
}

#[pymethods]
impl PyCharacter {
    /// The index-th character mod k; index 0 is principal.
    #[new]
    #[pyo3(signature = (k, index = 0))]
    fn new(k: u64, index: u64) -> PyResult<Self> {
        let group = Arc::new(CharGroup::new(k).or_raise()?);
        if index >= group.phi() {
            return Err(PyValueError::new_err(format!(
                "index {index} >= phi({k}) = {}",
                group.phi()
            )));
        }
        Ok(PyCharacter {
            inner: group.character(index),
        })
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    #[getter]
    fn index(&self) -> u64 {
        self.inner.index()
    }

    #[getter]
    fn exponents(&self) -> Vec<u64> {
        self.inner.exponents().to_vec()
    }

    #[getter]
    fn is_principal(&self) -> bool {
        self.inner.is_principal()
    }

    fn conductor(&self) -> u64 {
        self.inner.conductor()
    }

    fn value(&self, n: u64) -> Complex64 {
        self.inner.value(n)
    }

    fn __call__(&self, n: u64) -> Complex64 {
        self.inner.value(n)
    }

    fn conj(&self) -> Self {
        PyCharacter {
            inner: self.inner.conj(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "DirichletCharacter(k={}, index={})",
            self.inner.modulus(),
            self.inner.index()
        )
    }
}

/// All φ(k) characters mod k.
#[pyfunction]
fn characters(k: u64) -> PyResult<Vec<PyCharacter>> {
    Ok(chars::enumerate_characters(k)
        .or_raise()?
        .into_iter()
        .map(|inner| PyCharacter { inner })
        .collect())
}

/// Σ_{n<=N} χ(n) e(F(n)).
#[pyfunction]
fn char_sum(py: Python<'_>, chi: &PyCharacter, phase: &PyPhase, n: u64) -> PyResult<Complex64> {
    py.detach(|| chars::mixed_char_sum(&chi.inner, &phase.inner, n))
        .or_raise()
}

/// Σ over a full period of χ(x) e(P(x)/q), P given by integer
/// coefficients, constant term first.
#[pyfunction]
fn twisted_sum<'py>(
    py: Python<'py>,
    chi: &PyCharacter,
    poly: Vec<i64>,
    q: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let t = chars::complete_twisted_sum(&chi.inner, &poly, q).or_raise()?;
    let d = PyDict::new(py);
    d.set_item("period", t.period)?;
    d.set_item("sum", t.sum)?;
    d.set_item("normalized", t.normalized)?;
    Ok(d.into_any())
}

/// Splits Σ f(n) e(F₁(n)) by residue classes and characters, with F₁ the
/// rational approximation of the phase.
#[pyfunction]
#[pyo3(signature = (values, phase, n, r = 1, a = 0.0))]
fn pretentious_decompose<'py>(
    py: Python<'py>,
    values: Vec<Complex64>,
    phase: &PyPhase,
    n: u64,
    r: u32,
    a: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let d = py
        .detach(|| chars::pretentious_decompose(&values, &phase.inner, n, r, a))
        .or_raise()?;
    to_dict(py, &d)
}

/// Largest |Σ_{n<=u} ψ(n) f(n)| over characters of modulus <= k_max.
#[pyfunction]
fn pretentious_witness<'py>(
    py: Python<'py>,
    values: Vec<Complex64>,
    n: u64,
    k_max: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let w = py
        .detach(|| chars::pretentious_witness(&values, n, k_max))
        .or_raise()?;
    to_dict(py, &w)
}

#[pymodule]
fn multweyl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add_class::<PySieve>()?;
    m.add_class::<PyPhase>()?;
    m.add_class::<PyPartition>()?;
    m.add_class::<PyIntPoly>()?;
    m.add_class::<PyRootTable>()?;
    m.add_class::<PyCharacter>()?;
    m.add_function(wrap_pyfunction!(py_dirichlet_approx, m)?)?;
    m.add_function(wrap_pyfunction!(py_classify_arc, m)?)?;
    m.add_function(wrap_pyfunction!(function_values, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_construct, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_sum, m)?)?;
    m.add_function(wrap_pyfunction!(log_weighted_sum, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbola_bilinear, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(jrd, m)?)?;
    m.add_function(wrap_pyfunction!(jrd_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(jrd_primes, m)?)?;
    m.add_function(wrap_pyfunction!(slope_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(characters, m)?)?;
    m.add_function(wrap_pyfunction!(char_sum, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_sum, m)?)?;
    m.add_function(wrap_pyfunction!(pretentious_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(pretentious_witness, m)?)?;
    Ok(())
}
