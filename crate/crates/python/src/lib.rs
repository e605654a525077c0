//! Python bindings for the `kbvz` crate, exposed as the `pykbvz` module.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use kbvz::genfunc::Moments;
use kbvz::minimality::verify_layer_minimality;
use kbvz::representation::{evaluate_vector, integer_to_sr_f_inverse, project_sn, sr_to_integer_f};
use kbvz::scalar_greedy::greedy_decompose;
use kbvz::solver::{j_bound, solve};
use kbvz::spectral::SpectralData;
use kbvz::statistics::{gap_histogram, layer_stats};
use kbvz::{BoundStrategy, Error, IndexSet, KBonacciContext, Solver, VecZ};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::JBoundTooSmall { .. }
        | Error::NormalizationDiverged { .. }
        | Error::ConvergenceFailure(_)
        | Error::ReconstructionMismatch { .. }
        | Error::StrategyMismatch { .. }
        | Error::MultipleFound { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

/// A k-bonacci order with cached sequences.
#[pyclass(name = "KBonacci", module = "pykbvz")]
struct PyKBonacci {
    ctx: KBonacciContext,
}

#[pymethods]
impl PyKBonacci {
    #[new]
    fn new(k: usize) -> PyResult<Self> {
        Ok(PyKBonacci { ctx: KBonacciContext::new(k).map_err(to_py)? })
    }

    #[getter]
    fn k(&self) -> usize {
        self.ctx.k()
    }

    /// The scalar `x_n`.
    fn x(&self, n: i64) -> PyResult<BigInt> {
        self.ctx.x(n).map_err(to_py)
    }

    /// The vector `X_{-depth}`.
    fn vector(&self, depth: i64) -> PyResult<Vec<BigInt>> {
        Ok(self.ctx.vector(depth).map_err(to_py)?.into_entries())
    }

    /// Indices of the satisfying representation of `v`, ascending.
    #[pyo3(signature = (v, strategy = "small", brute_max_index = 20))]
    fn decompose(&self, v: Vec<BigInt>, strategy: &str, brute_max_index: usize) -> PyResult<Vec<usize>> {
        let solver: Solver = parse(strategy)?;
        let s = solve(&self.ctx, &VecZ::new(v), solver, brute_max_index).map_err(to_py)?;
        Ok(s.indices().to_vec())
    }

    /// `sum X_{-i}` over `indices`.
    fn evaluate(&self, indices: Vec<usize>) -> PyResult<Vec<BigInt>> {
        let s = IndexSet::new(indices).map_err(to_py)?;
        Ok(evaluate_vector(&self.ctx, &s).map_err(to_py)?.into_entries())
    }

    #[pyo3(signature = (v, strategy = "small"))]
    fn j_bound(&self, v: Vec<BigInt>, strategy: &str) -> PyResult<usize> {
        let strategy: BoundStrategy = parse(strategy)?;
        Ok(j_bound(&self.ctx, &VecZ::new(v), strategy).map_err(to_py)?.value)
    }

    /// `S_n(v)`.
    fn project(&self, v: Vec<BigInt>, n: i64) -> PyResult<BigInt> {
        project_sn(&self.ctx, &VecZ::new(v), n).map_err(to_py)
    }

    /// Scalar greedy indices of `m`, ascending.
    fn greedy(&self, m: BigInt) -> PyResult<Vec<usize>> {
        Ok(greedy_decompose(&self.ctx, &m).map_err(to_py)?.indices().to_vec())
    }

    /// The bijection from satisfying sets to nonnegative integers.
    fn rank(&self, indices: Vec<usize>) -> PyResult<BigInt> {
        let s = IndexSet::new(indices).map_err(to_py)?;
        sr_to_integer_f(&self.ctx, &s).map_err(to_py)
    }

    fn unrank(&self, m: BigInt) -> PyResult<Vec<usize>> {
        Ok(integer_to_sr_f_inverse(&self.ctx, &m).map_err(to_py)?.indices().to_vec())
    }

    /// Mean, variance and shape of the summand count on layer `n`.
    fn layer_stats<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
        let s = layer_stats(&self.ctx, n).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("n", s.n)?;
        d.set_item("count", s.count)?;
        d.set_item("mean", s.mean_f64())?;
        d.set_item("mean_exact", s.mean.to_string())?;
        d.set_item("variance", s.variance_f64())?;
        d.set_item("variance_exact", s.variance.to_string())?;
        d.set_item("skewness", s.skewness)?;
        d.set_item("excess_kurtosis", s.excess_kurtosis)?;
        d.set_item("histogram", s.kappa_histogram.clone())?;
        Ok(d)
    }

    /// Gap counts `[c_0, ..., c_{n-1}]` over layer `n`.
    fn gap_counts(&self, n: usize) -> PyResult<Vec<u64>> {
        Ok(gap_histogram(&self.ctx, n).map_err(to_py)?.counts)
    }

    /// Exact means `mu_1..mu_{n_max}` from the generating functions, as strings.
    fn exact_means(&self, n_max: usize) -> PyResult<Vec<String>> {
        let m = Moments::compute(self.ctx.k(), n_max).map_err(to_py)?;
        Ok(m.means().iter().skip(1).map(ToString::to_string).collect())
    }

    fn spectral<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = SpectralData::compute(&self.ctx).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("lambda1", s.lambda1)?;
        d.set_item("a1", s.a1)?;
        d.set_item("c_lek", s.c_lek)?;
        d.set_item("roots", s.all_roots.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>())?;
        Ok(d)
    }

    /// Number of vectors in `D_layer` with a representation shorter than the SR.
    fn minimality_counterexamples(&self, layer: usize, max_index: usize) -> PyResult<usize> {
        Ok(verify_layer_minimality(&self.ctx, layer, max_index).map_err(to_py)?.counterexamples.len())
    }

    fn __repr__(&self) -> String {
        format!("KBonacci(k={})", self.ctx.k())
    }
}

#[pymodule]
fn pykbvz(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKBonacci>()?;
    Ok(())
}
