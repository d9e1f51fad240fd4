//! Python module `skein`.
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use skein_core::annulus::{act_generator, ModuleVector};
use skein_core::coeff::{qbinom, qbrace, ScalarQ};
use skein_core::finite_rank as fr;
use skein_core::partitions::{hooks_contents_kappa, Partition};
use skein_core::quantum_cluster::{
    cvec_sequence_with, dmod_check, qt_pentagon_check, CSeed, Composition,
};
use skein_core::torus_skein::{normal_order, pentagon_check_form, PentagonForm};
use skein_core::wavefunction;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Exact scalar in s = q^{1/2}, a, a_L, g with quantum bracket denominators.
#[pyclass(name = "Scalar", module = "skein", frozen, eq)]
#[derive(Clone, PartialEq)]
struct PyScalar(ScalarQ);

#[pymethods]
impl PyScalar {
    #[new]
    #[pyo3(signature = (n = 0))]
    fn new(n: i64) -> Self {
        PyScalar(ScalarQ::from_int(n))
    }

    #[staticmethod]
    fn s(k: i32) -> Self {
        PyScalar(ScalarQ::s_pow(k))
    }

    #[staticmethod]
    fn q(k: i32) -> Self {
        PyScalar(ScalarQ::q_pow(k))
    }

    /// `{k} = s^k - s^-k`.
    #[staticmethod]
    fn brace(k: i32) -> Self {
        PyScalar(qbrace(k))
    }

    #[staticmethod]
    fn qbinom(d: i64, k: u32) -> Self {
        PyScalar(qbinom(d, k))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyScalar).map_err(value_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("scalar json")
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, o: &PyScalar) -> Self {
        PyScalar(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &PyScalar) -> Self {
        PyScalar(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &PyScalar) -> Self {
        PyScalar(&self.0 * &o.0)
    }

    fn __neg__(&self) -> Self {
        PyScalar(-self.0.clone())
    }

    fn __truediv__(&self, o: &PyScalar) -> PyResult<Self> {
        if o.0.is_zero() {
            return Err(PyZeroDivisionError::new_err("division by zero scalar"));
        }
        self.0.div(&o.0).map(PyScalar).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Scalar({})", self.0.to_text())
    }
}

fn module_rows(v: &ModuleVector) -> Vec<(Vec<u32>, PyScalar)> {
    v.iter()
        .map(|(p, c)| (p.parts().to_vec(), PyScalar(c.clone())))
        .collect()
}

fn partition(parts: Vec<u32>) -> PyResult<Partition> {
    Partition::new(parts).map_err(value_err)
}

/// Hook lengths, contents and kappa of a partition.
#[pyfunction]
fn hook_data(parts: Vec<u32>) -> PyResult<(Vec<u32>, Vec<i64>, i64)> {
    Ok(hooks_contents_kappa(&partition(parts)?))
}

#[pyfunction]
fn topological_vertex(parts: Vec<u32>, p: i64) -> PyResult<PyScalar> {
    Ok(PyScalar(wavefunction::topological_vertex(
        &partition(parts)?,
        p,
    )))
}

/// Coefficients of the framed vertex as `(partition, scalar)` pairs.
#[pyfunction]
fn wavefunction_framed(p: i64, max_boxes: u32) -> PyResult<Vec<(Vec<u32>, PyScalar)>> {
    wavefunction::wavefunction_framed(p, max_boxes)
        .map(|v| module_rows(&v))
        .map_err(value_err)
}

/// `P_(m,n)` applied to the basis vector `W_lambda`.
#[pyfunction]
fn act(m: i64, n: i64, parts: Vec<u32>) -> PyResult<Vec<(Vec<u32>, PyScalar)>> {
    let v = ModuleVector::basis(partition(parts)?);
    act_generator(m, n, &v)
        .map(|r| module_rows(&r))
        .map_err(value_err)
}

/// Normal-ordered form of a word of torus skein generators.
#[pyfunction]
fn normal_order_word(word: Vec<[i64; 2]>) -> PyResult<Vec<(Vec<[i64; 2]>, PyScalar)>> {
    let e = normal_order(&word, ScalarQ::one()).map_err(value_err)?;
    Ok(e.terms()
        .iter()
        .map(|(w, c)| (w.clone(), PyScalar(c.clone())))
        .collect())
}

/// Returns `(pass, first_fail)`; `form` is "standard", "reversed" or "swapped".
#[pyfunction]
#[pyo3(signature = (x, y, order, form = "standard"))]
fn pentagon(
    x: [i64; 2],
    y: [i64; 2],
    order: u32,
    form: &str,
) -> PyResult<(bool, Option<[u32; 2]>)> {
    let form = match form {
        "standard" => PentagonForm::Standard,
        "reversed" => PentagonForm::Reversed,
        "swapped" => PentagonForm::SwappedRhs,
        other => return Err(PyValueError::new_err(format!("unknown form {other}"))),
    };
    let r = pentagon_check_form(x, y, order, form).map_err(value_err)?;
    Ok((r.pass, r.first_fail))
}

/// Mutates the identity c-vectors along one-based `sequence` (rightmost first).
/// Returns `(sorted c-vectors, signs in application order)`.
#[pyfunction]
#[pyo3(signature = (b, sequence, frozen = Vec::new()))]
fn cvec_sequence(
    b: Vec<Vec<i64>>,
    sequence: Vec<usize>,
    frozen: Vec<usize>,
) -> PyResult<(Vec<Vec<i64>>, Vec<i64>)> {
    let seed = CSeed::new(b, frozen).map_err(value_err)?;
    let run = cvec_sequence_with(&seed, &sequence, Composition::RightToLeft).map_err(value_err)?;
    Ok((run.cvectors, run.signs))
}

/// Named boolean checks, the same ones the command line tool runs.
#[pyfunction]
#[pyo3(signature = (name, order = 4))]
fn check(name: &str, order: u32) -> PyResult<bool> {
    let r = match name {
        "canoe" => wavefunction::canoe_face_residual(order)
            .map(|v| v.is_zero())
            .map_err(value_err)?,
        "unknot" => wavefunction::unknot_residual(order)
            .map(|v| v.is_zero())
            .map_err(value_err)?,
        "inverse" => {
            (0..=2).all(|p| wavefunction::inverse_identity_check(p, order).unwrap_or(false))
        }
        "qt-pentagon" => qt_pentagon_check(order as i64).map_err(value_err)?,
        "dmod" => dmod_check(order as i64),
        "macdonald" => fr::macdonald_eigen_check(4, order).map_err(value_err)?,
        "charvar" => fr::charvar_relation_residual(order)
            .map_err(value_err)?
            .is_zero(),
        "whittaker" => {
            fr::whittaker_wavefunction_check(order)
                .map_err(value_err)?
                .pass
        }
        "uv-embedding" => fr::uv_embedding_check(order).map_err(value_err)?.pass,
        "uv-pentagon" => fr::uv_pentagon_check(order as i64).map_err(value_err)?,
        "cvec-pentagon" => {
            fr::cvec_pentagon_check(order as i64)
                .map_err(value_err)?
                .pass
        }
        other => return Err(PyValueError::new_err(format!("unknown check {other}"))),
    };
    Ok(r)
}

/// Runs the command line interface in-process; returns `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("skein".to_string()).chain(args);
    let code = skein_core::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
fn skein(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_function(wrap_pyfunction!(hook_data, m)?)?;
    m.add_function(wrap_pyfunction!(topological_vertex, m)?)?;
    m.add_function(wrap_pyfunction!(wavefunction_framed, m)?)?;
    m.add_function(wrap_pyfunction!(act, m)?)?;
    m.add_function(wrap_pyfunction!(normal_order_word, m)?)?;
    m.add_function(wrap_pyfunction!(pentagon, m)?)?;
    m.add_function(wrap_pyfunction!(cvec_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
