//! Python module `lmg`: thin wrappers over `lmg_core`.
//!
//! Spins are passed as numbers (`2`, `1.5`) or strings (`"3/2"`). Matrices
//! come back as lists of rows.

use lmg_core as core;
use lmg_core::{Frame, GapMethod, LmgError, RealMatrix, SpinJ, Verdict};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: LmgError) -> PyErr {
    match e {
        LmgError::NotIntegerSpin { .. }
        | LmgError::InvalidParameter(_)
        | LmgError::DegenerateAnisotropy { .. }
        | LmgError::DimensionTooLarge { .. }
        | LmgError::MethodUnavailable(_)
        | LmgError::OverflowRisk { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn spin(j: &Bound<'_, PyAny>) -> PyResult<SpinJ> {
    if let Ok(s) = j.extract::<String>() {
        return s.parse().map_err(to_py);
    }
    let x: f64 = j.extract()?;
    SpinJ::from_f64(x).map_err(to_py)
}

type Rows = Vec<Vec<f64>>;

fn rows(m: &RealMatrix) -> Rows {
    m.to_rows()
}

fn py_bool(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::SusyPattern => "SusyPattern",
        Verdict::SusyBroken => "SusyBroken",
    }
}

#[pyclass(name = "GapResult", frozen, get_all)]
struct PyGapResult {
    gap: f64,
    bound: f64,
    satisfied: bool,
}

#[pymethods]
impl PyGapResult {
    fn __repr__(&self) -> String {
        format!(
            "GapResult(gap={:?}, bound={:?}, satisfied={})",
            self.gap,
            self.bound,
            py_bool(self.satisfied)
        )
    }
}

#[pyclass(name = "SpectrumReport", frozen, get_all)]
struct PySpectrumReport {
    eigenvalues: Vec<f64>,
    /// Value of the zero mode, or `None`.
    zero_mode: Option<f64>,
    zero_mode_index: Option<usize>,
    /// `(lo, hi, split)` per doublet.
    doublets: Vec<(f64, f64, f64)>,
    unpaired: Vec<f64>,
    pair_ids: Vec<Option<usize>>,
    all_paired: bool,
    verdict: &'static str,
}

#[pymethods]
impl PySpectrumReport {
    fn __repr__(&self) -> String {
        format!(
            "SpectrumReport(verdict={}, levels={}, doublets={})",
            self.verdict,
            self.eigenvalues.len(),
            self.doublets.len()
        )
    }
}

impl From<core::SpectrumReport> for PySpectrumReport {
    fn from(r: core::SpectrumReport) -> Self {
        Self {
            zero_mode_index: r.zero_mode_index(),
            pair_ids: r.pair_ids(),
            zero_mode: r.zero_mode.map(|z| z.value),
            doublets: r.doublets.iter().map(|d| (d.lo, d.hi, d.split)).collect(),
            eigenvalues: r.eigenvalues,
            unpaired: r.unpaired,
            all_paired: r.all_paired,
            verdict: verdict_name(r.verdict),
        }
    }
}

#[pyclass(name = "SuperalgebraResiduals", frozen, get_all)]
struct PyResiduals {
    q1_square: f64,
    q2_square: f64,
    anticommutator: f64,
    commutator: f64,
    h_norm: f64,
    passes: bool,
}

#[pymethods]
impl PyResiduals {
    fn __repr__(&self) -> String {
        format!(
            "SuperalgebraResiduals(q1_square={:?}, q2_square={:?}, anticommutator={:?}, commutator={:?}, passes={})",
            self.q1_square,
            self.q2_square,
            self.anticommutator,
            self.commutator,
            py_bool(self.passes)
        )
    }
}

#[pyclass(name = "FactorizationCheck", frozen, get_all)]
struct PyFactorization {
    /// Coefficients of `det(λ − H_n)`, constant term first.
    lhs: Vec<f64>,
    rhs: Vec<f64>,
    coefficient_residual: f64,
    mirror_exact: bool,
    blocks_equal: bool,
}

#[pyclass(name = "GroundState", frozen, get_all)]
struct PyGroundState {
    j: f64,
    gamma: f64,
    frame: &'static str,
    m_values: Vec<f64>,
    amplitudes: Vec<f64>,
    norm_direct: f64,
    norm_legendre: f64,
    norm_ratio: f64,
    energy_residual: f64,
    h_norm: f64,
}

#[pymethods]
impl PyGroundState {
    fn __repr__(&self) -> String {
        format!(
            "GroundState(j={}, gamma={:?}, frame={}, norm_ratio={:?}, energy_residual={:?})",
            self.j, self.gamma, self.frame, self.norm_ratio, self.energy_residual
        )
    }
}

/// Hamiltonian at the supersymmetric point in the `J_z` basis, ascending `m`.
/// `form` is `"rotated"`, `"factorized"` or `"nonhermitian"`.
#[pyfunction]
#[pyo3(signature = (j, gamma, form = "rotated"))]
fn hamiltonian(j: &Bound<'_, PyAny>, gamma: f64, form: &str) -> PyResult<Vec<Vec<f64>>> {
    let j = spin(j)?;
    let h = match form {
        "rotated" => core::build_susy_rotated(j, gamma),
        "factorized" => core::build_factorized(j, gamma),
        "nonhermitian" => core::build_nonhermitian(j, gamma),
        other => return Err(PyValueError::new_err(format!("unknown form {other:?}"))),
    };
    Ok(rows(&h))
}

/// `ξ(χ₁²J_z² + χ₂²J_y² + λχ₁χ₂J_x)`.
#[pyfunction]
fn general_hamiltonian(
    j: &Bound<'_, PyAny>,
    xi: f64,
    chi1: f64,
    chi2: f64,
    lam: f64,
) -> PyResult<Vec<Vec<f64>>> {
    let p = core::ModelParams::new(xi, chi1, chi2, lam).map_err(to_py)?;
    Ok(rows(&core::build_lmg_general(spin(j)?, &p)))
}

/// Levels of the supersymmetric Hamiltonian, ascending.
#[pyfunction]
fn eigenvalues(j: &Bound<'_, PyAny>, gamma: f64) -> PyResult<Vec<f64>> {
    core::susy_spectrum(spin(j)?, gamma).map_err(to_py)
}

/// Levels of any real symmetric matrix, ascending (Jacobi).
#[pyfunction]
fn eigenvalues_dense(matrix: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let m = RealMatrix::from_rows(&matrix).map_err(to_py)?;
    core::eig_dense_symmetric(&m).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (eigenvalues, j, tol = core::DEFAULT_PAIRING_TOL))]
fn classify(eigenvalues: Vec<f64>, j: &Bound<'_, PyAny>, tol: f64) -> PyResult<PySpectrumReport> {
    Ok(core::classify_spectrum(&eigenvalues, spin(j)?, tol)
        .map_err(to_py)?
        .into())
}

/// [`eigenvalues`] followed by [`classify`].
#[pyfunction]
#[pyo3(signature = (j, gamma, tol = core::DEFAULT_PAIRING_TOL))]
fn spectrum(j: &Bound<'_, PyAny>, gamma: f64, tol: f64) -> PyResult<PySpectrumReport> {
    let j = spin(j)?;
    let e = core::susy_spectrum(j, gamma).map_err(to_py)?;
    Ok(core::classify_spectrum(&e, j, tol).map_err(to_py)?.into())
}

/// `method` is `"tridiagonal"` (any integer J) or `"dense"` (J ≤ 200).
#[pyfunction]
#[pyo3(signature = (j, gamma, method = "tridiagonal"))]
fn spectral_gap(j: &Bound<'_, PyAny>, gamma: f64, method: &str) -> PyResult<PyGapResult> {
    let method = match method {
        "tridiagonal" => GapMethod::TridiagOdd,
        "dense" => GapMethod::DenseOracle,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let r = core::spectral_gap(spin(j)?, gamma, method).map_err(to_py)?;
    Ok(PyGapResult {
        gap: r.gap,
        bound: r.bound,
        satisfied: r.satisfied,
    })
}

/// `Ω₀² cosh 2γ`.
#[pyfunction]
#[pyo3(signature = (gamma, omega0 = 1.0))]
fn gap_bound(gamma: f64, omega0: f64) -> f64 {
    core::gap_bound(gamma, omega0)
}

/// `(Q₁, Q₂/i)` in the parity-sorted basis, even sector first.
#[pyfunction]
fn supercharges(j: &Bound<'_, PyAny>, gamma: f64) -> PyResult<(Rows, Rows)> {
    let s = core::build_supercharges(spin(j)?, gamma).map_err(to_py)?;
    Ok((rows(&s.q1), rows(&s.r2)))
}

#[pyfunction]
fn superalgebra(j: &Bound<'_, PyAny>, gamma: f64) -> PyResult<PyResiduals> {
    let j = spin(j)?;
    let s = core::build_supercharges(j, gamma).map_err(to_py)?;
    let (h, _) = core::sorted_hamiltonian(j, gamma);
    let r = core::verify_superalgebra(&s, &h).map_err(to_py)?;
    Ok(PyResiduals {
        q1_square: r.q1_square,
        q2_square: r.q2_square,
        anticommutator: r.anticommutator,
        commutator: r.commutator,
        h_norm: r.h_norm,
        passes: r.passes(),
    })
}

#[pyfunction]
fn determinant_factorization(j: &Bound<'_, PyAny>, gamma: f64) -> PyResult<PyFactorization> {
    let f = core::determinant_factorization(spin(j)?, gamma).map_err(to_py)?;
    Ok(PyFactorization {
        lhs: f.lhs.coeffs,
        rhs: f.rhs.coeffs,
        coefficient_residual: f.coefficient_residual,
        mirror_exact: f.mirror_exact,
        blocks_equal: f.blocks_equal,
    })
}

/// `frame` is `"factorized"` or `"rotated"`.
#[pyfunction]
#[pyo3(signature = (j, gamma, frame = "factorized"))]
fn ground_state(j: &Bound<'_, PyAny>, gamma: f64, frame: &str) -> PyResult<PyGroundState> {
    let (frame, name) = match frame {
        "factorized" => (Frame::Factorized, "factorized"),
        "rotated" => (Frame::Rotated, "rotated"),
        other => return Err(PyValueError::new_err(format!("unknown frame {other:?}"))),
    };
    let gs = core::ground_state_in(spin(j)?, gamma, frame).map_err(to_py)?;
    Ok(PyGroundState {
        j: gs.j.j(),
        gamma: gs.gamma,
        frame: name,
        m_values: gs.m_values(),
        norm_ratio: gs.norm_ratio(),
        amplitudes: gs.amplitudes,
        norm_direct: gs.norm_direct,
        norm_legendre: gs.norm_legendre,
        energy_residual: gs.energy_residual,
        h_norm: gs.h_norm,
    })
}

#[pyfunction]
fn legendre_p(n: u32, x: f64) -> f64 {
    core::legendre_p(n, x)
}

#[pymodule]
fn lmg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGapResult>()?;
    m.add_class::<PySpectrumReport>()?;
    m.add_class::<PyResiduals>()?;
    m.add_class::<PyFactorization>()?;
    m.add_class::<PyGroundState>()?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(general_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues_dense, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_gap, m)?)?;
    m.add_function(wrap_pyfunction!(gap_bound, m)?)?;
    m.add_function(wrap_pyfunction!(supercharges, m)?)?;
    m.add_function(wrap_pyfunction!(superalgebra, m)?)?;
    m.add_function(wrap_pyfunction!(determinant_factorization, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(legendre_p, m)?)?;
    m.add("DEFAULT_PAIRING_TOL", core::DEFAULT_PAIRING_TOL)?;
    Ok(())
}
