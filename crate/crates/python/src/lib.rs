//! Python bindings. Matrices cross the boundary as nested lists of complex
//! numbers (row-major); numpy arrays are accepted on input.

use std::collections::BTreeMap;

use aklt_hqmm::channels::{aklt_channel, KrausChannel};
use aklt_hqmm::hqmm::{outcome_string, parse_outcome_string, GenerativeTriplet, ObservableWord};
use aklt_hqmm::operators::{self, ComplexMatrix};
use aklt_hqmm::spt::{self, SymmetryElement};
use aklt_hqmm::{cli, oracle_mps, transitions, Complex64};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type PyMatrix = Vec<Vec<Complex64>>;

fn err(e: aklt_hqmm::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(m: PyMatrix) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&m).map_err(err)
}

fn to_matrices(ms: Vec<PyMatrix>) -> PyResult<Vec<ComplexMatrix>> {
    ms.into_iter().map(to_matrix).collect()
}

fn from_matrix(m: &ComplexMatrix) -> PyMatrix {
    m.to_rows()
}

fn element(axis: [f64; 3], angle: f64) -> PyResult<SymmetryElement> {
    SymmetryElement::new(axis, angle).map_err(err)
}

/// The AKLT generative triplet with a chosen initial hidden state.
#[pyclass(name = "Hqmm", module = "aklt_hqmm")]
struct PyHqmm {
    inner: GenerativeTriplet,
}

#[pymethods]
impl PyHqmm {
    /// `rho0` defaults to the maximally mixed state I/2.
    #[new]
    #[pyo3(signature = (rho0 = None))]
    fn new(rho0: Option<PyMatrix>) -> PyResult<Self> {
        let inner = match rho0 {
            Some(m) => GenerativeTriplet::aklt(to_matrix(m)?).map_err(err)?,
            None => GenerativeTriplet::aklt_stationary(),
        };
        Ok(Self { inner })
    }

    fn rho0(&self) -> PyMatrix {
        from_matrix(self.inner.rho0())
    }

    fn evaluate(&self, xs: Vec<PyMatrix>, ys: Vec<PyMatrix>) -> PyResult<Complex64> {
        let word = ObservableWord::new(to_matrices(xs)?, to_matrices(ys)?).map_err(err)?;
        self.inner.evaluate(&word).map_err(err)
    }

    fn evaluate_decomposed(&self, xs: Vec<PyMatrix>, ys: Vec<PyMatrix>) -> PyResult<Complex64> {
        let word = ObservableWord::new(to_matrices(xs)?, to_matrices(ys)?).map_err(err)?;
        self.inner.evaluate_decomposed(&word).map_err(err)
    }

    fn transition_map(&self, x: PyMatrix, y: PyMatrix, z: PyMatrix) -> PyResult<PyMatrix> {
        let out = self
            .inner
            .transition_map(&to_matrix(x)?, &to_matrix(y)?, &to_matrix(z)?)
            .map_err(err)?;
        Ok(from_matrix(&out))
    }

    fn coefficient_functional(&self, ks: Vec<usize>, kps: Vec<usize>, xs: Vec<PyMatrix>) -> PyResult<Complex64> {
        self.inner.coefficient_functional(&ks, &kps, &to_matrices(xs)?).map_err(err)
    }

    fn hidden_marginal(&self, xs: Vec<PyMatrix>) -> PyResult<Complex64> {
        self.inner.hidden_marginal(&to_matrices(xs)?).map_err(err)
    }

    /// Same marginal through the collapsed single-site recursion with Φ_AKLT.
    fn hidden_marginal_via_channel(&self, xs: Vec<PyMatrix>) -> PyResult<Complex64> {
        self.inner.hidden_marginal_via_channel(&aklt_channel(), &to_matrices(xs)?).map_err(err)
    }

    fn observation_marginal(&self, ys: Vec<PyMatrix>) -> PyResult<Complex64> {
        self.inner.observation_marginal(&to_matrices(ys)?).map_err(err)
    }

    /// Probability of an outcome string over `+`, `0`, `-`.
    fn string_probability(&self, outcomes: &str) -> PyResult<f64> {
        let ks = parse_outcome_string(outcomes).map_err(err)?;
        self.inner.string_probability(&ks).map_err(err)
    }

    fn string_distribution(&self, n: usize) -> PyResult<BTreeMap<String, f64>> {
        let dist = self.inner.string_distribution(n).map_err(err)?;
        Ok(dist.into_iter().map(|(s, p)| (outcome_string(&s), p)).collect())
    }

    fn conditional_probabilities(&self, prefix: &str) -> PyResult<Vec<f64>> {
        let ks = parse_outcome_string(prefix).map_err(err)?;
        self.inner.conditional_probabilities(&ks).map_err(err)
    }

    /// `(outcome string, probability)` of one sampled trajectory.
    fn sample(&self, n: usize, seed: u64) -> PyResult<(String, f64)> {
        let s = self.inner.sample_observations(n, seed).map_err(err)?;
        Ok((s.outcome_string(), s.probability))
    }

    /// Trajectory `i` uses seed `seed ^ i`; aborted trajectories raise.
    fn sample_batch(&self, n: usize, count: usize, seed: u64) -> PyResult<Vec<String>> {
        self.inner
            .sample_batch(n, count, seed)
            .into_iter()
            .map(|s| s.map(|s| s.outcome_string()).map_err(err))
            .collect()
    }
}

#[pyfunction]
fn aklt_tensors() -> Vec<PyMatrix> {
    operators::aklt_tensors().to_vec().iter().map(from_matrix).collect()
}

#[pyfunction]
fn spin1_operators() -> (PyMatrix, PyMatrix, PyMatrix) {
    let (x, y, z) = operators::spin1_operators();
    (from_matrix(&x), from_matrix(&y), from_matrix(&z))
}

#[pyfunction]
fn kron(a: PyMatrix, b: PyMatrix) -> PyResult<PyMatrix> {
    Ok(from_matrix(&operators::kron(&to_matrix(a)?, &to_matrix(b)?)))
}

#[pyfunction]
fn partial_trace(m: PyMatrix, dims: Vec<usize>, keep: Vec<usize>) -> PyResult<PyMatrix> {
    Ok(from_matrix(&operators::partial_trace(&to_matrix(m)?, &dims, &keep).map_err(err)?))
}

/// Entropy in bits.
#[pyfunction]
fn von_neumann_entropy(rho: PyMatrix) -> PyResult<f64> {
    operators::von_neumann_entropy(&to_matrix(rho)?).map_err(err)
}

#[pyfunction]
fn v_isometry() -> PyMatrix {
    from_matrix(transitions::v_isometry().matrix())
}

#[pyfunction]
fn w_isometry() -> PyMatrix {
    from_matrix(transitions::w_isometry().matrix())
}

#[pyfunction]
fn projection_p() -> PyMatrix {
    from_matrix(&transitions::projection_p())
}

#[pyfunction]
fn e_h(x: PyMatrix) -> PyResult<PyMatrix> {
    Ok(from_matrix(&transitions::e_h(&to_matrix(x)?).map_err(err)?))
}

#[pyfunction]
fn e_h_dual(rho: PyMatrix) -> PyResult<PyMatrix> {
    Ok(from_matrix(&transitions::e_h_dual(&to_matrix(rho)?).map_err(err)?))
}

#[pyfunction]
fn e_oh(x: PyMatrix, y: PyMatrix) -> PyResult<PyMatrix> {
    Ok(from_matrix(&transitions::e_oh(&to_matrix(x)?, &to_matrix(y)?).map_err(err)?))
}

#[pyfunction]
fn e_oh_dual(z: PyMatrix) -> PyResult<PyMatrix> {
    Ok(from_matrix(&transitions::e_oh_dual(&to_matrix(z)?).map_err(err)?))
}

/// Φ_AKLT(ρ) = Σ A_k ρ A_k†.
#[pyfunction]
fn aklt_channel_apply(rho: PyMatrix) -> PyResult<PyMatrix> {
    Ok(from_matrix(&aklt_channel().apply(&to_matrix(rho)?).map_err(err)?))
}

/// `(eigenvalues, spectral_gap, correlation_length)` of Σ K⊗conj(K).
/// Kraus operators default to the AKLT tensors.
#[pyfunction]
#[pyo3(signature = (kraus = None))]
fn transfer_spectrum(kraus: Option<Vec<PyMatrix>>) -> PyResult<(Vec<Complex64>, f64, f64)> {
    let channel = match kraus {
        Some(ks) => KrausChannel::from_kraus(to_matrices(ks)?).map_err(err)?,
        None => aklt_channel(),
    };
    let r = channel.transfer_spectrum().map_err(err)?;
    Ok((r.eigenvalues, r.spectral_gap, r.correlation_length))
}

/// `(energy, relative residual)` of the periodic n-site MPS.
#[pyfunction]
fn ground_energy_check(n: usize) -> PyResult<(f64, f64)> {
    let g = oracle_mps::ground_energy_check(n).map_err(err)?;
    Ok((g.energy, g.residual))
}

#[pyfunction]
fn mps_norm_sq(n: usize) -> PyResult<f64> {
    Ok(oracle_mps::build_state(n).map_err(err)?.norm_sq)
}

/// Connected correlator of `op` (default Sᶻ) on sites `i < j` (1-based).
#[pyfunction]
#[pyo3(signature = (n, i, j, op = None))]
fn correlation(n: usize, i: usize, j: usize, op: Option<PyMatrix>) -> PyResult<f64> {
    let op = match op {
        Some(m) => to_matrix(m)?,
        None => operators::spin1_operators().2,
    };
    oracle_mps::correlation(n, &op, i, j).map_err(err)
}

#[pyfunction]
fn block_entropy(n: usize, block_length: usize) -> PyResult<f64> {
    oracle_mps::block_entropy(n, block_length).map_err(err)
}

#[pyfunction]
fn check_covariance(axis: [f64; 3], angle: f64) -> PyResult<f64> {
    Ok(spt::check_covariance(&element(axis, angle)?))
}

#[pyfunction]
fn check_equivariance(axis: [f64; 3], angle: f64, x: PyMatrix, y: PyMatrix) -> PyResult<f64> {
    spt::check_equivariance(&element(axis, angle)?, &to_matrix(x)?, &to_matrix(y)?).map_err(err)
}

/// D₂ index fields as a dict: theta, eta_x, eta_y, eta_xy.
#[pyfunction]
fn d2_index() -> PyResult<BTreeMap<&'static str, f64>> {
    let r = spt::d2_index().map_err(err)?;
    Ok(BTreeMap::from([("theta", r.theta), ("eta_x", r.eta_x), ("eta_y", r.eta_y), ("eta_xy", r.eta_xy)]))
}

/// `[(check name, residual), ...]` from the CLI invariant suite.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn invariants(seed: u64) -> PyResult<Vec<(String, f64)>> {
    let checks = cli::invariant_checks(seed).map_err(err)?;
    Ok(checks.into_iter().map(|c| (c.name.to_string(), c.residual)).collect())
}

#[pymodule]
#[pyo3(name = "aklt_hqmm")]
fn aklt_hqmm_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHqmm>()?;
    m.add_function(wrap_pyfunction!(aklt_tensors, m)?)?;
    m.add_function(wrap_pyfunction!(spin1_operators, m)?)?;
    m.add_function(wrap_pyfunction!(kron, m)?)?;
    m.add_function(wrap_pyfunction!(partial_trace, m)?)?;
    m.add_function(wrap_pyfunction!(von_neumann_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(v_isometry, m)?)?;
    m.add_function(wrap_pyfunction!(w_isometry, m)?)?;
    m.add_function(wrap_pyfunction!(projection_p, m)?)?;
    m.add_function(wrap_pyfunction!(e_h, m)?)?;
    m.add_function(wrap_pyfunction!(e_h_dual, m)?)?;
    m.add_function(wrap_pyfunction!(e_oh, m)?)?;
    m.add_function(wrap_pyfunction!(e_oh_dual, m)?)?;
    m.add_function(wrap_pyfunction!(aklt_channel_apply, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(ground_energy_check, m)?)?;
    m.add_function(wrap_pyfunction!(mps_norm_sq, m)?)?;
    m.add_function(wrap_pyfunction!(correlation, m)?)?;
    m.add_function(wrap_pyfunction!(block_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(check_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(check_equivariance, m)?)?;
    m.add_function(wrap_pyfunction!(d2_index, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    Ok(())
}
