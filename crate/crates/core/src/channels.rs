//! Kraus-channel calculus.
//!
//! A [`KrausChannel`] is `ρ ↦ Σ K ρ K†`. Choi matrices live on
//! reference ⊗ output with the normalized `|Ω⟩ = d_in^{-1/2} Σ|i⟩|i⟩`, so a
//! trace-preserving channel has a unit-trace Choi state. Transfer matrices are
//! `Σ K ⊗ conj(K)` acting on row-major vectorized operators.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

use crate::operators::{aklt_tensors, kron, partial_trace, sum_matrices, von_neumann_entropy, ComplexMatrix};
use crate::{Error, Result, TOLERANCE};

#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>, d_in: usize, d_out: usize) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::DimensionMismatch("a channel needs at least one Kraus operator".into()));
        }
        if d_in == 0 || d_out == 0 {
            return Err(Error::DimensionMismatch("channel dimensions must be positive".into()));
        }
        if let Some((i, k)) = kraus.iter().enumerate().find(|(_, k)| k.shape() != (d_out, d_in)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator {i} is {}x{}, expected {d_out}x{d_in}",
                k.rows(),
                k.cols()
            )));
        }
        Ok(Self { kraus, d_in, d_out })
    }

    /// Infers dimensions from the first operator.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let (d_out, d_in) = kraus
            .first()
            .map(ComplexMatrix::shape)
            .ok_or_else(|| Error::DimensionMismatch("a channel needs at least one Kraus operator".into()))?;
        Self::new(kraus, d_in, d_out)
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)], dim, dim).expect("identity channel")
    }

    /// `ρ ↦ UρU†`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::from_kraus(vec![u])
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "channel input must be {0}x{0}, got {1}x{2}",
                self.d_in,
                rho.rows(),
                rho.cols()
            )));
        }
        Ok(sum_matrices(self.kraus.iter().map(|k| k.conjugate(rho))).expect("nonempty Kraus family"))
    }

    /// Heisenberg-picture adjoint `X ↦ Σ K† X K`.
    pub fn dual_apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.d_out, self.d_out) {
            return Err(Error::DimensionMismatch(format!(
                "dual channel input must be {0}x{0}, got {1}x{2}",
                self.d_out,
                x.rows(),
                x.cols()
            )));
        }
        Ok(sum_matrices(self.kraus.iter().map(|k| &(&k.dagger() * x) * k)).expect("nonempty Kraus family"))
    }

    /// The channel whose Kraus operators are the adjoints of these.
    pub fn adjoint_channel(&self) -> Self {
        Self {
            kraus: self.kraus.iter().map(ComplexMatrix::dagger).collect(),
            d_in: self.d_out,
            d_out: self.d_in,
        }
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> ComplexMatrix {
        sum_matrices(self.kraus.iter().map(|k| &k.dagger() * k)).expect("nonempty Kraus family")
    }

    pub fn choi_matrix(&self) -> ComplexMatrix {
        choi_of_map(self.d_in, self.d_out, |x| self.apply(x).expect("square input of size d_in"))
    }

    pub fn choi(&self) -> ChoiReport {
        ChoiReport::from_matrix(self.choi_matrix(), self.d_in, self.d_out)
    }

    pub fn is_cptp(&self) -> CptpReport {
        self.is_cptp_with(TOLERANCE)
    }

    pub fn is_cptp_with(&self, tol: f64) -> CptpReport {
        let min_choi_eigenvalue = min_eigenvalue(&self.choi_matrix());
        let trace_residual = self.completeness().max_abs_diff(&ComplexMatrix::identity(self.d_in));
        CptpReport {
            cptp: min_choi_eigenvalue >= -tol && trace_residual <= tol,
            min_choi_eigenvalue,
            trace_residual,
        }
    }

    /// `‖Φ(I) − I‖_max`; infinite when `d_in ≠ d_out`.
    pub fn unitality_residual(&self) -> f64 {
        if self.d_in != self.d_out {
            return f64::INFINITY;
        }
        let id = ComplexMatrix::identity(self.d_in);
        self.apply(&id).expect("square input").max_abs_diff(&id)
    }

    pub fn transfer_matrix(&self) -> ComplexMatrix {
        sum_matrices(self.kraus.iter().map(|k| kron(k, &k.conj()))).expect("nonempty Kraus family")
    }

    pub fn transfer_spectrum(&self) -> Result<SpectrumReport> {
        if self.d_in != self.d_out {
            return Err(Error::DimensionMismatch(format!(
                "transfer spectrum needs d_in = d_out, got {} and {}",
                self.d_in, self.d_out
            )));
        }
        let eigenvalues = self.transfer_matrix().eigenvalues()?;
        Ok(SpectrumReport::from_eigenvalues(eigenvalues))
    }

    /// Reconstructs a Kraus family from a Choi matrix on reference ⊗ output.
    pub fn from_choi(choi: &ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if choi.shape() != (d_in * d_out, d_in * d_out) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix must be {0}x{0}",
                d_in * d_out
            )));
        }
        let (values, vectors) = choi.hermitian_eigen()?;
        let kraus: Vec<ComplexMatrix> = values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 1e-14)
            .map(|(a, &l)| {
                let s = (l * d_in as f64).sqrt();
                ComplexMatrix::from_fn(d_out, d_in, |o, i| vectors.get(i * d_out + o, a) * s)
            })
            .collect();
        if kraus.is_empty() {
            return Err(Error::DimensionMismatch("Choi matrix has no positive spectrum".into()));
        }
        Self::new(kraus, d_in, d_out)
    }
}

/// `(id ⊗ Λ)(|Ω⟩⟨Ω|)` for any linear map `Λ` on `d_in × d_in` matrices.
pub fn choi_of_map(d_in: usize, d_out: usize, map: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let norm = 1.0 / d_in as f64;
    let mut blocks = Vec::with_capacity(d_in * d_in);
    for i in 0..d_in {
        for j in 0..d_in {
            blocks.push(map(&ComplexMatrix::unit(d_in, i, j)));
        }
    }
    ComplexMatrix::from_fn(d_in * d_out, d_in * d_out, |r, c| {
        let (i, o) = (r / d_out, r % d_out);
        let (j, p) = (c / d_out, c % d_out);
        blocks[i * d_in + j].get(o, p) * norm
    })
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    m.hermitian_eigenvalues()
        .ok()
        .and_then(|v| v.first().copied())
        .unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CptpReport {
    pub cptp: bool,
    pub min_choi_eigenvalue: f64,
    pub trace_residual: f64,
}

#[derive(Debug, Clone)]
pub struct ChoiReport {
    pub choi: ComplexMatrix,
    pub min_eigenvalue: f64,
    pub purity: f64,
    pub entropy_ref: f64,
    pub entropy_out: f64,
}

impl ChoiReport {
    /// Entropies are computed on the trace-normalized reduced states and are
    /// `NaN` when those are not valid density matrices.
    pub fn from_matrix(choi: ComplexMatrix, d_in: usize, d_out: usize) -> Self {
        let min_eigenvalue = min_eigenvalue(&choi);
        let purity = (&choi * &choi).trace().re;
        let tr = choi.trace().re;
        let reduced_entropy = |keep: usize| {
            if tr.abs() < 1e-300 {
                return f64::NAN;
            }
            partial_trace(&choi, &[d_in, d_out], &[keep])
                .and_then(|r| von_neumann_entropy(&r.scale_real(1.0 / tr)))
                .unwrap_or(f64::NAN)
        };
        let entropy_ref = reduced_entropy(0);
        let entropy_out = reduced_entropy(1);
        Self {
            choi,
            min_eigenvalue,
            purity,
            entropy_ref,
            entropy_out,
        }
    }
}

/// Transfer-matrix eigenvalues, sorted by descending magnitude, then real
/// part, then imaginary part.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub spectral_gap: f64,
    /// In lattice sites; `f64::INFINITY` when `|λ₂| = 1`.
    pub correlation_length: f64,
}

impl SpectrumReport {
    pub fn from_eigenvalues(mut eigenvalues: Vec<Complex64>) -> Self {
        eigenvalues.sort_by(descending_spectral_order);
        let mags: Vec<f64> = eigenvalues.iter().map(|z| z.norm()).collect();
        let (spectral_gap, correlation_length) = match mags.as_slice() {
            [] => (0.0, 0.0),
            [l1] => (*l1, 0.0),
            [l1, l2, ..] => {
                let xi = if *l2 >= 1.0 - TOLERANCE {
                    f64::INFINITY
                } else if *l2 == 0.0 {
                    0.0
                } else {
                    -1.0 / l2.ln()
                };
                (l1 - l2, xi)
            }
        };
        Self {
            eigenvalues,
            spectral_gap,
            correlation_length,
        }
    }

    pub fn leading_magnitude(&self) -> f64 {
        self.eigenvalues.first().map(|z| z.norm()).unwrap_or(0.0)
    }

    pub fn second(&self) -> Option<Complex64> {
        self.eigenvalues.get(1).copied()
    }
}

/// Magnitudes within `1e-12` are ties so that numerically degenerate
/// eigenvalues fall through to the real/imaginary keys.
fn descending_spectral_order(a: &Complex64, b: &Complex64) -> Ordering {
    const TIE: f64 = 1e-12;
    let (ma, mb) = (a.norm(), b.norm());
    if (ma - mb).abs() > TIE {
        return mb.total_cmp(&ma);
    }
    if (a.re - b.re).abs() > TIE {
        return b.re.total_cmp(&a.re);
    }
    b.im.total_cmp(&a.im)
}

/// `Φ_AKLT(Z) = Σ_k A_k Z A_k†`.
pub fn aklt_channel() -> KrausChannel {
    KrausChannel::new(aklt_tensors().to_vec(), 2, 2).expect("AKLT tensors are 2x2")
}
