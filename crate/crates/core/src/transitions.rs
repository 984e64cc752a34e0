//! Isometries, the Clebsch–Gordan projection and the two transition
//! expectations of the AKLT HQMM.
//!
//! A transition expectation `B(H_A) ⊗ B(H_B) → B(H_A)` is stored in its
//! Stinespring form `E(X) = U†XU` with an isometry `U: H_A → H_A ⊗ H_B`; its
//! dual channel is `ρ ↦ UρU†`. The Kraus-index form is derived from the
//! blocks `U_k = (I ⊗ ⟨k|)U`:
//! `E(X ⊗ Y) = Σ_{k,k'} ⟨k|Y|k'⟩ U_k† X U_{k'}`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::channels::{choi_of_map, KrausChannel};
use crate::operators::{aklt_tensors, kron, sum_matrices, ComplexMatrix, ONE, ZERO};
use crate::{Error, Result};

/// Isometry tolerance `‖U†U − I‖_max`.
const ISOMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Isometry {
    matrix: ComplexMatrix,
}

impl Isometry {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let residual = (&matrix.dagger() * &matrix).max_abs_diff(&ComplexMatrix::identity(matrix.cols()));
        if residual > ISOMETRY_TOL {
            return Err(Error::DimensionMismatch(format!(
                "matrix is not an isometry (‖U†U − I‖ = {residual:e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_small(&self) -> usize {
        self.matrix.cols()
    }

    pub fn d_big(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.apply_vec(v)
    }

    /// `U·U†`, the projector onto the range.
    pub fn range_projector(&self) -> ComplexMatrix {
        &self.matrix * &self.matrix.dagger()
    }
}

#[derive(Debug, Clone)]
pub struct TransitionExpectation {
    stinespring: Isometry,
    d_a: usize,
    d_b: usize,
}

impl TransitionExpectation {
    pub fn new(stinespring: Isometry, d_a: usize, d_b: usize) -> Result<Self> {
        if stinespring.d_small() != d_a || stinespring.d_big() != d_a * d_b {
            return Err(Error::DimensionMismatch(format!(
                "isometry {}x{} does not map H_A (dim {d_a}) into H_A ⊗ H_B (dim {})",
                stinespring.d_big(),
                stinespring.d_small(),
                d_a * d_b
            )));
        }
        Ok(Self { stinespring, d_a, d_b })
    }

    pub fn stinespring(&self) -> &Isometry {
        &self.stinespring
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    /// `U† X U` on a joint `d_A·d_B` operator.
    pub fn apply(&self, x_joint: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.d_a * self.d_b;
        if x_joint.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "transition expectation input must be {d}x{d}, got {}x{}",
                x_joint.rows(),
                x_joint.cols()
            )));
        }
        let u = self.stinespring.matrix();
        Ok(&(&u.dagger() * x_joint) * u)
    }

    /// `E(X ⊗ Y)`.
    pub fn apply_product(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_factors(x, y)?;
        self.apply(&kron(x, y))
    }

    /// Dual channel `ρ ↦ UρU†`.
    pub fn dual(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_a, self.d_a) {
            return Err(Error::DimensionMismatch(format!(
                "dual input must be {0}x{0}, got {1}x{2}",
                self.d_a,
                rho.rows(),
                rho.cols()
            )));
        }
        Ok(self.stinespring.matrix().conjugate(rho))
    }

    pub fn dual_channel(&self) -> KrausChannel {
        KrausChannel::from_kraus(vec![self.stinespring.matrix().clone()]).expect("isometry is a valid Kraus family")
    }

    /// `U_k = (I ⊗ ⟨k|)U`, a `d_A × d_A` block.
    pub fn block(&self, k: usize) -> ComplexMatrix {
        let u = self.stinespring.matrix();
        ComplexMatrix::from_fn(self.d_a, self.d_a, |h, c| u.get(h * self.d_b + k, c))
    }

    pub fn blocks(&self) -> Vec<ComplexMatrix> {
        (0..self.d_b).map(|k| self.block(k)).collect()
    }

    /// Kraus-index evaluation `Σ ⟨k|Y|k'⟩ U_k† X U_{k'}`.
    pub fn apply_product_kraus(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_factors(x, y)?;
        let blocks = self.blocks();
        let mut out = ComplexMatrix::zeros(self.d_a, self.d_a);
        for (k, bk) in blocks.iter().enumerate() {
            let left = &bk.dagger() * x;
            for (kp, bkp) in blocks.iter().enumerate() {
                let w = y.get(k, kp);
                if w != ZERO {
                    out = &out + &(&left * bkp).scale(w);
                }
            }
        }
        Ok(out)
    }

    /// Kraus-index dual `Σ U_k Z U_{k'}† ⊗ |k⟩⟨k'|`.
    pub fn dual_kraus(&self, z: &ComplexMatrix) -> Result<ComplexMatrix> {
        if z.shape() != (self.d_a, self.d_a) {
            return Err(Error::DimensionMismatch("dual input has the wrong dimension".into()));
        }
        let blocks = self.blocks();
        let terms = blocks.iter().enumerate().flat_map(|(k, bk)| {
            let bz = bk * z;
            blocks
                .iter()
                .enumerate()
                .map(move |(kp, bkp)| kron(&(&bz * &bkp.dagger()), &ComplexMatrix::unit(self.d_b, k, kp)))
                .collect::<Vec<_>>()
        });
        Ok(sum_matrices(terms).expect("nonempty block family"))
    }

    pub fn unitality_residual(&self) -> f64 {
        let id = ComplexMatrix::identity(self.d_a * self.d_b);
        self.apply(&id).expect("square input").max_abs_diff(&ComplexMatrix::identity(self.d_a))
    }

    /// Choi matrix of the Heisenberg-picture map `B(H_A ⊗ H_B) → B(H_A)`.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        choi_of_map(self.d_a * self.d_b, self.d_a, |x| self.apply(x).expect("square input"))
    }

    fn check_factors(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<()> {
        if x.shape() != (self.d_a, self.d_a) || y.shape() != (self.d_b, self.d_b) {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0} and {1}x{1} factors, got {2}x{3} and {4}x{5}",
                self.d_a,
                self.d_b,
                x.rows(),
                x.cols(),
                y.rows(),
                y.cols()
            )));
        }
        Ok(())
    }
}

/// Singlet `|Ψ⁻⟩` and symmetric triplet `|Ψ⁺⟩` in the `(↑↑, ↑↓, ↓↑, ↓↓)` basis.
pub fn bell_states() -> ([Complex64; 4], [Complex64; 4]) {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    ([ZERO, s, -s, ZERO], [ZERO, s, s, ZERO])
}

/// Two-qubit swap.
pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (a, b) = (r / 2, r % 2);
        if c == b * 2 + a {
            ONE
        } else {
            ZERO
        }
    })
}

/// `V = |Ψ⁻⟩⟨↑| + |Ψ⁺⟩⟨↓|`.
pub fn v_isometry() -> Isometry {
    let (m, p) = bell_states();
    let v = ComplexMatrix::from_fn(4, 2, |r, c| if c == 0 { m[r] } else { p[r] });
    Isometry::new(v).expect("V is an isometry")
}

/// `Wξ = Σ_k A_k ξ ⊗ |k⟩`, hidden factor first.
pub fn w_isometry() -> Isometry {
    let a = aklt_tensors();
    let blocks = a.as_array();
    let w = ComplexMatrix::from_fn(6, 2, |r, c| blocks[r % 3].get(r / 3, c));
    Isometry::new(w).expect("W is an isometry")
}

/// `P = |+⟩⟨↑↑| + |−⟩⟨↓↓| + |0⟩(⟨↑↓| + ⟨↓↑|)/√2`, a 3×4 matrix.
pub fn projection_p() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, s, s, 0.0], &[0.0, 0.0, 0.0, 1.0]]).unwrap()
}

/// Projector onto the symmetric two-qubit subspace, `(I + SWAP)/2`.
pub fn symmetric_projector() -> ComplexMatrix {
    (&ComplexMatrix::identity(4) + &swap()).scale_real(0.5)
}

/// `E_H(X ⊗ X') = V†(X ⊗ X')V`.
pub fn hidden_expectation() -> TransitionExpectation {
    TransitionExpectation::new(v_isometry(), 2, 2).expect("V maps 2 → 2⊗2")
}

/// `E_{O,H}(X ⊗ Y) = W†(X ⊗ Y)W`.
pub fn emission_expectation() -> TransitionExpectation {
    TransitionExpectation::new(w_isometry(), 2, 3).expect("W maps 2 → 2⊗3")
}

pub fn e_h(x_joint: &ComplexMatrix) -> Result<ComplexMatrix> {
    hidden_expectation().apply(x_joint)
}

pub fn e_h_dual(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    hidden_expectation().dual(rho)
}

pub fn e_oh(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    emission_expectation().apply_product(x, y)
}

pub fn e_oh_dual(z: &ComplexMatrix) -> Result<ComplexMatrix> {
    emission_expectation().dual(z)
}
