//! Rotation symmetry of the AKLT tensors and the D₂ projective index.
//!
//! `π(g) = exp(−iθ n·σ/2)` acts on the virtual spin-1/2, `ρ(g) = exp(−iθ n·S)`
//! on the physical spin-1 with the spin matrices of
//! [`spin1_operators`](crate::operators::spin1_operators).

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::operators::{aklt_tensors, kron, pauli_x, pauli_y, pauli_z, spin1_operators, ComplexMatrix, I};
use crate::random;
use crate::transitions::{e_oh, e_oh_dual};
use crate::{Error, Result, TOLERANCE};

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum D2Label {
    E,
    Gx,
    Gy,
    Gz,
}

impl D2Label {
    pub const ALL: [D2Label; 4] = [D2Label::E, D2Label::Gx, D2Label::Gy, D2Label::Gz];

    /// Klein four-group product.
    pub fn compose(self, other: Self) -> Self {
        use D2Label::*;
        match (self, other) {
            (E, g) | (g, E) => g,
            (a, b) if a == b => E,
            (Gx, Gy) | (Gy, Gx) => Gz,
            (Gy, Gz) | (Gz, Gy) => Gx,
            _ => Gy,
        }
    }

    /// Section representative `π(e) = I`, `π(g_a) = −iσ_a`.
    pub fn section(self) -> ComplexMatrix {
        match self {
            D2Label::E => ComplexMatrix::identity(2),
            D2Label::Gx => pauli_x().scale(-I),
            D2Label::Gy => pauli_y().scale(-I),
            D2Label::Gz => pauli_z().scale(-I),
        }
    }
}

/// Rotation by `angle` about the unit vector `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryElement {
    pub axis: [f64; 3],
    pub angle: f64,
    pub label: Option<D2Label>,
}

impl SymmetryElement {
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::Representation(format!("axis norm {norm} is not 1")));
        }
        Ok(Self { axis, angle, label: None })
    }

    pub fn identity() -> Self {
        Self { axis: [0.0, 0.0, 1.0], angle: 0.0, label: Some(D2Label::E) }
    }

    pub fn d2(label: D2Label) -> Self {
        let pi = std::f64::consts::PI;
        let (axis, angle) = match label {
            D2Label::E => ([0.0, 0.0, 1.0], 0.0),
            D2Label::Gx => ([1.0, 0.0, 0.0], pi),
            D2Label::Gy => ([0.0, 1.0, 0.0], pi),
            D2Label::Gz => ([0.0, 0.0, 1.0], pi),
        };
        Self { axis, angle, label: Some(label) }
    }

    /// Uniform random axis, angle uniform in `[0, 2π)`.
    pub fn random(rng: &mut impl Rng) -> Self {
        let axis = random::unit_vector(rng);
        let angle = rng.random::<f64>() * std::f64::consts::TAU;
        Self { axis, angle, label: None }
    }
}

#[derive(Debug, Clone)]
pub struct RepresentationPair {
    pub pi_g: ComplexMatrix,
    pub rho_g: ComplexMatrix,
}

/// `exp(−i t H)` for Hermitian `H`.
fn unitary_exp(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let (values, vectors) = h.hermitian_eigen().expect("generator is Hermitian");
    let phases: Vec<Complex64> = values.iter().map(|&l| Complex64::from_polar(1.0, -t * l)).collect();
    &(&vectors * &ComplexMatrix::from_diagonal(&phases)) * &vectors.dagger()
}

fn axis_dot(axis: [f64; 3], ops: [&ComplexMatrix; 3]) -> ComplexMatrix {
    let terms = ops.iter().zip(axis).map(|(op, a)| op.scale_real(a));
    terms.reduce(|acc, t| &acc + &t).expect("three components")
}

pub fn rep_pair(g: &SymmetryElement) -> RepresentationPair {
    let (c, s) = ((g.angle / 2.0).cos(), (g.angle / 2.0).sin());
    let n_sigma = axis_dot(g.axis, [&pauli_x(), &pauli_y(), &pauli_z()]);
    let pi_g = &ComplexMatrix::identity(2).scale_real(c) + &n_sigma.scale(-I * s);
    let (sx, sy, sz) = spin1_operators();
    let rho_g = unitary_exp(&axis_dot(g.axis, [&sx, &sy, &sz]), g.angle);
    RepresentationPair { pi_g, rho_g }
}

/// Reading of the physical matrix elements in the covariance relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixElementConvention {
    /// `ρ(g)_{kk'} = ⟨k|ρ(g)|k'⟩`.
    Direct,
    /// `ρ(g)_{kk'} = ⟨k'|ρ(g)|k⟩`.
    Transposed,
}

/// `max_k ‖Σ_{k'} ρ(g)_{kk'} A_{k'} − π(g)A_kπ(g)†‖_max`.
pub fn check_covariance_with(g: &SymmetryElement, convention: MatrixElementConvention) -> f64 {
    let RepresentationPair { pi_g, rho_g } = rep_pair(g);
    let tensors = aklt_tensors().to_vec();
    (0..3)
        .map(|k| {
            let lhs = (0..3)
                .map(|kp| {
                    let coeff = match convention {
                        MatrixElementConvention::Direct => rho_g.get(k, kp),
                        MatrixElementConvention::Transposed => rho_g.get(kp, k),
                    };
                    tensors[kp].scale(coeff)
                })
                .reduce(|a, b| &a + &b)
                .expect("three tensors");
            lhs.max_abs_diff(&pi_g.conjugate(&tensors[k]))
        })
        .fold(0.0, f64::max)
}

/// Covariance residual under the audited (transposed) convention.
pub fn check_covariance(g: &SymmetryElement) -> f64 {
    check_covariance_with(g, MatrixElementConvention::Transposed)
}

/// `‖E_{O,H}(πXπ† ⊗ ρ̄Yρ̄†) − πE_{O,H}(X⊗Y)π†‖_max`, with `ρ̄ = conj(ρ(g))`
/// the physical action under which `W` intertwines.
pub fn check_equivariance(g: &SymmetryElement, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64> {
    let RepresentationPair { pi_g, rho_g } = rep_pair(g);
    let rho_bar = rho_g.conj();
    let lhs = e_oh(&pi_g.conjugate(x), &rho_bar.conjugate(y))?;
    let rhs = pi_g.conjugate(&e_oh(x, y)?);
    Ok(lhs.max_abs_diff(&rhs))
}

/// `‖E*_{O,H}(πσπ†) − (π⊗ρ̄)E*_{O,H}(σ)(π⊗ρ̄)†‖_max`.
pub fn check_dual_covariance(g: &SymmetryElement, sigma: &ComplexMatrix) -> Result<f64> {
    crate::hqmm::validate_density(sigma, TOLERANCE)?;
    let RepresentationPair { pi_g, rho_g } = rep_pair(g);
    let joint = kron(&pi_g, &rho_g.conj());
    let lhs = e_oh_dual(&pi_g.conjugate(sigma))?;
    let rhs = joint.conjugate(&e_oh_dual(sigma)?);
    Ok(lhs.max_abs_diff(&rhs))
}

/// Scalar `c` with `m ≈ c·I`, or an error naming the deviation.
fn scalar_of(m: &ComplexMatrix, what: &str) -> Result<Complex64> {
    let d = m.rows();
    let c = m.trace() / d as f64;
    let dev = m.max_abs_diff(&ComplexMatrix::identity(d).scale(c));
    if dev > TOLERANCE {
        return Err(Error::Representation(format!("{what} is not a multiple of the identity (deviation {dev:e})")));
    }
    Ok(c)
}

/// Snap a value within tolerance of ±1 to exactly ±1.
fn snap_sign(x: f64) -> f64 {
    if (x - 1.0).abs() <= TOLERANCE {
        1.0
    } else if (x + 1.0).abs() <= TOLERANCE {
        -1.0
    } else {
        x
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SptIndexReport {
    pub theta: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub eta_xy: f64,
    #[serde(skip)]
    pub commutator_matrix: ComplexMatrix,
}

/// D₂ index from `U_x = π(g_x)`, `U_y = π(g_y)` given by [`rep_pair`].
pub fn d2_index() -> Result<SptIndexReport> {
    let ux = rep_pair(&SymmetryElement::d2(D2Label::Gx)).pi_g;
    let uy = rep_pair(&SymmetryElement::d2(D2Label::Gy)).pi_g;
    d2_index_from(&ux, &uy)
}

pub fn d2_index_from(ux: &ComplexMatrix, uy: &ComplexMatrix) -> Result<SptIndexReport> {
    let commutator_matrix = &(&(ux * uy) * &ux.dagger()) * &uy.dagger();
    let theta_c = commutator_matrix.trace() / ux.rows() as f64;
    scalar_of(&commutator_matrix, "U_x U_y U_x† U_y†")?;
    let eta_x = scalar_of(&(ux * ux), "U_x²")?;
    let eta_y = scalar_of(&(uy * uy), "U_y²")?;
    let theta = snap_sign(theta_c.re);
    Ok(SptIndexReport {
        theta,
        eta_x: snap_sign(eta_x.re),
        eta_y: snap_sign(eta_y.re),
        eta_xy: theta,
        commutator_matrix,
    })
}

/// `ω(g₁,g₂)` with `π(g₁)π(g₂) = ω π(g₁g₂)` in the `−iσ_a` section.
pub fn cocycle_phase(g1: D2Label, g2: D2Label) -> Result<Complex64> {
    let product = &g1.section() * &g2.section();
    let target = g1.compose(g2).section();
    let omega = target.hs_inner(&product) / 2.0;
    let dev = product.max_abs_diff(&target.scale(omega));
    if dev > TOLERANCE || (omega.norm() - 1.0).abs() > TOLERANCE {
        return Err(Error::Representation(format!("π({g1:?})π({g2:?}) not proportional to π({:?})", g1.compose(g2))));
    }
    Ok(omega)
}

/// Gauge-invariant ratio `ω(g_x,g_y)/ω(g_y,g_x)`.
pub fn cocycle_ratio() -> Result<Complex64> {
    Ok(cocycle_phase(D2Label::Gx, D2Label::Gy)? / cocycle_phase(D2Label::Gy, D2Label::Gx)?)
}

pub fn covariance_sweep(trials: usize, seed: u64) -> f64 {
    let mut rng = random::rng(seed);
    (0..trials)
        .map(|_| check_covariance(&SymmetryElement::random(&mut rng)))
        .fold(0.0, f64::max)
}

pub fn equivariance_sweep(trials: usize, seed: u64) -> Result<f64> {
    let mut rng = random::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let g = SymmetryElement::random(&mut rng);
        let x = random::ginibre(&mut rng, 2, 2);
        let y = random::ginibre(&mut rng, 3, 3);
        worst = worst.max(check_equivariance(&g, &x, &y)?);
    }
    Ok(worst)
}

pub fn dual_covariance_sweep(trials: usize, seed: u64) -> Result<f64> {
    let mut rng = random::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let g = SymmetryElement::random(&mut rng);
        let sigma = random::density(&mut rng, 2);
        worst = worst.max(check_dual_covariance(&g, &sigma)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct SptSweepReport {
    pub theta: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub eta_xy: f64,
    pub cocycle_ratio: f64,
    pub max_covariance_residual: f64,
    pub max_equivariance_residual: f64,
    pub max_dual_covariance_residual: f64,
    pub trials: usize,
    pub seed: u64,
}

pub fn spt_report(trials: usize, seed: u64) -> Result<SptSweepReport> {
    let index = d2_index()?;
    let ratio = cocycle_ratio()?;
    Ok(SptSweepReport {
        theta: index.theta,
        eta_x: index.eta_x,
        eta_y: index.eta_y,
        eta_xy: index.eta_xy,
        cocycle_ratio: snap_sign(ratio.re),
        max_covariance_residual: covariance_sweep(trials, seed),
        max_equivariance_residual: equivariance_sweep(trials, seed.wrapping_add(1))?,
        max_dual_covariance_residual: dual_covariance_sweep(trials, seed.wrapping_add(2))?,
        trials,
        seed,
    })
}

/// `e^{iφ}` with `φ` uniform in `[0, 2π)`.
pub fn random_phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    u.is_square() && (&u.dagger() * u).approx_eq(&ComplexMatrix::identity(u.rows()), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::ONE;
    use std::f64::consts::PI;

    #[test]
    fn rep_pair_examples() {
        let full = SymmetryElement::new([0.0, 0.0, 1.0], 2.0 * PI).unwrap();
        let r = rep_pair(&full);
        assert!(r.rho_g.approx_eq(&ComplexMatrix::identity(3), 1e-12));
        assert!(r.pi_g.approx_eq(&ComplexMatrix::identity(2).scale_real(-1.0), 1e-12));
        let half = rep_pair(&SymmetryElement::d2(D2Label::Gz));
        let expected = ComplexMatrix::from_diagonal(&[-I, I]);
        assert!(half.pi_g.approx_eq(&expected, 1e-15));
        let mut rng = random::rng(5);
        for _ in 0..10 {
            let p = rep_pair(&SymmetryElement::random(&mut rng));
            assert!(is_unitary(&p.pi_g, 1e-12) && is_unitary(&p.rho_g, 1e-12));
        }
        assert!(SymmetryElement::new([1.0, 1.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn rho_matches_closed_form_about_z() {
        let t = 0.7;
        let r = rep_pair(&SymmetryElement::new([0.0, 0.0, 1.0], t).unwrap()).rho_g;
        let expected = ComplexMatrix::from_diagonal(&[
            Complex64::from_polar(1.0, -t),
            ONE,
            Complex64::from_polar(1.0, t),
        ]);
        assert!(r.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn covariance_generators() {
        assert_eq!(check_covariance(&SymmetryElement::identity()), 0.0);
        for l in [D2Label::Gx, D2Label::Gy, D2Label::Gz] {
            assert!(check_covariance(&SymmetryElement::d2(l)) < 1e-10, "{l:?}");
        }
        assert!(covariance_sweep(100, 7) < 1e-10);
    }

    #[test]
    fn direct_convention_fails_the_audit() {
        let g = SymmetryElement::new([0.0, 1.0, 0.0], 0.9).unwrap();
        assert!(check_covariance_with(&g, MatrixElementConvention::Direct) > 1e-3);
    }

    #[test]
    fn equivariance() {
        let mut rng = random::rng(8);
        let x = random::ginibre(&mut rng, 2, 2);
        let y = random::ginibre(&mut rng, 3, 3);
        assert_eq!(check_equivariance(&SymmetryElement::identity(), &x, &y).unwrap(), 0.0);
        assert!(equivariance_sweep(50, 9).unwrap() < 1e-10);
        let g = SymmetryElement::random(&mut rng);
        let c = Complex64::new(2.0, -1.0);
        let r1 = check_equivariance(&g, &x, &y).unwrap();
        let r2 = check_equivariance(&g, &x.scale(c), &y).unwrap();
        assert!(r2 <= c.norm() * r1 + 1e-14);
    }

    #[test]
    fn dual_covariance() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert_eq!(check_dual_covariance(&SymmetryElement::identity(), &half).unwrap(), 0.0);
        assert!(dual_covariance_sweep(20, 10).unwrap() < 1e-10);
        assert!(check_dual_covariance(&SymmetryElement::identity(), &ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn index_and_cocycles() {
        let r = d2_index().unwrap();
        assert_eq!(r.theta, -1.0);
        assert_eq!(r.eta_xy, -1.0);
        assert!(r.commutator_matrix.approx_eq(&ComplexMatrix::identity(2).scale_real(-1.0), 1e-10));
        assert_eq!((r.eta_x, r.eta_y), (-1.0, -1.0));
        for g in D2Label::ALL {
            assert!((cocycle_phase(D2Label::E, g).unwrap() - ONE).norm() < 1e-15);
        }
        assert!((cocycle_ratio().unwrap() + ONE).norm() < 1e-15);
        assert!((cocycle_phase(D2Label::Gx, D2Label::Gx).unwrap() + ONE).norm() < 1e-15);
    }

    #[test]
    fn theta_is_gauge_invariant() {
        let mut rng = random::rng(11);
        let ux = rep_pair(&SymmetryElement::d2(D2Label::Gx)).pi_g;
        let uy = rep_pair(&SymmetryElement::d2(D2Label::Gy)).pi_g;
        for _ in 0..10 {
            let r = d2_index_from(&ux.scale(random_phase(&mut rng)), &uy.scale(random_phase(&mut rng))).unwrap();
            assert_eq!(r.theta, -1.0);
        }
    }

    #[test]
    fn linear_representation_has_trivial_index() {
        let ux = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        let uy = ComplexMatrix::from_real_diagonal(&[-1.0, 1.0]);
        assert_eq!(d2_index_from(&ux, &uy).unwrap().theta, 1.0);
    }

    #[test]
    fn d2_table() {
        use D2Label::*;
        assert_eq!(Gx.compose(Gy), Gz);
        assert_eq!(Gz.compose(Gx), Gy);
        assert_eq!(Gy.compose(Gy), E);
    }
}
