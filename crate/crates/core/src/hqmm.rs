//! Finite-horizon hidden quantum Markov model.
//!
//! The state on `n` hidden/observed site pairs is
//! `φ(X ⊗ Y) = Tr(ρ₀ · E_{X₁,Y₁} ∘ ⋯ ∘ E_{Xₙ,Yₙ}(I))` with the transition map
//! `E_{X,Y}(Z) = E_H(E_{O,H}(X ⊗ Y) ⊗ Z)`. Sites are numbered `1..=n`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::channels::KrausChannel;
use crate::operators::{kron, partial_trace, ComplexMatrix, Physical, ONE, ZERO};
use crate::random;
use crate::transitions::{emission_expectation, hidden_expectation, TransitionExpectation};
use crate::{Error, Result};

/// Horizon guard for the `(d_obs²)ⁿ`-term decomposed evaluation.
pub const MAX_DECOMPOSED_HORIZON: usize = 8;
/// Horizon guard for exhaustive enumeration of outcome strings.
pub const MAX_ENUMERATION_HORIZON: usize = 10;
/// Prefix probabilities below this abort a sampled trajectory.
pub const PREFIX_GUARD: f64 = 1e-14;

const DENSITY_TOL: f64 = 1e-12;

/// `(φ₀, E_H, E_{O,H})` with `φ₀ = Tr(ρ₀ ·)`.
#[derive(Debug, Clone)]
pub struct GenerativeTriplet {
    rho0: ComplexMatrix,
    e_h: TransitionExpectation,
    e_oh: TransitionExpectation,
}

impl GenerativeTriplet {
    pub fn new(rho0: ComplexMatrix, e_h: TransitionExpectation, e_oh: TransitionExpectation) -> Result<Self> {
        let d = rho0.rows();
        if e_h.dims() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "hidden expectation must act on {d}⊗{d}, has dims {:?}",
                e_h.dims()
            )));
        }
        if e_oh.dims().0 != d {
            return Err(Error::DimensionMismatch(format!(
                "emission expectation hidden factor must be {d}, has dims {:?}",
                e_oh.dims()
            )));
        }
        validate_density(&rho0, DENSITY_TOL)?;
        Ok(Self { rho0, e_h, e_oh })
    }

    /// `Ξ_AKLT` with initial hidden density matrix `rho0`.
    pub fn aklt(rho0: ComplexMatrix) -> Result<Self> {
        Self::new(rho0, hidden_expectation(), emission_expectation())
    }

    /// `Ξ_AKLT` started in the maximally mixed state, the fixed point of `Φ_AKLT`.
    pub fn aklt_stationary() -> Self {
        Self::aklt(ComplexMatrix::identity(2).scale_real(0.5)).expect("I/2 is a density matrix")
    }

    pub fn rho0(&self) -> &ComplexMatrix {
        &self.rho0
    }

    pub fn e_h(&self) -> &TransitionExpectation {
        &self.e_h
    }

    pub fn e_oh(&self) -> &TransitionExpectation {
        &self.e_oh
    }

    pub fn hidden_dim(&self) -> usize {
        self.rho0.rows()
    }

    pub fn observed_dim(&self) -> usize {
        self.e_oh.dims().1
    }

    /// `E_{X,Y}(Z) = E_H(E_{O,H}(X ⊗ Y) ⊗ Z)`.
    pub fn transition_map(&self, x: &ComplexMatrix, y: &ComplexMatrix, z: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.hidden_dim();
        if z.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("Z must be {d}x{d}")));
        }
        let emitted = self.e_oh.apply_product(x, y)?;
        self.e_h.apply(&kron(&emitted, z))
    }

    /// Nested right-to-left evaluation of the HQMM state.
    pub fn evaluate(&self, word: &ObservableWord) -> Result<Complex64> {
        let mut z = ComplexMatrix::identity(self.hidden_dim());
        for (x, y) in word.hidden.iter().zip(&word.observed).rev() {
            z = self.transition_map(x, y, &z)?;
        }
        Ok(self.phi0(&z))
    }

    pub fn phi0(&self, z: &ComplexMatrix) -> Complex64 {
        (&self.rho0 * z).trace()
    }

    /// `φ₀(V†(B_{k₁}†X₁B_{k'₁} ⊗ V†(⋯ ⊗ V†(B_{kₙ}†XₙB_{k'ₙ} ⊗ I)V ⋯)V)`, with
    /// `B_k` the emission blocks (the AKLT tensors for `Ξ_AKLT`).
    pub fn coefficient_functional(&self, ks: &[usize], kps: &[usize], xs: &[ComplexMatrix]) -> Result<Complex64> {
        if ks.len() != kps.len() || ks.len() != xs.len() {
            return Err(Error::LengthMismatch(format!(
                "index lists and observables must have equal length ({}, {}, {})",
                ks.len(),
                kps.len(),
                xs.len()
            )));
        }
        let m = self.observed_dim();
        if let Some(&bad) = ks.iter().chain(kps).find(|&&k| k >= m) {
            return Err(Error::IndexOutOfRange(format!("physical index {bad} ≥ {m}")));
        }
        let d = self.hidden_dim();
        let blocks = self.e_oh.blocks();
        let v = self.e_h.stinespring().matrix();
        let vd = v.dagger();
        let mut z = ComplexMatrix::identity(d);
        for ((&k, &kp), x) in ks.iter().zip(kps).zip(xs).rev() {
            if x.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!("hidden observable must be {d}x{d}")));
            }
            let local = &(&blocks[k].dagger() * x) * &blocks[kp];
            z = &(&vd * &kron(&local, &z)) * v;
        }
        Ok(self.phi0(&z))
    }

    /// `Σ_{k,k'} Πₗ ⟨kₗ|Yₗ|k'ₗ⟩ · φ_{k,k'}(X)`, summed term by term.
    pub fn evaluate_decomposed(&self, word: &ObservableWord) -> Result<Complex64> {
        let n = word.len();
        if n > MAX_DECOMPOSED_HORIZON {
            return Err(Error::GuardExceeded(format!(
                "decomposed evaluation is limited to n ≤ {MAX_DECOMPOSED_HORIZON}, got {n}"
            )));
        }
        let m = self.observed_dim();
        for y in &word.observed {
            if y.shape() != (m, m) {
                return Err(Error::DimensionMismatch(format!("observed observable must be {m}x{m}")));
            }
        }
        let pairs = m * m;
        let mut ks = vec![0usize; n];
        let mut kps = vec![0usize; n];
        let mut total = ZERO;
        for code in 0..pairs.pow(n as u32) {
            let mut rem = code;
            let mut weight = ONE;
            for l in (0..n).rev() {
                let p = rem % pairs;
                rem /= pairs;
                ks[l] = p / m;
                kps[l] = p % m;
                weight *= word.observed[l].get(ks[l], kps[l]);
            }
            if weight == ZERO {
                continue;
            }
            total += weight * self.coefficient_functional(&ks, &kps, &word.hidden)?;
        }
        Ok(total)
    }

    /// `φ_H(X) = φ(X ⊗ I^{⊗n})`.
    pub fn hidden_marginal(&self, xs: &[ComplexMatrix]) -> Result<Complex64> {
        self.evaluate(&ObservableWord::hidden_only(xs.to_vec(), self.observed_dim())?)
    }

    /// Markov recursion `Z ← E_H(Φ(Xₗ) ⊗ Z)` for a single-site channel `Φ`.
    /// For `Ξ_AKLT` the diagonal collapse of the emission gives `Φ = Φ_AKLT`.
    pub fn hidden_marginal_via_channel(&self, channel: &KrausChannel, xs: &[ComplexMatrix]) -> Result<Complex64> {
        if xs.is_empty() {
            return Err(Error::LengthMismatch("hidden word must be nonempty".into()));
        }
        let mut z = ComplexMatrix::identity(self.hidden_dim());
        for x in xs.iter().rev() {
            let local = channel.apply(x)?;
            z = self.e_h.apply_product(&local, &z)?;
        }
        Ok(self.phi0(&z))
    }

    /// `φ_O(Y) = φ(I^{⊗n} ⊗ Y)`.
    pub fn observation_marginal(&self, ys: &[ComplexMatrix]) -> Result<Complex64> {
        self.evaluate(&ObservableWord::observed_only(ys.to_vec(), self.hidden_dim())?)
    }

    /// Probability of an outcome string (physical basis indices), evaluated
    /// as `φ_O` of the projector string.
    pub fn string_probability(&self, outcomes: &[usize]) -> Result<f64> {
        let m = self.observed_dim();
        if let Some(&bad) = outcomes.iter().find(|&&k| k >= m) {
            return Err(Error::IndexOutOfRange(format!("outcome {bad} ≥ {m}")));
        }
        let ys: Vec<ComplexMatrix> = outcomes.iter().map(|&k| ComplexMatrix::projector(m, k)).collect();
        Ok(self.observation_marginal(&ys)?.re)
    }

    /// Every outcome string of length `n` with its probability, in
    /// lexicographic `(+, 0, −)` order.
    pub fn string_distribution(&self, n: usize) -> Result<Vec<(Vec<usize>, f64)>> {
        if n == 0 || n > MAX_ENUMERATION_HORIZON {
            return Err(Error::GuardExceeded(format!(
                "enumeration needs 1 ≤ n ≤ {MAX_ENUMERATION_HORIZON}, got {n}"
            )));
        }
        let m = self.observed_dim();
        let mut out = Vec::with_capacity(m.pow(n as u32));
        // Forward filtering shares prefixes; each leaf equals string_probability.
        let mut stack = vec![(Vec::<usize>::new(), self.rho0.clone())];
        while let Some((prefix, state)) = stack.pop() {
            if prefix.len() == n {
                out.push((prefix, state.trace().re));
                continue;
            }
            for k in (0..m).rev() {
                let next = self.filter_step(&state, k)?;
                let mut p = prefix.clone();
                p.push(k);
                stack.push((p, next));
            }
        }
        Ok(out)
    }

    /// Unnormalized hidden state after emitting outcome `k` from `state`:
    /// `Tr₁[(M_k ⊗ I)·UσU†]` with `M_k = E_{O,H}(I ⊗ |k⟩⟨k|)` and `U` the
    /// hidden isometry. Its trace is the joint probability of the prefix.
    pub fn filter_step(&self, state: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
        let d = self.hidden_dim();
        let m = self.observed_dim();
        if k >= m {
            return Err(Error::IndexOutOfRange(format!("outcome {k} ≥ {m}")));
        }
        let effect = self.e_oh.apply_product(&ComplexMatrix::identity(d), &ComplexMatrix::projector(m, k))?;
        let joint = self.e_h.dual(state)?;
        let weighted = &kron(&effect, &ComplexMatrix::identity(d)) * &joint;
        partial_trace(&weighted, &[d, d], &[1])
    }

    /// Conditional distribution of the next outcome given an observed prefix.
    pub fn conditional_probabilities(&self, prefix: &[usize]) -> Result<Vec<f64>> {
        let mut state = self.rho0.clone();
        for (step, &k) in prefix.iter().enumerate() {
            state = self.filter_step(&state, k)?;
            let p = state.trace().re;
            if p < PREFIX_GUARD {
                return Err(Error::VanishingPrefix { step: step + 1, probability: p });
            }
        }
        let norm = state.trace().re;
        (0..self.observed_dim())
            .map(|k| Ok(self.filter_step(&state, k)?.trace().re / norm))
            .collect()
    }

    /// Sequential Born-rule sampling of an outcome string.
    pub fn sample_observations(&self, n: usize, seed: u64) -> Result<TrajectorySample> {
        if n == 0 {
            return Err(Error::LengthMismatch("horizon must be at least 1".into()));
        }
        let mut rng = random::rng(seed);
        let m = self.observed_dim();
        let mut state = self.rho0.clone();
        let mut prefix_probability = state.trace().re;
        let mut outcomes = Vec::with_capacity(n);
        for step in 1..=n {
            let candidates: Vec<ComplexMatrix> =
                (0..m).map(|k| self.filter_step(&state, k)).collect::<Result<_>>()?;
            let weights: Vec<f64> = candidates.iter().map(|c| c.trace().re.max(0.0)).collect();
            let total: f64 = weights.iter().sum();
            if total < PREFIX_GUARD {
                return Err(Error::VanishingPrefix { step, probability: total });
            }
            let u: f64 = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = m - 1;
            for (k, w) in weights.iter().enumerate() {
                acc += w;
                if u < acc {
                    pick = k;
                    break;
                }
            }
            // Renormalize so the carried state keeps unit trace.
            let p = weights[pick];
            if p < PREFIX_GUARD {
                return Err(Error::VanishingPrefix { step, probability: p });
            }
            prefix_probability *= p / total;
            state = candidates[pick].scale_real(1.0 / p);
            outcomes.push(pick);
        }
        Ok(TrajectorySample {
            outcomes,
            probability: prefix_probability.clamp(0.0, 1.0),
            seed,
        })
    }

    /// `count` trajectories; trajectory `i` uses seed `seed ^ i`.
    pub fn sample_batch(&self, n: usize, count: usize, seed: u64) -> Vec<Result<TrajectorySample>> {
        (0..count as u64).map(|i| self.sample_observations(n, seed ^ i)).collect()
    }
}

pub fn validate_density(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::InvalidDensity("density matrix must be square".into()));
    }
    let herm = rho.hermiticity_residual();
    if herm > tol {
        return Err(Error::InvalidDensity(format!("not Hermitian (residual {herm:e})")));
    }
    let tr = rho.trace();
    if (tr - ONE).norm() > tol {
        return Err(Error::InvalidDensity(format!("trace {} + {}i is not 1", tr.re, tr.im)));
    }
    let min = rho.hermitian_eigenvalues()?.first().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// `X₁ ⊗ Y₁ ⊗ ⋯ ⊗ Xₙ ⊗ Yₙ`.
#[derive(Debug, Clone)]
pub struct ObservableWord {
    pub hidden: Vec<ComplexMatrix>,
    pub observed: Vec<ComplexMatrix>,
}

impl ObservableWord {
    pub fn new(hidden: Vec<ComplexMatrix>, observed: Vec<ComplexMatrix>) -> Result<Self> {
        if hidden.is_empty() || hidden.len() != observed.len() {
            return Err(Error::LengthMismatch(format!(
                "hidden and observed lists must be nonempty and equal in length ({} vs {})",
                hidden.len(),
                observed.len()
            )));
        }
        Ok(Self { hidden, observed })
    }

    pub fn hidden_only(hidden: Vec<ComplexMatrix>, observed_dim: usize) -> Result<Self> {
        let observed = vec![ComplexMatrix::identity(observed_dim); hidden.len()];
        Self::new(hidden, observed)
    }

    pub fn observed_only(observed: Vec<ComplexMatrix>, hidden_dim: usize) -> Result<Self> {
        let hidden = vec![ComplexMatrix::identity(hidden_dim); observed.len()];
        Self::new(hidden, observed)
    }

    pub fn identity(n: usize, hidden_dim: usize, observed_dim: usize) -> Result<Self> {
        Self::new(
            vec![ComplexMatrix::identity(hidden_dim); n],
            vec![ComplexMatrix::identity(observed_dim); n],
        )
    }

    pub fn len(&self) -> usize {
        self.hidden.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hidden.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub outcomes: Vec<usize>,
    pub probability: f64,
    pub seed: u64,
}

impl TrajectorySample {
    /// Outcome string over `{+, 0, -}`; digits for non-spin-1 observation spaces.
    pub fn outcome_string(&self) -> String {
        outcome_string(&self.outcomes)
    }
}

pub fn outcome_string(outcomes: &[usize]) -> String {
    outcomes
        .iter()
        .map(|&k| {
            Physical::from_index(k)
                .map(Physical::symbol)
                .unwrap_or_else(|| char::from_digit(k as u32, 36).unwrap_or('?'))
        })
        .collect()
}

pub fn parse_outcome_string(s: &str) -> Result<Vec<usize>> {
    s.chars()
        .map(|c| {
            Physical::from_symbol(c)
                .map(Physical::index)
                .ok_or_else(|| Error::Parse(format!("unknown outcome symbol {c:?}")))
        })
        .collect()
}
