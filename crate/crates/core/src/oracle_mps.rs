//! Brute-force periodic AKLT chain: explicit state vector, Hamiltonian,
//! correlators and block entropies.
//!
//! Only the raw tensors and spin matrices from [`crate::operators`] are used
//! here, so every number is independent of the HQMM evaluation paths.
//! Site `s ∈ 1..=n` is the `s`-th tensor factor (site 1 most significant).

use num_complex::Complex64;
use serde::Serialize;

use crate::operators::{aklt_tensors, kron, spin1_operators, von_neumann_entropy, ComplexMatrix, ZERO};
use crate::{Error, Result};

pub const MAX_STATE_SITES: usize = 10;
pub const MAX_HAMILTONIAN_SITES: usize = 8;
/// Largest `n` for which [`HamiltonianMatrix::to_dense`] is allowed.
pub const MAX_DENSE_SITES: usize = 6;

const LOCAL_DIM: usize = 3;

fn check_sites(n: usize, max: usize, what: &str) -> Result<()> {
    if !(2..=max).contains(&n) {
        return Err(Error::GuardExceeded(format!("{what} needs 2 ≤ n ≤ {max}, got {n}")));
    }
    Ok(())
}

/// Unnormalized `Σ Tr(A_{k₁}⋯A_{kₙ}) |k₁⋯kₙ⟩`.
#[derive(Debug, Clone)]
pub struct MpsStateVector {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
    pub norm_sq: f64,
}

impl MpsStateVector {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn normalized(&self) -> Vec<Complex64> {
        let s = self.norm_sq.sqrt();
        self.amplitudes.iter().map(|a| a / s).collect()
    }

    pub fn amplitude(&self, ks: &[usize]) -> Result<Complex64> {
        if ks.len() != self.n || ks.iter().any(|&k| k >= LOCAL_DIM) {
            return Err(Error::IndexOutOfRange(format!("string {ks:?} is not a length-{} spin-1 string", self.n)));
        }
        Ok(self.amplitudes[ks.iter().fold(0, |acc, &k| acc * LOCAL_DIM + k)])
    }
}

pub fn build_state(n: usize) -> Result<MpsStateVector> {
    check_sites(n, MAX_STATE_SITES, "state vector")?;
    let tensors = aklt_tensors().to_vec();
    // Left-to-right products over all prefixes, one depth at a time.
    let mut prefixes = vec![ComplexMatrix::identity(2)];
    for _ in 0..n {
        prefixes = prefixes
            .iter()
            .flat_map(|p| tensors.iter().map(move |a| p * a))
            .collect();
    }
    let amplitudes: Vec<Complex64> = prefixes.iter().map(|m| m.trace()).collect();
    let norm_sq = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    Ok(MpsStateVector { n, amplitudes, norm_sq })
}

/// `1 + 3(−1/3)ⁿ`.
pub fn norm_sq_closed_form(n: usize) -> f64 {
    1.0 + 3.0 * (-1.0f64 / 3.0).powi(n as i32)
}

/// `S·S + (S·S)²/3` on two spin-1 sites.
pub fn bond_term() -> ComplexMatrix {
    let (sx, sy, sz) = spin1_operators();
    let ss = &(&kron(&sx, &sx) + &kron(&sy, &sy)) + &kron(&sz, &sz);
    &ss + &(&ss * &ss).scale_real(1.0 / 3.0)
}

/// Sparse Hamiltonian in row-sorted coordinate form.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub n: usize,
    pub periodic: bool,
    pub dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl HamiltonianMatrix {
    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!("vector length {} ≠ {}", v.len(), self.dim)));
        }
        let mut out = vec![ZERO; self.dim];
        for &(r, c, h) in &self.entries {
            out[r] += h * v[c];
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        if self.n > MAX_DENSE_SITES {
            return Err(Error::GuardExceeded(format!(
                "dense Hamiltonian limited to n ≤ {MAX_DENSE_SITES}, got {}",
                self.n
            )));
        }
        let mut data = vec![ZERO; self.dim * self.dim];
        for &(r, c, h) in &self.entries {
            data[r * self.dim + c] += h;
        }
        ComplexMatrix::new(self.dim, self.dim, data)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let lookup: std::collections::HashMap<(usize, usize), Complex64> =
            self.entries.iter().map(|&(r, c, h)| ((r, c), h)).collect();
        lookup
            .iter()
            .map(|(&(r, c), h)| (h - lookup.get(&(c, r)).copied().unwrap_or(ZERO).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `‖[H, Σᵢ Sᶻᵢ]‖_max`; the total `Sᶻ` is diagonal so this is
    /// `max |H_rc (m_c − m_r)|`.
    pub fn sz_commutator_residual(&self) -> f64 {
        let m = |idx: usize| -> f64 {
            let mut idx = idx;
            let mut total = 0.0;
            for _ in 0..self.n {
                total += 1.0 - (idx % LOCAL_DIM) as f64;
                idx /= LOCAL_DIM;
            }
            total
        };
        self.entries
            .iter()
            .map(|&(r, c, h)| (h * (m(c) - m(r))).norm())
            .fold(0.0, f64::max)
    }
}

/// Nearest-neighbour bonds; periodic chains have `n` bonds, including both
/// orientations of the pair at `n = 2`.
pub fn bonds(n: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut b: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if periodic {
        b.push((n - 1, 0));
    }
    b
}

pub fn build_hamiltonian(n: usize, periodic: bool) -> Result<HamiltonianMatrix> {
    check_sites(n, MAX_HAMILTONIAN_SITES, "Hamiltonian")?;
    let h2 = bond_term();
    let dim = LOCAL_DIM.pow(n as u32);
    let mut acc: std::collections::BTreeMap<(usize, usize), Complex64> = Default::default();
    let digit = |idx: usize, s: usize| (idx / LOCAL_DIM.pow((n - 1 - s) as u32)) % LOCAL_DIM;
    for (i, j) in bonds(n, periodic) {
        let (wi, wj) = (LOCAL_DIM.pow((n - 1 - i) as u32), LOCAL_DIM.pow((n - 1 - j) as u32));
        for col in 0..dim {
            let (ci, cj) = (digit(col, i), digit(col, j));
            let base = col - ci * wi - cj * wj;
            for ri in 0..LOCAL_DIM {
                for rj in 0..LOCAL_DIM {
                    let h = h2.get(ri * LOCAL_DIM + rj, ci * LOCAL_DIM + cj);
                    if h.norm() > 1e-15 {
                        *acc.entry((base + ri * wi + rj * wj, col)).or_insert(ZERO) += h;
                    }
                }
            }
        }
    }
    let entries = acc.into_iter().filter(|(_, h)| h.norm() > 1e-15).map(|((r, c), h)| (r, c, h)).collect();
    Ok(HamiltonianMatrix { n, periodic, dim, entries })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroundEnergyCheck {
    pub n: usize,
    pub energy: f64,
    pub residual: f64,
}

/// Rayleigh quotient of the periodic MPS and the relative eigen-residual.
pub fn ground_energy_check(n: usize) -> Result<GroundEnergyCheck> {
    check_sites(n, MAX_HAMILTONIAN_SITES, "ground energy check")?;
    let psi = build_state(n)?;
    let h = build_hamiltonian(n, true)?;
    let hpsi = h.apply(&psi.amplitudes)?;
    let energy = inner(&psi.amplitudes, &hpsi).re / psi.norm_sq;
    let residual = hpsi
        .iter()
        .zip(&psi.amplitudes)
        .map(|(a, b)| (a - b * energy).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / psi.norm_sq.sqrt();
    Ok(GroundEnergyCheck { n, energy, residual })
}

fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `op` acting on site `site` (1-based) of an `n`-site vector.
fn apply_local(op: &ComplexMatrix, site: usize, n: usize, v: &[Complex64]) -> Vec<Complex64> {
    let stride = LOCAL_DIM.pow((n - site) as u32);
    let mut out = vec![ZERO; v.len()];
    for (idx, o) in out.iter_mut().enumerate() {
        let k = (idx / stride) % LOCAL_DIM;
        let base = idx - k * stride;
        *o = (0..LOCAL_DIM).map(|kp| op.get(k, kp) * v[base + kp * stride]).sum();
    }
    out
}

/// Expectation of a product of single-site operators in the normalized state.
pub fn expectation(state: &MpsStateVector, ops: &[(usize, &ComplexMatrix)]) -> Result<Complex64> {
    let mut v = state.amplitudes.clone();
    for &(site, op) in ops {
        if site == 0 || site > state.n {
            return Err(Error::IndexOutOfRange(format!("site {site} outside 1..={}", state.n)));
        }
        if op.shape() != (LOCAL_DIM, LOCAL_DIM) {
            return Err(Error::DimensionMismatch("site operator must be 3x3".into()));
        }
        v = apply_local(op, site, state.n, &v);
    }
    Ok(inner(&state.amplitudes, &v) / state.norm_sq)
}

/// Connected correlator `⟨opᵢ opⱼ⟩ − ⟨opᵢ⟩⟨opⱼ⟩` (real part).
pub fn correlation(n: usize, op: &ComplexMatrix, i: usize, j: usize) -> Result<f64> {
    let state = build_state(n)?;
    correlation_in(&state, op, i, j)
}

pub fn correlation_in(state: &MpsStateVector, op: &ComplexMatrix, i: usize, j: usize) -> Result<f64> {
    if !(1 <= i && i < j && j <= state.n) {
        return Err(Error::IndexOutOfRange(format!("need 1 ≤ i < j ≤ {}, got ({i}, {j})", state.n)));
    }
    let both = expectation(state, &[(j, op), (i, op)])?;
    let a = expectation(state, &[(i, op)])?;
    let b = expectation(state, &[(j, op)])?;
    Ok((both - a * b).re)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorrelatorRow {
    pub separation: usize,
    pub correlator: f64,
    pub magnitude: f64,
}

/// `⟨Sᶻ₁ Sᶻ₁₊ᵣ⟩_c` for `r = 1..=n/2`.
pub fn sz_correlator_table(n: usize) -> Result<Vec<CorrelatorRow>> {
    let state = build_state(n)?;
    let (_, _, sz) = spin1_operators();
    (1..=n / 2)
        .map(|r| {
            let c = correlation_in(&state, &sz, 1, 1 + r)?;
            Ok(CorrelatorRow { separation: r, correlator: c, magnitude: c.abs() })
        })
        .collect()
}

/// Entropy in bits of sites `1..=block_length` of the normalized state.
pub fn block_entropy(n: usize, block_length: usize) -> Result<f64> {
    let state = build_state(n)?;
    block_entropy_in(&state, block_length)
}

pub fn block_entropy_in(state: &MpsStateVector, block_length: usize) -> Result<f64> {
    let n = state.n;
    if block_length == 0 || block_length >= n {
        return Err(Error::IndexOutOfRange(format!("block length must be in 1..{n}, got {block_length}")));
    }
    let psi = state.normalized();
    // Reduce onto the smaller side; the spectra of both marginals coincide.
    let (rows, cols) = (LOCAL_DIM.pow(block_length as u32), LOCAL_DIM.pow((n - block_length) as u32));
    let rho = if rows <= cols {
        ComplexMatrix::from_fn(rows, rows, |a, b| {
            (0..cols).map(|c| psi[a * cols + c] * psi[b * cols + c].conj()).sum()
        })
    } else {
        ComplexMatrix::from_fn(cols, cols, |a, b| {
            (0..rows).map(|r| psi[r * cols + a] * psi[r * cols + b].conj()).sum()
        })
    };
    von_neumann_entropy(&rho)
}

/// `|ψ(k)|² / ⟨ψ|ψ⟩` over all `3ⁿ` strings in lexicographic order.
pub fn born_distribution(n: usize) -> Result<Vec<f64>> {
    let state = build_state(n)?;
    Ok(state.amplitudes.iter().map(|a| a.norm_sqr() / state.norm_sq).collect())
}

pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(format!("distributions of length {} and {}", p.len(), q.len())));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_examples() {
        let s = build_state(2).unwrap();
        assert!((s.amplitude(&[1, 1]).unwrap() - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(s.amplitude(&[0, 0]).unwrap().norm() < 1e-15);
        assert!((s.norm_sq - 4.0 / 3.0).abs() < 1e-14);
        assert!(build_state(1).is_err());
        assert!(build_state(11).is_err());
    }

    #[test]
    fn norm_matches_closed_form() {
        for n in 2..=8 {
            assert!((build_state(n).unwrap().norm_sq - norm_sq_closed_form(n)).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn nonzero_amplitudes_have_zero_magnetization() {
        let s = build_state(5).unwrap();
        for (idx, a) in s.amplitudes.iter().enumerate() {
            let mut m = 0i32;
            let mut x = idx;
            for _ in 0..5 {
                m += 1 - (x % 3) as i32;
                x /= 3;
            }
            if m != 0 {
                assert!(a.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn bond_term_spectrum() {
        let ev = bond_term().hermitian_eigenvalues().unwrap();
        let lows = ev.iter().filter(|&&e| (e + 2.0 / 3.0).abs() < 1e-12).count();
        let highs = ev.iter().filter(|&&e| (e - 4.0 / 3.0).abs() < 1e-12).count();
        assert_eq!((lows, highs), (4, 5));
    }

    #[test]
    fn hamiltonian_symmetries() {
        for n in [2, 3, 4] {
            let h = build_hamiltonian(n, true).unwrap();
            assert!(h.hermiticity_residual() < 1e-12);
            assert!(h.sz_commutator_residual() < 1e-12);
        }
        assert!(build_hamiltonian(9, true).is_err());
    }

    #[test]
    fn sparse_matches_dense_kron_embedding() {
        let n = 3;
        let h = build_hamiltonian(n, false).unwrap().to_dense().unwrap();
        let i3 = ComplexMatrix::identity(3);
        let h2 = bond_term();
        let expected = &kron(&h2, &i3) + &kron(&i3, &h2);
        assert!(h.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn ground_energy() {
        for n in 2..=6 {
            let g = ground_energy_check(n).unwrap();
            assert!((g.energy + 2.0 * n as f64 / 3.0).abs() < 1e-8, "n={n} E={}", g.energy);
            assert!(g.residual < 1e-8);
        }
    }

    #[test]
    fn ground_state_is_lowest_at_n_four() {
        let h = build_hamiltonian(4, true).unwrap().to_dense().unwrap();
        let e0 = h.hermitian_eigenvalues().unwrap()[0];
        assert!((e0 + 8.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn correlations() {
        let (_, _, sz) = spin1_operators();
        let s = build_state(6).unwrap();
        for i in 1..=6 {
            assert!(expectation(&s, &[(i, &sz)]).unwrap().norm() < 1e-14);
        }
        assert!(correlation_in(&s, &sz, 1, 2).unwrap() < 0.0);
        assert!(correlation_in(&s, &sz, 2, 1).is_err());
        assert!(correlation_in(&s, &sz, 1, 7).is_err());
    }

    #[test]
    fn correlations_decay_by_a_third() {
        let table = sz_correlator_table(8).unwrap();
        for w in table.windows(2).take(2) {
            let ratio = w[1].magnitude / w[0].magnitude;
            assert!((ratio - 1.0 / 3.0).abs() < 0.25 / 3.0, "ratio {ratio}");
            assert!(w[0].correlator * w[1].correlator < 0.0);
        }
    }

    #[test]
    fn block_entropies() {
        let s = build_state(6).unwrap();
        let e3 = block_entropy_in(&s, 3).unwrap();
        assert!(e3 > 1.9 && e3 <= 2.0 + 1e-10);
        for l in 1..6 {
            let a = block_entropy_in(&s, l).unwrap();
            let b = block_entropy_in(&s, 6 - l).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
        // n = 2: the state is the spin-0 singlet, so one site is maximally mixed.
        assert!((block_entropy(2, 1).unwrap() - 3f64.log2()).abs() < 1e-10);
        assert!(block_entropy_in(&s, 6).is_err());
    }

    #[test]
    fn born_distribution_normalizes() {
        let p = born_distribution(4).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
    }
}
