//! Seeded random test objects: Ginibre matrices, density matrices, unitaries.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::operators::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller.
pub fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Matrix with i.i.d. complex Gaussian entries.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    (&g + &g.dagger()).scale_real(0.5)
}

/// Full-rank random density matrix `GG† / Tr(GG†)`.
pub fn density(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let p = &g * &g.dagger();
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}

/// Random positive semidefinite matrix (unnormalized).
pub fn psd(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    &g * &g.dagger()
}

/// Unitary from Gram–Schmidt on the columns of a Ginibre matrix.
pub fn unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for c in 0..dim {
        let mut v = g.col(c);
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

/// Uniformly distributed unit 3-vector.
pub fn unit_vector(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-8 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(3);
        for d in [2, 3, 5] {
            let u = unitary(&mut r, d);
            assert!((&u.dagger() * &u).approx_eq(&ComplexMatrix::identity(d), 1e-12));
        }
    }

    #[test]
    fn density_is_normalized_and_positive() {
        let mut r = rng(4);
        let rho = density(&mut r, 4);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.hermitian_eigenvalues().unwrap()[0] > -1e-12);
    }
}
