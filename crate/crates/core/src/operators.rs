//! Dense complex linear algebra and the fixed operator zoo.
//!
//! Basis convention used by every module: the physical spin-1 basis is
//! ordered `(+, 0, −)` ↔ `(0, 1, 2)` and the virtual spin-1/2 basis
//! `(↑, ↓)` ↔ `(0, 1)`. Tensor products are row-major in the factor order,
//! so `kron(a, b)` addresses `(i_a, i_b)` as `i_a * dim_b + i_b`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result, TOLERANCE};

/// Eigenvalues of Hermitian matrices below this magnitude are treated as zero
/// before taking logarithms.
const EIGEN_CLAMP: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Physical spin-1 basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Physical {
    Plus,
    Zero,
    Minus,
}

impl Physical {
    pub const ALL: [Physical; 3] = [Physical::Plus, Physical::Zero, Physical::Minus];

    pub fn index(self) -> usize {
        match self {
            Physical::Plus => 0,
            Physical::Zero => 1,
            Physical::Minus => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// ASCII symbol used in outcome strings.
    pub fn symbol(self) -> char {
        match self {
            Physical::Plus => '+',
            Physical::Zero => '0',
            Physical::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '+' => Some(Physical::Plus),
            '0' => Some(Physical::Zero),
            '-' | '−' => Some(Physical::Minus),
            _ => None,
        }
    }
}

/// Virtual spin-1/2 basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Virtual {
    Up,
    Down,
}

impl Virtual {
    pub fn index(self) -> usize {
        match self {
            Virtual::Up => 0,
            Virtual::Down => 1,
        }
    }
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self::from_fn(diag.len(), diag.len(), |r, c| if r == c { diag[r] } else { ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), diag.len(), |r, c| {
            if r == c {
                Complex64::new(diag[r], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Column vector from amplitudes.
    pub fn column(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), 1, |r, _| v[r])
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    /// `|i⟩⟨j|` on a `dim`-dimensional space.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| if r == i && c == j { ONE } else { ZERO })
    }

    pub fn projector(dim: usize, i: usize) -> Self {
        Self::unit(dim, i, i)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Matrix product with a shape check.
    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.matmul_unchecked(other))
    }

    fn matmul_unchecked(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.rows * other.cols];
        for r in 0..self.rows {
            let out_row = &mut out[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = other.row(k);
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Self {
            rows: self.rows,
            cols: other.cols,
            data: out,
        }
    }

    /// `Σ_i ⟨x_i⟩` style matrix-vector product.
    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A·X·A†`.
    pub fn conjugate(&self, x: &Self) -> Self {
        &(self * x) * &self.dagger()
    }

    /// Hilbert–Schmidt inner product `Tr(A†B)`.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.shape(), other.shape(), "HS inner product shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_max`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    /// `max|M − M†| ≤ 1e−12`.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= 1e-12
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }

    /// Eigen-decomposition of the Hermitian part, eigenvalues ascending.
    /// Eigenvectors are the columns of the returned matrix.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("eigen-decomposition needs a square matrix".into()));
        }
        let h = (self + &self.dagger()).scale_real(0.5);
        let eig = h.to_nalgebra().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = Self::from_nalgebra(&eig.eigenvectors);
        let vectors = Self::from_fn(self.rows, self.rows, |r, c| vectors.get(r, order[c]));
        Ok((values, vectors))
    }

    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.hermitian_eigen().map(|(v, _)| v)
    }

    /// Eigenvalues of a general square matrix via the complex Schur form.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("eigenvalues need a square matrix".into()));
        }
        let schur = self
            .to_nalgebra()
            .try_schur(f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Eigensolver("Schur iteration did not converge".into()))?;
        let values = schur
            .eigenvalues()
            .ok_or_else(|| Error::Eigensolver("Schur form is not triangular".into()))?;
        Ok(values.iter().copied().collect())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        self.matmul_unchecked(rhs)
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

/// Sum of a nonempty iterator of equally shaped matrices.
pub fn sum_matrices<'a>(mut it: impl Iterator<Item = ComplexMatrix> + 'a) -> Option<ComplexMatrix> {
    let first = it.next()?;
    Some(it.fold(first, |acc, m| &acc + &m))
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) - &(b * a)
}

/// Tensor product, `(i_a, i_b)` row-major.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    ComplexMatrix::from_fn(ra * rb, ca * cb, |r, c| a.get(r / rb, c / cb) * b.get(r % rb, c % cb))
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Option<ComplexMatrix> {
    let mut it = factors.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, m| kron(&acc, m)))
}

/// Trace over every factor not listed in `keep`. `dims` lists the factor
/// dimensions in tensor order; the kept factors stay in their original order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch("factor dimensions must be positive".into()));
    }
    if !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a square matrix of dimension {total}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "kept factor {bad} out of range for {} factors",
            dims.len()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();

    // Split every full index into (kept index, traced index).
    let mut split = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims.len()];
    for full in 0..total {
        let mut rem = full;
        for f in (0..dims.len()).rev() {
            digits[f] = rem % dims[f];
            rem /= dims[f];
        }
        let (mut k_idx, mut t_idx) = (0usize, 0usize);
        for f in 0..dims.len() {
            if kept.binary_search(&f).is_ok() {
                k_idx = k_idx * dims[f] + digits[f];
            } else {
                t_idx = t_idx * dims[f] + digits[f];
            }
        }
        split.push((k_idx, t_idx));
    }
    let dk: usize = kept.iter().map(|&f| dims[f]).product();
    let dt = total / dk;
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dt];
    for (full, &(k, t)) in split.iter().enumerate() {
        groups[t].push((full, k));
    }
    let mut out = vec![ZERO; dk * dk];
    for group in &groups {
        for &(i, ki) in group {
            for &(j, kj) in group {
                out[ki * dk + kj] += m.get(i, j);
            }
        }
    }
    ComplexMatrix::new(dk, dk, out)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |r, c| if r != c { ONE } else { ZERO })
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    })
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// `σ⁺ = |↑⟩⟨↓|`.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::unit(2, 0, 1)
}

/// `σ⁻ = |↓⟩⟨↑|`.
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::unit(2, 1, 0)
}

/// Spin-1 matrices `(Sx, Sy, Sz)` in the `(+, 0, −)` basis.
///
/// `Sz = diag(1, 0, −1)`. The `|0⟩` phase is chosen so that
/// `S⁺|0⟩ = −√2|+⟩` and `S⁺|−⟩ = −√2|0⟩`; with this phase the AKLT tensors
/// `A₊ = √(2/3)σ⁺, A₀ = √(1/3)σᶻ, A₋ = −√(2/3)σ⁻` are rotation covariant.
pub fn spin1_operators() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let s = -std::f64::consts::FRAC_1_SQRT_2;
    let sx = ComplexMatrix::from_real_rows(&[&[0.0, s, 0.0], &[s, 0.0, s], &[0.0, s, 0.0]]).unwrap();
    let sy = ComplexMatrix::from_fn(3, 3, |r, c| match (r, c) {
        (0, 1) | (1, 2) => -I * s,
        (1, 0) | (2, 1) => I * s,
        _ => ZERO,
    });
    let sz = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, -1.0]);
    (sx, sy, sz)
}

/// The three AKLT virtual-space tensors, indexed by [`Physical`].
#[derive(Debug, Clone)]
pub struct AkltTensors {
    pub a_plus: ComplexMatrix,
    pub a_zero: ComplexMatrix,
    pub a_minus: ComplexMatrix,
}

impl AkltTensors {
    pub fn get(&self, k: Physical) -> &ComplexMatrix {
        match k {
            Physical::Plus => &self.a_plus,
            Physical::Zero => &self.a_zero,
            Physical::Minus => &self.a_minus,
        }
    }

    /// Tensors in `(+, 0, −)` order.
    pub fn as_array(&self) -> [&ComplexMatrix; 3] {
        [&self.a_plus, &self.a_zero, &self.a_minus]
    }

    pub fn to_vec(&self) -> Vec<ComplexMatrix> {
        self.as_array().into_iter().cloned().collect()
    }
}

pub fn aklt_tensors() -> AkltTensors {
    let w = (2.0f64 / 3.0).sqrt();
    AkltTensors {
        a_plus: sigma_plus().scale_real(w),
        a_zero: pauli_z().scale_real((1.0f64 / 3.0).sqrt()),
        a_minus: sigma_minus().scale_real(-w),
    }
}

/// Von Neumann entropy `−Σ λ log₂ λ` in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    if !rho.is_square() {
        return Err(Error::InvalidDensity("density matrix must be square".into()));
    }
    let herm = rho.hermiticity_residual();
    if herm > TOLERANCE {
        return Err(Error::InvalidDensity(format!("not Hermitian (residual {herm:e})")));
    }
    let tr = rho.trace();
    if (tr - ONE).norm() > TOLERANCE {
        return Err(Error::InvalidDensity(format!("trace {} + {}i is not 1", tr.re, tr.im)));
    }
    let eigenvalues = rho.hermitian_eigenvalues()?;
    if let Some(&min) = eigenvalues.first() {
        if min < -TOLERANCE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
    }
    Ok(eigenvalues
        .into_iter()
        .filter(|&l| l > EIGEN_CLAMP)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0))
}
