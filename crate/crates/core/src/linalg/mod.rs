//! Dense complex linear algebra sized for Hilbert spaces up to 4096 states.
//!
//! Everything here is row-major and allocation-light. Tensor factors are
//! ordered most-significant first: the basis index of `|a⟩⊗|b⟩` with factor
//! dimensions `[da, db]` is `a * db + b`.

mod density;
mod eigh;
mod structured;

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tolerances;

pub use density::{partial_trace, DensityMatrix};
pub use eigh::{eigh, eigvalsh, HermitianEig};
pub use structured::{Block, StructuredState};

pub type C64 = Complex64;

/// Read access shared by dense and structured states.
pub trait QuantumState {
    /// Tensor-factor dimensions, most significant first.
    fn dims(&self) -> &[usize];

    fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    /// Real diagonal entry `⟨i|ρ|i⟩`.
    fn population(&self, i: usize) -> f64;

    fn element(&self, i: usize, j: usize) -> C64;

    /// Eigenvalues, ascending.
    fn spectrum(&self) -> Result<Vec<f64>>;

    /// Reduced state on the listed factors.
    fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix>;

    fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.population(i)).collect()
    }
}

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting bad shapes and NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
            for (i, &z) in c.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Real parts of the diagonal.
    pub fn diag_real(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_max`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖self − self†‖_max`, or infinity for non-square input.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut err = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `self · rho · self†`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        self.matmul(rho).matmul(&self.adjoint())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.rows))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product of square factors, first factor most significant.
pub fn kron_n(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyList)?;
    for f in factors {
        if !f.is_square() {
            return Err(Error::NotSquare(f.rows(), f.cols()));
        }
    }
    Ok(rest.iter().fold(first.clone(), |acc, f| acc.kron(f)))
}

/// Identity except for the 2×2 block on rows/columns `(i, j)`:
///
/// ```text
/// [ cos θ            −e^{iφ} sin θ ]
/// [ e^{−iφ} sin θ     cos θ        ]
/// ```
pub fn two_level_rotation(dim: usize, i: usize, j: usize, theta: f64, phi: f64) -> Result<ComplexMatrix> {
    check_pair(dim, i, j)?;
    let mut u = ComplexMatrix::identity(dim);
    let (s, c) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    u[(i, i)] = C64::new(c, 0.0);
    u[(j, j)] = C64::new(c, 0.0);
    u[(i, j)] = -e * s;
    u[(j, i)] = e.conj() * s;
    Ok(u)
}

/// Left-multiplies `m` in place by `two_level_rotation(dim, i, j, θ, φ)`.
/// Touches only rows `i` and `j`.
pub fn rotate_rows(m: &mut ComplexMatrix, i: usize, j: usize, theta: f64, phi: f64) -> Result<()> {
    check_pair(m.rows(), i, j)?;
    let (s, c) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    let (ui_j, uj_i) = (-e * s, e.conj() * s);
    for col in 0..m.cols() {
        let a = m[(i, col)];
        let b = m[(j, col)];
        m[(i, col)] = a * c + ui_j * b;
        m[(j, col)] = uj_i * a + b * c;
    }
    Ok(())
}

fn check_pair(dim: usize, i: usize, j: usize) -> Result<()> {
    for idx in [i, j] {
        if idx >= dim {
            return Err(Error::BadIndex { index: idx, bound: dim });
        }
    }
    if i == j {
        return Err(Error::BadIndex { index: j, bound: dim });
    }
    Ok(())
}

/// Haar-random unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for c in &cols {
                let overlap: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(c) {
                    *x -= overlap * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_columns(&cols).expect("square by construction")
}

/// Mixed-radix digits of `index`, most significant factor first.
pub(crate) fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

pub(crate) fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

pub(crate) fn check_dense_dim(dim: usize) -> Result<()> {
    if dim > tolerances::MAX_DENSE_DIM {
        Err(Error::DimensionTooLarge(dim))
    } else {
        Ok(())
    }
}
