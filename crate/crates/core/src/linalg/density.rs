use super::{check_dense_dim, ComplexMatrix, QuantumState, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerances;

/// Unit-trace Hermitian PSD matrix with a tensor-factor dimension list.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity.
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let rho = Self::from_parts(mat, dims)?;
        let herm = rho.mat.hermiticity_error();
        if herm > tolerances::HERMITIAN {
            return Err(Error::NotHermitian(herm));
        }
        let tr = rho.mat.trace();
        if (tr.re - 1.0).abs() > tolerances::TRACE || tr.im.abs() > tolerances::TRACE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        if !shifted_cholesky_ok(&rho.mat, -tolerances::MIN_EIGENVALUE) {
            return Err(Error::InvalidState(format!(
                "eigenvalue below {:e}",
                tolerances::MIN_EIGENVALUE
            )));
        }
        Ok(rho)
    }

    /// Shape checks only. Used for images of valid states under unitaries.
    pub(crate) fn from_parts(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare(mat.rows(), mat.cols()));
        }
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidState(format!("bad factor dimensions {dims:?}")));
        }
        let total: usize = dims.iter().product();
        if total != mat.rows() {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: mat.rows(),
            });
        }
        check_dense_dim(total)?;
        Ok(Self { mat, dims })
    }

    pub fn from_diag(diag: &[f64], dims: Vec<usize>) -> Result<Self> {
        if diag.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Self::new(ComplexMatrix::from_diag(diag), dims)
    }

    /// `|ψ⟩⟨ψ|`; the vector must be normalized.
    pub fn pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims_vec(&self) -> Vec<usize> {
        self.dims.clone()
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.mat.rows() || !u.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.mat.rows(),
                got: u.rows(),
            });
        }
        Ok(Self {
            mat: u.conjugate(&self.mat),
            dims: self.dims.clone(),
        })
    }
}

impl QuantumState for DensityMatrix {
    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn population(&self, i: usize) -> f64 {
        self.mat[(i, i)].re
    }

    fn element(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    fn spectrum(&self) -> Result<Vec<f64>> {
        super::eigvalsh(&self.mat)
    }

    fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

/// Traces out every factor not listed in `keep` (0-based factor indices).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let m = &rho.mat;
    reduce_with(&rho.dims, keep, |i, j| m[(i, j)])
}

/// Kept and traced factor positions, validated and sorted.
pub(crate) fn split_factors(dims: &[usize], keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    for w in kept.windows(2) {
        if w[0] == w[1] {
            return Err(Error::BadIndex {
                index: w[0],
                bound: dims.len(),
            });
        }
    }
    if let Some(&last) = kept.last() {
        if last >= dims.len() {
            return Err(Error::BadIndex {
                index: last,
                bound: dims.len(),
            });
        }
    }
    let traced = (0..dims.len()).filter(|f| !kept.contains(f)).collect();
    Ok((kept, traced))
}

/// Partial trace over any element accessor.
pub(crate) fn reduce_with<F: Fn(usize, usize) -> C64>(
    dims: &[usize],
    keep: &[usize],
    element: F,
) -> Result<DensityMatrix> {
    let (kept, traced) = split_factors(dims, keep)?;
    let kdims: Vec<usize> = kept.iter().map(|&f| dims[f]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&f| dims[f]).collect();
    let dk: usize = kdims.iter().product();
    let dt: usize = tdims.iter().product();
    let full = |a: usize, t: usize| -> usize {
        let ad = super::digits(a, &kdims);
        let td = super::digits(t, &tdims);
        let mut all = vec![0; dims.len()];
        for (&f, &x) in kept.iter().zip(&ad) {
            all[f] = x;
        }
        for (&f, &x) in traced.iter().zip(&td) {
            all[f] = x;
        }
        super::compose(&all, dims)
    };
    let mut out = ComplexMatrix::zeros(dk, dk);
    for t in 0..dt {
        let idx: Vec<usize> = (0..dk).map(|a| full(a, t)).collect();
        for a in 0..dk {
            for b in 0..dk {
                let z = element(idx[a], idx[b]);
                if z != ZERO {
                    out[(a, b)] += z;
                }
            }
        }
    }
    DensityMatrix::from_parts(out, kdims)
}

/// Cholesky of `m + shift·I` succeeds, i.e. every eigenvalue exceeds `−shift`.
fn shifted_cholesky_ok(m: &ComplexMatrix, shift: f64) -> bool {
    let n = m.rows();
    let mut l = vec![ZERO; n * n];
    for j in 0..n {
        let mut d = m[(j, j)].re + shift;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = C64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    true
}
