//! Sparse-in-structure states: a full diagonal plus a few disjoint dense
//! blocks. Protocol outputs for many qubits look like this (a permuted thermal
//! diagonal with coherences confined to one degenerate subspace), and the
//! representation keeps them usable well beyond the dense limit.

use std::collections::HashMap;

use super::density::{reduce_with, split_factors};
use super::{check_dense_dim, digits, eigvalsh, ComplexMatrix, DensityMatrix, QuantumState, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerances;

/// Dense coherent block on a set of basis indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    indices: Vec<usize>,
    mat: ComplexMatrix,
    spectrum: Option<Vec<f64>>,
}

impl Block {
    pub fn new(indices: Vec<usize>, mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare(mat.rows(), mat.cols()));
        }
        if mat.rows() != indices.len() {
            return Err(Error::DimensionMismatch {
                expected: indices.len(),
                got: mat.rows(),
            });
        }
        check_dense_dim(indices.len())?;
        let herm = mat.hermiticity_error();
        if herm > tolerances::HERMITIAN {
            return Err(Error::NotHermitian(herm));
        }
        Ok(Self {
            indices,
            mat,
            spectrum: None,
        })
    }

    /// Block whose eigenvalues are known by construction (`U diag(λ) U†`).
    pub(crate) fn with_spectrum(indices: Vec<usize>, mat: ComplexMatrix, mut spectrum: Vec<f64>) -> Result<Self> {
        let mut b = Self::new(indices, mat)?;
        spectrum.sort_by(f64::total_cmp);
        b.spectrum = Some(spectrum);
        Ok(b)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    fn eigenvalues(&self) -> Result<Vec<f64>> {
        match &self.spectrum {
            Some(s) => Ok(s.clone()),
            None => eigvalsh(&self.mat),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StructuredState {
    dims: Vec<usize>,
    diag: Vec<f64>,
    blocks: Vec<Block>,
    lookup: HashMap<usize, (usize, usize)>,
}

impl StructuredState {
    pub fn diagonal(dims: Vec<usize>, diag: Vec<f64>) -> Result<Self> {
        Self::new(dims, diag, Vec::new())
    }

    /// Block diagonals override the corresponding entries of `diag`.
    pub fn new(dims: Vec<usize>, mut diag: Vec<f64>, blocks: Vec<Block>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidState(format!("bad factor dimensions {dims:?}")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::DimensionTooLarge(usize::MAX))?;
        if diag.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: diag.len(),
            });
        }
        if diag.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut lookup = HashMap::new();
        for (b, block) in blocks.iter().enumerate() {
            for (k, &idx) in block.indices.iter().enumerate() {
                if idx >= total {
                    return Err(Error::BadIndex {
                        index: idx,
                        bound: total,
                    });
                }
                if lookup.insert(idx, (b, k)).is_some() {
                    return Err(Error::InvalidState(format!("index {idx} in two blocks")));
                }
                diag[idx] = block.mat[(k, k)].re;
            }
        }
        if diag
            .iter()
            .enumerate()
            .any(|(i, &x)| x < tolerances::MIN_EIGENVALUE && !lookup.contains_key(&i))
        {
            return Err(Error::InvalidState("negative population".into()));
        }
        let tr: f64 = diag.iter().sum();
        if (tr - 1.0).abs() > tolerances::TRACE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(Self {
            dims,
            diag,
            blocks,
            lookup,
        })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn to_dense(&self) -> Result<DensityMatrix> {
        let n = self.diag.len();
        check_dense_dim(n)?;
        let mut m = ComplexMatrix::from_diag(&self.diag);
        for block in &self.blocks {
            for (a, &i) in block.indices.iter().enumerate() {
                for (b, &j) in block.indices.iter().enumerate() {
                    m[(i, j)] = block.mat[(a, b)];
                }
            }
        }
        DensityMatrix::from_parts(m, self.dims.clone())
    }
}

impl QuantumState for StructuredState {
    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn population(&self, i: usize) -> f64 {
        self.diag[i]
    }

    fn element(&self, i: usize, j: usize) -> C64 {
        if i == j {
            return C64::new(self.diag[i], 0.0);
        }
        match (self.lookup.get(&i), self.lookup.get(&j)) {
            (Some(&(bi, a)), Some(&(bj, b))) if bi == bj => self.blocks[bi].mat[(a, b)],
            _ => ZERO,
        }
    }

    fn spectrum(&self) -> Result<Vec<f64>> {
        let mut out: Vec<f64> = self
            .diag
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.lookup.contains_key(i))
            .map(|(_, &x)| x)
            .collect();
        for block in &self.blocks {
            out.extend(block.eigenvalues()?);
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if self.diag.len() <= tolerances::MAX_DENSE_DIM {
            return reduce_with(&self.dims, keep, |i, j| self.element(i, j));
        }
        let (kept, traced) = split_factors(&self.dims, keep)?;
        let kdims: Vec<usize> = kept.iter().map(|&f| self.dims[f]).collect();
        let dk: usize = kdims.iter().product();
        check_dense_dim(dk)?;
        let split = |x: usize| -> (usize, usize) {
            let d = digits(x, &self.dims);
            let a = kept.iter().fold(0, |acc, &f| acc * self.dims[f] + d[f]);
            let t = traced.iter().fold(0, |acc, &f| acc * self.dims[f] + d[f]);
            (a, t)
        };
        let mut out = ComplexMatrix::zeros(dk, dk);
        for (x, &pop) in self.diag.iter().enumerate() {
            if !self.lookup.contains_key(&x) {
                let (a, _) = split(x);
                out[(a, a)] += pop;
            }
        }
        for block in &self.blocks {
            let parts: Vec<(usize, usize)> = block.indices.iter().map(|&x| split(x)).collect();
            for (i, &(a, s)) in parts.iter().enumerate() {
                for (j, &(b, t)) in parts.iter().enumerate() {
                    if s == t {
                        out[(a, b)] += block.mat[(i, j)];
                    }
                }
            }
        }
        DensityMatrix::from_parts(out, kdims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_trace;

    fn ghz_like() -> StructuredState {
        let mut diag = vec![0.0; 8];
        diag[1] = 0.1;
        diag[6] = 0.1;
        let mut m = ComplexMatrix::from_diag(&[0.4, 0.4]);
        m[(0, 1)] = C64::new(0.3, 0.0);
        m[(1, 0)] = C64::new(0.3, 0.0);
        let block = Block::new(vec![0, 7], m).unwrap();
        StructuredState::new(vec![2, 2, 2], diag, vec![block]).unwrap()
    }

    #[test]
    fn elements_and_dense_agree() {
        let s = ghz_like();
        let d = s.to_dense().unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(s.element(i, j), d.element(i, j));
            }
        }
    }

    #[test]
    fn spectrum_matches_dense() {
        let s = ghz_like();
        let dense = s.to_dense().unwrap().spectrum().unwrap();
        for (a, b) in s.spectrum().unwrap().iter().zip(&dense) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_matches_dense() {
        let s = ghz_like();
        let d = s.to_dense().unwrap();
        for keep in [vec![0], vec![1, 2], vec![0, 2]] {
            let a = s.reduced(&keep).unwrap();
            let b = partial_trace(&d, &keep).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
        }
    }

    #[test]
    fn large_reduction_uses_block_path() {
        // 13 qubits exceeds the dense limit
        let n = 13;
        let dim = 1usize << n;
        let mut diag = vec![0.0; dim];
        diag[0] = 0.5;
        diag[dim - 1] = 0.5;
        let mut m = ComplexMatrix::from_diag(&[0.5, 0.5]);
        m[(0, 1)] = C64::new(0.5, 0.0);
        m[(1, 0)] = C64::new(0.5, 0.0);
        let block = Block::new(vec![0, dim - 1], m).unwrap();
        let s = StructuredState::new(vec![2; n], diag, vec![block]).unwrap();
        assert!(s.to_dense().is_err());
        let two = s.reduced(&[0, n - 1]).unwrap();
        assert!(
            two.matrix()
                .max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]))
                < 1e-15
        );
        let everything: Vec<usize> = (0..n).collect();
        let big = s.reduced(&everything);
        assert!(matches!(big, Err(Error::DimensionTooLarge(_))));
    }

    #[test]
    fn rejects_overlap_and_bad_trace() {
        let m = ComplexMatrix::from_diag(&[0.25, 0.25]);
        let b1 = Block::new(vec![0, 1], m.clone()).unwrap();
        let b2 = Block::new(vec![1, 2], m).unwrap();
        assert!(StructuredState::new(vec![2, 2], vec![0.25; 4], vec![b1, b2]).is_err());
        assert!(StructuredState::diagonal(vec![2, 2], vec![0.3; 4]).is_err());
    }
}
