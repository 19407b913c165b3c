//! Cyclic Jacobi diagonalization of complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Schur rotation. Sweeps continue
//! until every off-diagonal magnitude falls below `JACOBI_OFFDIAG` (scaled by
//! the largest entry when that exceeds one).

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerances;

#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            for i in 0..n {
                let vi = v[(i, k)] * lam;
                for j in 0..n {
                    out[(i, j)] += vi * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `f(A) = V f(Λ) V†` for a real function of the eigenvalues.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> ComplexMatrix {
        HermitianEig {
            eigenvalues: self.eigenvalues.iter().map(|&x| f(x)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
        .reconstruct()
    }
}

pub fn eigh(a: &ComplexMatrix) -> Result<HermitianEig> {
    let (values, vectors) = jacobi(a, true)?;
    let vectors = vectors.expect("requested");
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let n = values.len();
    let mut sorted = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            sorted[(i, new)] = vectors[(i, old)];
        }
    }
    Ok(HermitianEig {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        eigenvectors: sorted,
    })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let (mut values, _) = jacobi(a, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn jacobi(a: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let herm = a.hermiticity_error();
    if herm > tolerances::HERMITIAN {
        return Err(Error::NotHermitian(herm));
    }
    let n = a.rows();
    let mut m = a.clone();
    // symmetrize exactly so rounding in the input cannot stall the sweeps
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let tol = tolerances::JACOBI_OFFDIAG * m.max_abs().max(1.0);

    for _ in 0..tolerances::JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag < tol * 1e-3 {
                    continue;
                }
                let phase = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // V = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on (p, q)
                let vpp = C64::new(c, 0.0);
                let vpq = C64::new(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;
                // columns: M ← M V
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * vpp + mkq * vqp;
                    m[(k, q)] = mkp * vpq + mkq * vqq;
                }
                // rows: M ← V† M
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = vpp.conj() * mpk + vqp.conj() * mqk;
                    m[(q, k)] = vpq.conj() * mpk + vqq.conj() * mqk;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(app - t * mag, 0.0);
                m[(q, q)] = C64::new(aqq + t * mag, 0.0);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * vpp + vkq * vqp;
                        v[(k, q)] = vkp * vpq + vkq * vqq;
                    }
                }
            }
        }
    }
    Ok(((0..n).map(|i| m[(i, i)].re).collect(), v))
}
