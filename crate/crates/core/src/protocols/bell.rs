use std::f64::consts::TAU;

use super::{apply_protocol, ProtocolOutcome};
use crate::error::{Error, Result};
use crate::linalg::{check_dense_dim, compose, digits, ComplexMatrix, C64};
use crate::thermal::ThermalSystem;

/// Unitary whose columns are the generalized Bell (`n = 2`) or GHZ basis
/// states of `n` qudits of dimension `d`:
///
/// ```text
/// U|i₁…i_n⟩ = d^{−1/2} Σ_k ω^{i₁k} |k, k+i₂, …, k+i_n⟩,   ω = e^{2πi/d}
/// ```
pub fn bell_basis_unitary(d: usize, n: usize) -> Result<ComplexMatrix> {
    if d < 2 || n < 2 {
        return Err(Error::InvalidSystem(format!(
            "need d ≥ 2 and n ≥ 2, got d = {d}, n = {n}"
        )));
    }
    let dim = d.checked_pow(n as u32).ok_or(Error::DimensionTooLarge(usize::MAX))?;
    check_dense_dim(dim)?;
    let dims = vec![d; n];
    let norm = 1.0 / (d as f64).sqrt();
    let mut u = ComplexMatrix::zeros(dim, dim);
    let mut ket = vec![0; n];
    for col in 0..dim {
        let label = digits(col, &dims);
        for k in 0..d {
            ket[0] = k;
            for f in 1..n {
                ket[f] = (k + label[f]) % d;
            }
            let phase = TAU * (label[0] * k % d) as f64 / d as f64;
            u[(compose(&ket, &dims), col)] = C64::from_polar(norm, phase);
        }
    }
    Ok(u)
}

/// Rotates `τ_β^{⊗n}` into the Bell/GHZ basis; all marginals become
/// maximally mixed and the mutual information reaches `n(ln d − S(τ_β))`.
pub fn bell_protocol(sys: &ThermalSystem) -> Result<ProtocolOutcome> {
    apply_protocol(&bell_basis_unitary(sys.d(), sys.n())?, sys)
}
