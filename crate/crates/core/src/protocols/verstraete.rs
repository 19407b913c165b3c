use std::f64::consts::FRAC_1_SQRT_2;

use super::{apply_protocol, ProtocolOutcome};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::thermal::ThermalSystem;

/// Two-qubit unitary reaching the spectrum-optimal concurrence from a
/// diagonal state with populations `pops` (basis `00, 01, 10, 11`).
///
/// A permutation places the sorted populations `λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄` on
/// `|00⟩, |01⟩, |11⟩, |10⟩`, then `|00⟩ ↦ (|00⟩+|11⟩)/√2` and
/// `|11⟩ ↦ (|00⟩−|11⟩)/√2`. Ties keep the lower index first.
pub fn verstraete_unitary(pops: &[f64; 4]) -> ComplexMatrix {
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| pops[b].total_cmp(&pops[a]));
    let slots = [0usize, 1, 3, 2];
    let mut perm = ComplexMatrix::zeros(4, 4);
    for (rank, &from) in order.iter().enumerate() {
        perm[(slots[rank], from)] = C64::new(1.0, 0.0);
    }
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut rot = ComplexMatrix::identity(4);
    rot[(0, 0)] = h;
    rot[(3, 0)] = h;
    rot[(0, 3)] = h;
    rot[(3, 3)] = -h;
    rot.matmul(&perm)
}

/// Optimal entangling protocol for two thermal qubits.
pub fn verstraete_protocol(sys: &ThermalSystem) -> Result<ProtocolOutcome> {
    if sys.n() != 2 || !sys.is_qubit() {
        return Err(Error::BadProtocol("needs exactly two qubits".into()));
    }
    let pops = sys.product_populations()?;
    let u = verstraete_unitary(&[pops[0], pops[1], pops[2], pops[3]]);
    apply_protocol(&u, sys)
}
