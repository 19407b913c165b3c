//! Unitary protocols acting on `τ_β^{⊗n}` and the bookkeeping they share.
//!
//! Protocols that only permute populations and rotate inside one subspace
//! return a [`StructuredState`], which scales to registers far beyond the
//! dense limit. Everything else is dense.

mod bell;
mod circulant;
mod dicke;
mod ghz;
mod verstraete;

use serde::{Deserialize, Serialize};

pub use bell::{bell_basis_unitary, bell_protocol};
pub use circulant::{circulant_heating_protocol, circulant_plan, circulant_plan_numeric, CirculantPlan};
pub use dicke::{dicke_protocol, dicke_target_form, DickeFill, DickeWitnessModel};
pub use ghz::{ghz_subspace_protocol, xstate_protocol, GhzVariant};
pub use verstraete::{verstraete_protocol, verstraete_unitary};

use crate::basis::binomial;
use crate::correlations::mutual_information;
use crate::entanglement::concurrence_2q;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, QuantumState, StructuredState, C64};
use crate::thermal::{thermal_state, ThermalSystem};
use crate::tolerances;

/// Final state of a protocol, dense or structured.
#[derive(Clone, Debug)]
pub enum FinalState {
    Dense(DensityMatrix),
    Structured(StructuredState),
}

impl FinalState {
    /// Dense copy, if the dimension allows one.
    pub fn to_dense(&self) -> Result<DensityMatrix> {
        match self {
            FinalState::Dense(rho) => Ok(rho.clone()),
            FinalState::Structured(s) => s.to_dense(),
        }
    }

    fn inner(&self) -> &dyn QuantumState {
        match self {
            FinalState::Dense(rho) => rho,
            FinalState::Structured(s) => s,
        }
    }
}

impl QuantumState for FinalState {
    fn dims(&self) -> &[usize] {
        self.inner().dims()
    }

    fn dim(&self) -> usize {
        self.inner().dim()
    }

    fn population(&self, i: usize) -> f64 {
        self.inner().population(i)
    }

    fn element(&self, i: usize, j: usize) -> C64 {
        self.inner().element(i, j)
    }

    fn spectrum(&self) -> Result<Vec<f64>> {
        self.inner().spectrum()
    }

    fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.inner().reduced(keep)
    }
}

/// Figures of merit evaluated on the final state; `None` when not applicable.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub mutual_info: Option<f64>,
    pub concurrence: Option<f64>,
    pub witness: Option<f64>,
    pub gme_concurrence: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ProtocolOutcome {
    pub final_state: FinalState,
    /// `Tr(H_tot(ρ_f − ρ_i))` in units of `E`.
    pub work: f64,
    pub measures: Measures,
}

/// `Σ_x E(x) (⟨x|ρ_f|x⟩ − ⟨x|τ|x⟩)`.
pub(crate) fn work_from_populations<S: QuantumState + ?Sized>(rho: &S, initial: &[f64], sys: &ThermalSystem) -> f64 {
    (0..rho.dim())
        .map(|x| {
            let delta = rho.population(x) - initial[x];
            if delta == 0.0 {
                0.0
            } else {
                delta * sys.energy_of_index(x)
            }
        })
        .sum()
}

/// Mutual information, skipped above the dense limit.
pub(crate) fn mutual_info_if_small<S: QuantumState + ?Sized>(rho: &S) -> Result<Option<f64>> {
    if rho.dim() > tolerances::MAX_DENSE_DIM {
        return Ok(None);
    }
    Ok(Some(mutual_information(rho)?.value))
}

/// `ρ_f = U τ_β^{⊗n} U†` with work, mutual information and, for two qubits,
/// concurrence.
pub fn apply_protocol(u: &ComplexMatrix, sys: &ThermalSystem) -> Result<ProtocolOutcome> {
    let dim = sys.hilbert_dim().ok_or(Error::DimensionTooLarge(usize::MAX))?;
    if !u.is_square() || u.rows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: u.rows(),
        });
    }
    let err = u.unitarity_error();
    if err > 1e-9 {
        return Err(Error::BadProtocol(format!("matrix is not unitary (error {err:e})")));
    }
    let (tau, _, _) = thermal_state(sys)?;
    let initial = tau.populations();
    let rho = tau.evolve(u)?;
    let work = work_from_populations(&rho, &initial, sys);
    let concurrence = if sys.n() == 2 && sys.is_qubit() {
        Some(concurrence_2q(&rho)?)
    } else {
        None
    };
    let measures = Measures {
        mutual_info: mutual_info_if_small(&rho)?,
        concurrence,
        ..Measures::default()
    };
    Ok(ProtocolOutcome {
        final_state: FinalState::Dense(rho),
        work,
        measures,
    })
}

const UNASSIGNED: u8 = u8::MAX;

/// Assignment of thermal excitation classes to qubit basis states.
///
/// Class `c` carries population `p^{n−c}(1−p)^c` and has `C(n, c)` members.
/// A plan is a relabeling of `τ_β^{⊗n}`'s diagonal and does not depend on `β`.
#[derive(Clone, Debug)]
pub(crate) struct ClassPlan {
    n: usize,
    class_of: Vec<u8>,
    remaining: Vec<usize>,
}

impl ClassPlan {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            n,
            class_of: vec![UNASSIGNED; 1 << n],
            remaining: (0..=n).map(|c| binomial(n, c)).collect(),
        }
    }

    pub(crate) fn is_free(&self, x: usize) -> bool {
        self.class_of[x] == UNASSIGNED
    }

    #[cfg(test)]
    pub(crate) fn available(&self, c: usize) -> usize {
        self.remaining[c]
    }

    /// Puts class `c` on `x`.
    pub(crate) fn assign(&mut self, x: usize, c: usize) -> Result<()> {
        if !self.is_free(x) || self.remaining[c] == 0 {
            return Err(Error::BadProtocol(format!("cannot place class {c} on state {x}")));
        }
        self.remaining[c] -= 1;
        self.class_of[x] = c as u8;
        Ok(())
    }

    /// Puts class `c` on `x`, falling back to the nearest less populated
    /// class, then the nearest more populated one (never class 0).
    pub(crate) fn assign_near(&mut self, x: usize, c: usize) -> Result<usize> {
        let upward = c..=self.n;
        let downward = (1..c).rev();
        let chosen = upward
            .chain(downward)
            .find(|&k| self.remaining[k] > 0)
            .ok_or_else(|| Error::BadProtocol("no class left to assign".into()))?;
        self.assign(x, chosen)?;
        Ok(chosen)
    }

    /// Remaining classes in ascending order onto the remaining states ordered
    /// by Hamming weight, then index.
    pub(crate) fn fill_passive(&mut self) {
        let mut free: Vec<usize> = (0..self.class_of.len()).filter(|&x| self.is_free(x)).collect();
        free.sort_by_key(|&x| (x.count_ones(), x));
        let mut c = 0;
        for x in free {
            while self.remaining[c] == 0 {
                c += 1;
            }
            self.remaining[c] -= 1;
            self.class_of[x] = c as u8;
        }
    }

    pub(crate) fn class(&self, x: usize) -> Option<usize> {
        (!self.is_free(x)).then_some(self.class_of[x] as usize)
    }

    /// Populations after the relabeling. Unassigned states must not remain.
    pub(crate) fn populations(&self, sys: &ThermalSystem) -> Vec<f64> {
        let class_pop = class_populations(sys);
        self.class_of
            .iter()
            .map(|&c| {
                assert!(c != UNASSIGNED, "plan fully assigned");
                class_pop[c as usize]
            })
            .collect()
    }
}

/// `p^{n−c}(1−p)^c` for `c = 0..=n`.
pub(crate) fn class_populations(sys: &ThermalSystem) -> Vec<f64> {
    let n = sys.n();
    let p = sys.p();
    let q = 1.0 - p;
    (0..=n).map(|c| p.powi((n - c) as i32) * q.powi(c as i32)).collect()
}

/// Largest register handled by the structured protocols.
pub const MAX_STRUCTURED_QUBITS: usize = 26;

pub(crate) fn require_qubits(sys: &ThermalSystem, min_n: usize) -> Result<()> {
    if !sys.is_qubit() {
        return Err(Error::BadProtocol("protocol needs qubits".into()));
    }
    if sys.n() < min_n {
        return Err(Error::BadProtocol(format!("protocol needs at least {min_n} qubits")));
    }
    if sys.n() > MAX_STRUCTURED_QUBITS {
        return Err(Error::DimensionTooLarge(usize::MAX));
    }
    Ok(())
}
