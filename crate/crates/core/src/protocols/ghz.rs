use serde::{Deserialize, Serialize};

use super::{
    mutual_info_if_small, require_qubits, work_from_populations, ClassPlan, FinalState, Measures, ProtocolOutcome,
};
use crate::basis::all_ones;
use crate::entanglement::{bipartition_concurrence_of_state, bipartition_masks, xstate_gme_concurrence, XStateParams};
use crate::error::{Error, Result};
use crate::linalg::{Block, ComplexMatrix, StructuredState, C64};
use crate::thermal::ThermalSystem;

/// Which bipartitions the GHZ-subspace protocol targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GhzVariant {
    /// No permutation; every cut sees the same concurrence.
    AllBip,
    /// Optimized for the cut separating the qubits set in `side` (a basis
    /// bitmask) from the rest.
    SingleBip { side: usize },
}

/// `|0…0⟩ ↦ (|0…0⟩+|1…1⟩)/√2` and `|1…1⟩ ↦ (|0…0⟩−|1…1⟩)/√2`, preceded for
/// the single-cut variant by a permutation moving the two populations that
/// flank that cut to the smallest available values.
pub fn ghz_subspace_protocol(sys: &ThermalSystem, variant: GhzVariant) -> Result<ProtocolOutcome> {
    require_qubits(sys, 2)?;
    let n = sys.n();
    let ones = all_ones(n);
    let pops = match variant {
        GhzVariant::AllBip => sys.product_populations()?,
        GhzVariant::SingleBip { side } => {
            if side == 0 || side >= ones {
                return Err(Error::BadIndex {
                    index: side,
                    bound: ones,
                });
            }
            let mut plan = ClassPlan::new(n);
            plan.assign(0, 0)?;
            plan.assign(ones, n - 1)?;
            plan.assign(side, n - 1)?;
            plan.assign(ones ^ side, n)?;
            plan.fill_passive();
            plan.populations(sys)
        }
    };
    let out = rotate_extremes(sys, pops)?;
    let concurrence = match variant {
        GhzVariant::AllBip => {
            let mut worst = f64::INFINITY;
            for mask in bipartition_masks(n) {
                worst = worst.min(bipartition_concurrence_of_state(&out, n, mask)?);
            }
            worst
        }
        GhzVariant::SingleBip { side } => bipartition_concurrence_of_state(&out, n, side)?,
    };
    finish(sys, out, Some(concurrence))
}

/// Optimal X-state protocol: the extreme populations `p^n` and `(1−p)^n`
/// are rotated into a GHZ pair while every other pair `(x, x̄)` keeps the
/// thermal product `p^n(1−p)^n`, which is already the smallest attainable
/// `Σ √(a_j b_j)`. Reports the X-state GME concurrence.
pub fn xstate_protocol(sys: &ThermalSystem) -> Result<ProtocolOutcome> {
    require_qubits(sys, 2)?;
    let out = rotate_extremes(sys, sys.product_populations()?)?;
    finish(sys, out, None)
}

/// Applies the GHZ rotation on `{0…0, 1…1}` to a diagonal state.
fn rotate_extremes(sys: &ThermalSystem, pops: Vec<f64>) -> Result<StructuredState> {
    let n = sys.n();
    let ones = all_ones(n);
    let (big, small) = (pops[0], pops[ones]);
    let mean = 0.5 * (big + small);
    let half_gap = 0.5 * (big - small);
    let mut m = ComplexMatrix::from_diag(&[mean, mean]);
    m[(0, 1)] = C64::new(half_gap, 0.0);
    m[(1, 0)] = C64::new(half_gap, 0.0);
    let block = Block::with_spectrum(vec![0, ones], m, vec![big, small])?;
    StructuredState::new(sys.dims(), pops, vec![block])
}

fn finish(sys: &ThermalSystem, state: StructuredState, concurrence: Option<f64>) -> Result<ProtocolOutcome> {
    let initial = sys.product_populations()?;
    let work = work_from_populations(&state, &initial, sys);
    let x = XStateParams::from_state(&state, sys.n())?;
    let measures = Measures {
        mutual_info: mutual_info_if_small(&state)?,
        concurrence,
        witness: None,
        gme_concurrence: Some(xstate_gme_concurrence(&x)?),
    };
    Ok(ProtocolOutcome {
        final_state: FinalState::Structured(state),
        work,
        measures,
    })
}
