use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{
    mutual_info_if_small, require_qubits, work_from_populations, ClassPlan, FinalState, Measures, ProtocolOutcome,
    MAX_STRUCTURED_QUBITS,
};
use crate::basis::weight_indices;
use crate::entanglement::{dicke_witness, WSubspaceState};
use crate::error::{Error, Result};
use crate::linalg::{check_dense_dim, eigvalsh, Block, ComplexMatrix, QuantumState, StructuredState, C64};
use crate::thermal::ThermalSystem;

/// Fill exponents of the Dicke permutation. A state filled with exponent `f`
/// receives a population `p^f (1−p)^{n−f}`, i.e. `f` qubits in the ground
/// level and the rest excited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DickeFill {
    /// Populations for the non-leading weight-`k` states.
    pub k_fill: usize,
    /// Populations for the weight-`k±1` neighbours.
    pub m_fill: usize,
}

impl DickeFill {
    /// `k_fill = k+2` and `m_fill = 2`, capped at `n−1`.
    pub fn default_for(n: usize, k: usize) -> Self {
        Self {
            k_fill: (k + 2).min(n - 1),
            m_fill: 2.min(n - 1),
        }
    }
}

/// Permutes `τ_β^{⊗n}` so the weight-`k` subspace holds `p^n` plus small
/// populations and its neighbours hold small populations only, then rotates
/// the weight-`k` subspace into the Fourier family
/// `|d_l⟩ = N^{−1/2} Σ_j e^{2πi lj/N} |x_j⟩`, `N = C(n, k)`, with `p^n` on
/// the Dicke state `|d_0⟩`. Reports the `k`-excitation witness.
pub fn dicke_protocol(sys: &ThermalSystem, k: usize, fill: Option<DickeFill>) -> Result<ProtocolOutcome> {
    require_qubits(sys, 2)?;
    let n = sys.n();
    let (plan, slots) = dicke_plan(n, k, fill)?;
    let pops = plan.populations(sys);

    let block_pops: Vec<f64> = slots.iter().map(|&x| pops[x]).collect();
    let block = Block::with_spectrum(slots, fourier_block(&block_pops), block_pops.clone())?;
    let state = StructuredState::new(sys.dims(), pops, vec![block])?;

    let initial = sys.product_populations()?;
    let work = work_from_populations(&state, &initial, sys);
    let measures = Measures {
        mutual_info: mutual_info_if_small(&state)?,
        witness: Some(dicke_witness(&state, n, k)?),
        ..Measures::default()
    };
    Ok(ProtocolOutcome {
        final_state: FinalState::Structured(state),
        work,
        measures,
    })
}

/// Class assignment of the Dicke permutation and the weight-`k` states in
/// block order.
fn dicke_plan(n: usize, k: usize, fill: Option<DickeFill>) -> Result<(ClassPlan, Vec<usize>)> {
    if k == 0 || k >= n {
        return Err(Error::BadExcitation { n, m: k });
    }
    let fill = fill.unwrap_or_else(|| DickeFill::default_for(n, k));
    for exponent in [fill.k_fill, fill.m_fill] {
        if exponent >= n {
            return Err(Error::FillTooLarge { n, exponent });
        }
    }
    let slots = weight_indices(n, k);
    check_dense_dim(slots.len())?;

    let mut plan = ClassPlan::new(n);
    plan.assign(slots[0], 0)?;
    let below = if k == 1 { n } else { n - fill.m_fill };
    for x in weight_indices(n, k - 1) {
        plan.assign_near(x, below)?;
    }
    for x in weight_indices(n, k + 1) {
        plan.assign_near(x, n - fill.m_fill)?;
    }
    for &x in &slots[1..] {
        plan.assign_near(x, n - fill.k_fill)?;
    }
    plan.fill_passive();
    Ok((plan, slots))
}

/// Witness of the Dicke protocol output as a function of temperature alone.
///
/// The permutation does not depend on `β`, so the pair structure is counted
/// once: how often each circulant offset appears among coherent pairs, and
/// which classes sit below and above each pair.
#[derive(Clone, Debug)]
pub struct DickeWitnessModel {
    n: usize,
    k: usize,
    block_size: usize,
    /// `(offset, count, Σ_{l in class c} e^{2πi l·offset/N} for every class)`.
    offsets: Vec<(usize, usize, Vec<C64>)>,
    neighbours: BTreeMap<(usize, usize), usize>,
    block_class_counts: Vec<usize>,
}

impl DickeWitnessModel {
    pub fn new(n: usize, k: usize, fill: Option<DickeFill>) -> Result<Self> {
        if !(2..=MAX_STRUCTURED_QUBITS).contains(&n) {
            return Err(Error::BadExcitation { n, m: k });
        }
        let (plan, slots) = dicke_plan(n, k, fill)?;
        let size = slots.len();
        let position: HashMap<usize, usize> = slots.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let class = |x: usize| plan.class(x).expect("plan fully assigned");

        let mut offset_count = vec![0usize; size];
        let mut neighbours = BTreeMap::new();
        for (a, &alpha) in slots.iter().enumerate() {
            for i in (0..n).filter(|&i| alpha >> i & 1 == 1) {
                for j in (0..n).filter(|&j| alpha >> j & 1 == 0) {
                    let beta = alpha ^ (1 << i) ^ (1 << j);
                    let b = position[&beta];
                    offset_count[(a + size - b) % size] += 1;
                    *neighbours
                        .entry((class(alpha & beta), class(alpha | beta)))
                        .or_insert(0) += 1;
                }
            }
        }
        let mut block_class_counts = vec![0usize; n + 1];
        for &x in &slots {
            block_class_counts[class(x)] += 1;
        }
        let offsets = offset_count
            .iter()
            .enumerate()
            .filter(|(_, &count)| count > 0)
            .map(|(delta, &count)| {
                let mut sums = vec![C64::new(0.0, 0.0); n + 1];
                for (l, &x) in slots.iter().enumerate() {
                    sums[class(x)] += C64::from_polar(1.0, TAU * ((l * delta) % size) as f64 / size as f64);
                }
                (delta, count, sums)
            })
            .collect();
        Ok(Self {
            n,
            k,
            block_size: size,
            offsets,
            neighbours,
            block_class_counts,
        })
    }

    /// Witness value at ground-state population `p`.
    pub fn witness_at(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        let pop: Vec<f64> = (0..=self.n)
            .map(|c| p.powi((self.n - c) as i32) * q.powi(c as i32))
            .collect();
        let coherent: f64 = self
            .offsets
            .iter()
            .map(|(_, count, sums)| {
                let c: C64 = sums.iter().zip(&pop).map(|(s, &w)| s * w).sum();
                *count as f64 * c.norm() / self.block_size as f64
            })
            .sum();
        let flanks: f64 = self
            .neighbours
            .iter()
            .map(|(&(lo, hi), &count)| count as f64 * (pop[lo] * pop[hi]).sqrt())
            .sum();
        let trace: f64 = self
            .block_class_counts
            .iter()
            .zip(&pop)
            .map(|(&count, &w)| count as f64 * w)
            .sum();
        coherent - flanks - (self.k * (self.n - self.k - 1)) as f64 * trace
    }

    pub fn witness(&self, sys: &ThermalSystem) -> f64 {
        self.witness_at(sys.p())
    }
}

/// `F diag(λ) F†` with `F_{jl} = e^{2πi jl/N}/√N`: a circulant matrix with
/// entries `c_{a−b} = N^{−1} Σ_l λ_l e^{2πi l(a−b)/N}`.
fn fourier_block(lambda: &[f64]) -> ComplexMatrix {
    let size = lambda.len();
    let c: Vec<C64> = (0..size)
        .map(|delta| {
            lambda
                .iter()
                .enumerate()
                .map(|(l, &x)| C64::from_polar(x, TAU * ((l * delta) % size) as f64 / size as f64))
                .sum::<C64>()
                / size as f64
        })
        .collect();
    let mut m = ComplexMatrix::zeros(size, size);
    for a in 0..size {
        for b in 0..size {
            m[(a, b)] = c[(a + size - b) % size];
        }
    }
    m
}

/// Uniform-diagonal, equal-modulus, zero-phase first-excitation block with the
/// trace and purity of `rho`'s block. Fails if that matrix is not PSD.
pub fn dicke_target_form<S: QuantumState + ?Sized>(rho: &S, n: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::BadExcitation { n, m: 1 });
    }
    let w = WSubspaceState::from_state(rho, n)?;
    let form = w.optimal_form();
    let lowest = eigvalsh(&form)?.first().copied().unwrap_or(0.0);
    if lowest < -1e-12 {
        return Err(Error::InvalidState(format!("target form has eigenvalue {lowest:e}")));
    }
    Ok(form)
}
