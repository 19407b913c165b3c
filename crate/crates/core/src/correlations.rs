//! Multipartite mutual information and its thermodynamic upper bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QuantumState;
use crate::thermal::{entropy_vn, solve_beta_prime, ThermalSystem};
use crate::tolerances;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutualInfoReport {
    /// `Σ S(A_i) − S(A₁⋯A_n)` in nats.
    pub value: f64,
    pub local_entropies: Vec<f64>,
    pub total_entropy: f64,
}

/// Mutual information across all tensor factors of `rho`.
pub fn mutual_information<S: QuantumState + ?Sized>(rho: &S) -> Result<MutualInfoReport> {
    let parties = rho.dims().len();
    if parties < 2 {
        return Err(Error::SingleFactor);
    }
    let local_entropies = (0..parties)
        .map(|i| entropy_vn(&rho.reduced(&[i])?))
        .collect::<Result<Vec<_>>>()?;
    let total_entropy = entropy_vn(rho)?;
    let mut value = local_entropies.iter().sum::<f64>() - total_entropy;
    if value < 0.0 && value > -tolerances::MI_CLAMP {
        value = 0.0;
    }
    Ok(MutualInfoReport {
        value,
        local_entropies,
        total_entropy,
    })
}

/// `n (ln d − S(τ_β))`.
pub fn mi_max_bound(sys: &ThermalSystem) -> f64 {
    sys.n() as f64 * ((sys.d() as f64).ln() - sys.local_entropy())
}

/// `n (S(τ_β′) − S(τ_β))` with `β′` matching the budget `ΔE`.
pub fn mi_energy_bound(sys: &ThermalSystem, delta_e: f64) -> Result<f64> {
    let beta_prime = solve_beta_prime(sys, delta_e)?;
    let hotter = sys.with_beta(beta_prime)?;
    Ok((sys.n() as f64 * (hotter.local_entropy() - sys.local_entropy())).max(0.0))
}
