//! Thermal states `τ_β^{⊗n}` and their thermodynamic scalars.
//!
//! Energies are in units of the qubit gap `E`, `k_B = 1`, logarithms are
//! natural. `β = +∞` denotes the ground state and is handled exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_dense_dim, ComplexMatrix, DensityMatrix, QuantumState, StructuredState};
use crate::tolerances;

/// `n` identical subsystems with local levels `levels` at inverse temperature `beta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalSystem {
    n: usize,
    levels: Vec<f64>,
    beta: f64,
}

impl ThermalSystem {
    pub fn new(n: usize, levels: Vec<f64>, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSystem("need at least one subsystem".into()));
        }
        if levels.len() < 2 {
            return Err(Error::InvalidSystem("need at least two levels".into()));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite);
        }
        if levels[0] != 0.0 {
            return Err(Error::InvalidSystem("lowest level must be 0".into()));
        }
        if levels.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidSystem("levels must be ascending".into()));
        }
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidSystem(format!("inverse temperature {beta} must be ≥ 0")));
        }
        Ok(Self { n, levels, beta })
    }

    /// `n` qubits with levels `[0, 1]`.
    pub fn qubits(n: usize, beta: f64) -> Result<Self> {
        Self::new(n, vec![0.0, 1.0], beta)
    }

    /// `kT = 0` maps to the ground state.
    pub fn from_temperature(n: usize, levels: Vec<f64>, kt: f64) -> Result<Self> {
        if kt.is_nan() || kt < 0.0 {
            return Err(Error::InvalidSystem(format!("temperature {kt} must be ≥ 0")));
        }
        let beta = if kt == 0.0 { f64::INFINITY } else { 1.0 / kt };
        Self::new(n, levels, beta)
    }

    /// Equally spaced ladder `0, 1, …, d−1`.
    pub fn ladder(n: usize, d: usize, beta: f64) -> Result<Self> {
        Self::new(n, (0..d).map(|k| k as f64).collect(), beta)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.n, self.levels.clone(), beta)
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.levels.clone(), self.beta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_qubit(&self) -> bool {
        self.levels.len() == 2
    }

    /// `k_B T / E`, infinite at `β = 0`.
    pub fn kt(&self) -> f64 {
        1.0 / self.beta
    }

    /// `d^n`, if it fits in a `usize`.
    pub fn hilbert_dim(&self) -> Option<usize> {
        self.d().checked_pow(self.n as u32)
    }

    /// Unnormalized Boltzmann weights `e^{−βE_k}`.
    fn weights(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|&e| {
                if self.beta.is_infinite() {
                    if e == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (-self.beta * e).exp()
                }
            })
            .collect()
    }

    /// Local partition function `Z`.
    pub fn partition_function(&self) -> f64 {
        self.weights().iter().sum()
    }

    /// Local populations of `τ_β`.
    pub fn local_populations(&self) -> Vec<f64> {
        let w = self.weights();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    /// Ground-state population `p = 1/Z`.
    pub fn p(&self) -> f64 {
        1.0 / self.partition_function()
    }

    /// Boltzmann factor `v = e^{−β E₁}` of the first excited level.
    pub fn v(&self) -> f64 {
        if self.beta.is_infinite() {
            if self.levels[1] == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (-self.beta * self.levels[1]).exp()
        }
    }

    /// `S(τ_β)` in nats.
    pub fn local_entropy(&self) -> f64 {
        if self.beta.is_infinite() {
            let g = self.levels.iter().filter(|&&e| e == 0.0).count();
            return (g as f64).ln();
        }
        let ln_z = self.partition_function().ln();
        self.local_populations()
            .iter()
            .zip(&self.levels)
            .filter(|(&q, _)| q > 0.0)
            .map(|(&q, &e)| q * (self.beta * e + ln_z))
            .sum()
    }

    /// `Tr(H τ_β)` for one subsystem.
    pub fn local_mean_energy(&self) -> f64 {
        self.local_populations()
            .iter()
            .zip(&self.levels)
            .map(|(q, e)| q * e)
            .sum()
    }

    /// `n (Tr H/d − Tr H τ_β)`, the energy needed to reach `β′ = 0`.
    pub fn max_energy_budget(&self) -> f64 {
        let mean = self.levels.iter().sum::<f64>() / self.d() as f64;
        self.n as f64 * (mean - self.local_mean_energy())
    }

    /// Total energy of a computational basis state.
    pub fn energy_of_index(&self, mut x: usize) -> f64 {
        if self.is_qubit() {
            return self.levels[1] * x.count_ones() as f64;
        }
        let d = self.d();
        let mut e = 0.0;
        for _ in 0..self.n {
            e += self.levels[x % d];
            x /= d;
        }
        e
    }

    /// Populations of `τ_β^{⊗n}` in the computational basis.
    pub fn product_populations(&self) -> Result<Vec<f64>> {
        let dim = self
            .hilbert_dim()
            .filter(|&d| d <= 1 << 28)
            .ok_or(Error::DimensionTooLarge(usize::MAX))?;
        let local = self.local_populations();
        let mut out = vec![1.0];
        out.reserve(dim);
        for _ in 0..self.n {
            out = out.iter().flat_map(|&a| local.iter().map(move |&b| a * b)).collect();
        }
        Ok(out)
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.d(); self.n]
    }
}

/// `τ_β^{⊗n}` as a dense state together with the local `Z` and `p`.
pub fn thermal_state(sys: &ThermalSystem) -> Result<(DensityMatrix, f64, f64)> {
    let dim = sys.hilbert_dim().ok_or(Error::DimensionTooLarge(usize::MAX))?;
    check_dense_dim(dim)?;
    let rho = DensityMatrix::from_parts(ComplexMatrix::from_diag(&sys.product_populations()?), sys.dims())?;
    Ok((rho, sys.partition_function(), sys.p()))
}

/// `τ_β^{⊗n}` without the dense size limit.
pub fn thermal_structured(sys: &ThermalSystem) -> Result<StructuredState> {
    StructuredState::diagonal(sys.dims(), sys.product_populations()?)
}

/// Shannon entropy of a probability vector, `0 ln 0 = 0`.
pub fn shannon(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&q| q > 0.0).map(|&q| -q * q.ln()).sum()
}

/// Von Neumann entropy in nats.
pub fn entropy_vn<S: QuantumState + ?Sized>(rho: &S) -> Result<f64> {
    let spec = rho.spectrum()?;
    let s = shannon(&spec);
    Ok(s.clamp(0.0, (rho.dim() as f64).ln()))
}

/// `Tr(H_tot ρ)`.
pub fn mean_energy<S: QuantumState + ?Sized>(rho: &S, sys: &ThermalSystem) -> Result<f64> {
    if rho.dims().len() != sys.n() || rho.dims().iter().any(|&d| d != sys.d()) {
        return Err(Error::DimensionMismatch {
            expected: sys.hilbert_dim().unwrap_or(usize::MAX),
            got: rho.dim(),
        });
    }
    Ok((0..rho.dim())
        .map(|x| {
            let pop = rho.population(x);
            if pop == 0.0 {
                0.0
            } else {
                pop * sys.energy_of_index(x)
            }
        })
        .sum())
}

/// Inverse temperature `β′ ≤ β` whose thermal state carries `ΔE` more energy.
pub fn solve_beta_prime(sys: &ThermalSystem, delta_e: f64) -> Result<f64> {
    if delta_e.is_nan() || delta_e < 0.0 {
        return Err(Error::InvalidSystem(format!("energy budget {delta_e} must be ≥ 0")));
    }
    let max = sys.max_energy_budget();
    if delta_e > max + 1e-12 {
        return Err(Error::BudgetExceedsMax { budget: delta_e, max });
    }
    if delta_e == 0.0 {
        return Ok(sys.beta());
    }
    if delta_e >= max {
        return Ok(0.0);
    }
    let n = sys.n() as f64;
    let base = sys.local_mean_energy();
    let excess = |b: f64| -> f64 {
        let s = sys.with_beta(b).expect("nonnegative");
        n * (s.local_mean_energy() - base) - delta_e
    };
    // excess decreases in β′; positive at 0, negative at β
    let mut hi = sys.beta();
    if hi.is_infinite() {
        hi = 1.0;
        while excess(hi) > 0.0 {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::NotBracketed { lo: 0.0, hi });
            }
        }
    }
    let mut lo = 0.0;
    for _ in 0..tolerances::BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = excess(mid);
        if f.abs() < tolerances::BETA_RESIDUAL * 1e-3 {
            return Ok(mid);
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
