//! Randomized invariant suite: spectrum preservation, work non-negativity,
//! mutual-information bound domination and entropy invariance on the unitary
//! orbit of thermal states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correlations::{mi_max_bound, mutual_information};
use crate::error::Result;
use crate::linalg::{random_unitary, QuantumState};
use crate::par::{map_indexed, ExecMode};
use crate::protocols::{apply_protocol, dicke_protocol, ghz_subspace_protocol, GhzVariant, ProtocolOutcome};
use crate::thermal::{entropy_vn, ThermalSystem};

/// Absolute tolerance of every check.
pub const SELFTEST_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs `trials` seeded trials. Most apply a Haar-random unitary to a random
/// small thermal system; every tenth runs a structured protocol instead.
pub fn run_selftest(trials: usize, seed: u64, mode: ExecMode) -> SelftestReport {
    let results = map_indexed(mode, trials, |i| trial(i, seed));
    let mut checks = 0;
    let mut violations = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((count, failures)) => {
                checks += count;
                violations.extend(failures.into_iter().map(|f| format!("trial {i}: {f}")));
            }
            Err(e) => violations.push(format!("trial {i}: error {e}")),
        }
    }
    SelftestReport {
        trials,
        seed,
        checks,
        violations,
    }
}

fn trial(index: usize, seed: u64) -> Result<(usize, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let beta = if rng.random_bool(0.05) {
        f64::INFINITY
    } else {
        rng.random_range(0.0..6.0)
    };
    let (sys, outcome) = if index % 10 == 9 {
        let n = rng.random_range(3..=7);
        let sys = ThermalSystem::qubits(n, beta)?;
        let out = if rng.random_bool(0.5) {
            ghz_subspace_protocol(&sys, GhzVariant::AllBip)?
        } else {
            dicke_protocol(&sys, rng.random_range(1..n), None)?
        };
        (sys, out)
    } else {
        let (n, d) = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)][rng.random_range(0..5)];
        let sys = ThermalSystem::ladder(n, d, beta)?;
        let u = random_unitary(sys.hilbert_dim().unwrap_or(0), &mut rng);
        (sys.clone(), apply_protocol(&u, &sys)?)
    };
    check(&sys, &outcome)
}

fn check(sys: &ThermalSystem, out: &ProtocolOutcome) -> Result<(usize, Vec<String>)> {
    let mut failures = Vec::new();
    let mut thermal = sys.product_populations()?;
    thermal.sort_by(f64::total_cmp);
    let spectrum = out.final_state.spectrum()?;
    let drift = spectrum
        .iter()
        .zip(&thermal)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if drift > SELFTEST_TOL {
        failures.push(format!("spectrum drift {drift:e}"));
    }
    if out.work < -SELFTEST_TOL {
        failures.push(format!("negative work {}", out.work));
    }
    let mi = match out.measures.mutual_info {
        Some(v) => v,
        None => mutual_information(&out.final_state)?.value,
    };
    let bound = mi_max_bound(sys);
    if mi > bound + SELFTEST_TOL {
        failures.push(format!("mutual information {mi} above bound {bound}"));
    }
    let s_initial = sys.n() as f64 * sys.local_entropy();
    let s_final = entropy_vn(&out.final_state)?;
    if (s_final - s_initial).abs() > SELFTEST_TOL {
        failures.push(format!("entropy changed by {:e}", s_final - s_initial));
    }
    Ok((4, failures))
}
