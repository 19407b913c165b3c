//! Work cost of protocols and energy-constrained creation of correlations.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::correlations::mi_energy_bound;
use crate::entanglement::concurrence_2q;
use crate::error::{Error, Result};
use crate::linalg::{rotate_rows, ComplexMatrix, DensityMatrix, QuantumState, C64};
use crate::optim::nelder_mead;
use crate::par::{map_indexed, ExecMode};
use crate::protocols::{dicke_protocol, verstraete_protocol};
use crate::thermal::{mean_energy, thermal_state, ThermalSystem};
use crate::thresholds::threshold_two_qubit;
use crate::tolerances;

/// `Tr(H_tot(ρ_f − τ_β^{⊗n}))` in units of `E`.
pub fn work_cost<S: QuantumState + ?Sized>(rho_f: &S, sys: &ThermalSystem) -> Result<f64> {
    Ok(mean_energy(rho_f, sys)? - sys.n() as f64 * sys.local_mean_energy())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    /// GHZ-subspace rotation of the two extreme populations.
    Ghz,
    /// GHZ protocol run exactly at the all-bipartition threshold.
    LeaveSeparable,
    /// W-state protocol, closed-form expression.
    Wstate,
    /// Rotation into the Bell/GHZ basis saturating the mutual information.
    FullMi,
}

/// Closed-form work of the named protocol; `n` is taken from `sys`.
///
/// ```text
/// ghz             nE(1 − vⁿ) / (2(1+v)ⁿ)
/// leave-separable nE(1+√2) / ((1+√2)^{2/n} + 1)ⁿ
/// full-mi         n(Tr H/d − Tr(H τ_β))
/// ```
///
/// `wstate` evaluates its closed form literally; compare it with
/// [`wstate_work_report`], which also gives the direct value.
pub fn protocol_work_closed_form(kind: ProtocolKind, sys: &ThermalSystem) -> Result<f64> {
    let n = sys.n();
    let nf = n as f64;
    if kind == ProtocolKind::FullMi {
        return Ok(sys.max_energy_budget());
    }
    if !sys.is_qubit() {
        return Err(Error::BadProtocol(format!("{kind:?} work needs qubits")));
    }
    if n < 2 {
        return Err(Error::BadProtocol("need at least two qubits".into()));
    }
    let e = sys.levels()[1];
    let v = sys.v();
    Ok(match kind {
        ProtocolKind::Ghz => nf * e * (1.0 - v.powi(n as i32)) / (2.0 * (1.0 + v).powi(n as i32)),
        ProtocolKind::LeaveSeparable => {
            let s = 1.0 + SQRT_2;
            nf * e * s / (s.powf(2.0 / nf) + 1.0).powi(n as i32)
        }
        ProtocolKind::Wstate => {
            if n < 3 {
                return Err(Error::BadProtocol("W-state work needs at least three qubits".into()));
            }
            let vp = |k: i32| v.powi(k);
            let ni = n as i32;
            let bracket = (nf - 1.0) * (v - vp(ni - 1)) + (1.0 - v) + nf * vp(ni - 3) - nf * vp(ni)
                + (nf * nf - nf) * (vp(2) - vp(ni - 2))
                + 3.0 * (vp(ni) - vp(ni - 3));
            e * (1.0 - v).powi(-ni) * bracket
        }
        ProtocolKind::FullMi => unreachable!(),
    })
}

/// Closed-form W-state work next to the directly computed work of the
/// `k = 1` Dicke protocol with default fill.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkComparison {
    pub closed_form: f64,
    pub direct: f64,
    pub discrepancy: f64,
}

pub fn wstate_work_report(sys: &ThermalSystem) -> Result<WorkComparison> {
    let closed_form = protocol_work_closed_form(ProtocolKind::Wstate, sys)?;
    let direct = dicke_protocol(sys, 1, None)?.work;
    Ok(WorkComparison {
        closed_form,
        direct,
        discrepancy: (closed_form - direct).abs(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub simplex_tol: f64,
    pub penalty_weight_schedule: Vec<f64>,
    pub seed: u64,
    pub mode: ExecMode,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 2000,
            simplex_tol: 1e-10,
            penalty_weight_schedule: vec![1e2, 1e4, 1e6],
            seed: 42,
            mode: ExecMode::Parallel,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSystem(format!("optimizer config: {msg}")));
        if self.restarts == 0 {
            return bad("restarts must be ≥ 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be ≥ 1");
        }
        if !(self.simplex_tol > 0.0) {
            return bad("simplex_tol must be > 0");
        }
        if self.penalty_weight_schedule.is_empty() || self.penalty_weight_schedule.iter().any(|w| !(*w > 0.0)) {
            return bad("penalty weights must be positive");
        }
        Ok(())
    }
}

/// Rotation planes in order of application.
const PLANES: [(usize, usize); 6] = [(2, 3), (1, 3), (1, 2), (0, 3), (0, 2), (0, 1)];
const N_PARAMS: usize = 16;

/// `U = D R₀₁ R₀₂ R₀₃ R₁₂ R₁₃ R₂₃` from six `(θ, φ)` pairs followed by four
/// diagonal phases.
pub fn unitary_from_params(x: &[f64]) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4);
    for (k, &(i, j)) in PLANES.iter().enumerate() {
        rotate_rows(&mut u, i, j, x[2 * k], x[2 * k + 1]).expect("planes are valid");
    }
    for r in 0..4 {
        let phase = C64::from_polar(1.0, x[12 + r]);
        for c in 0..4 {
            u[(r, c)] *= phase;
        }
    }
    u
}

/// Concurrence and work of `U τ U†` for two qubits.
struct TwoQubit {
    tau: ComplexMatrix,
    energies: [f64; 4],
    initial_energy: f64,
}

impl TwoQubit {
    fn new(sys: &ThermalSystem) -> Result<Self> {
        if sys.n() != 2 || !sys.is_qubit() {
            return Err(Error::BadProtocol("needs exactly two qubits".into()));
        }
        let (tau, _, _) = thermal_state(sys)?;
        let energies = [0, 1, 2, 3].map(|x| sys.energy_of_index(x));
        let initial_energy = 2.0 * sys.local_mean_energy();
        Ok(Self {
            tau: tau.into_matrix(),
            energies,
            initial_energy,
        })
    }

    fn evaluate(&self, u: &ComplexMatrix) -> (f64, f64) {
        let rho = u.conjugate(&self.tau);
        let energy: f64 = (0..4).map(|i| rho[(i, i)].re * self.energies[i]).sum();
        let state = DensityMatrix::from_parts(rho, vec![2, 2]).expect("4x4 two-qubit state");
        let c = concurrence_2q(&state).unwrap_or(0.0);
        (c, energy - self.initial_energy)
    }

    fn penalized(&self, u: &ComplexMatrix, budget: f64, weight: f64) -> f64 {
        let (c, w) = self.evaluate(u);
        let excess = (w - budget).max(0.0);
        -c + weight * excess * excess
    }

    /// Largest `t ∈ [0, 1]` such that `U(t x)` respects the budget; `t = 0`
    /// is the identity, which costs nothing.
    fn project<F: Fn(&[f64]) -> ComplexMatrix>(&self, x: &[f64], budget: f64, build: F) -> (f64, f64, Vec<f64>) {
        let scaled = |t: f64| -> Vec<f64> { x.iter().map(|v| v * t).collect() };
        let feasible = |w: f64| w <= budget + tolerances::WORK_SLACK;
        let (c, w) = self.evaluate(&build(x));
        if feasible(w) {
            return (c, w, x.to_vec());
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if feasible(self.evaluate(&build(&scaled(mid))).1) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let xs = scaled(lo);
        let (c, w) = self.evaluate(&build(&xs));
        (c, w, xs)
    }
}

/// Best concurrence found over all two-qubit unitaries with work `≤ ΔE`.
#[derive(Clone, Debug)]
pub struct ConstrainedOptimum {
    pub concurrence: f64,
    pub work: f64,
    pub unitary: ComplexMatrix,
    pub params: Vec<f64>,
}

/// Nelder–Mead over the 16-parameter unitary family with a quadratic work
/// penalty, restarted from the two-angle ansatz and from seeded random points.
pub fn optimize_concurrence_constrained(
    sys: &ThermalSystem,
    delta_e: f64,
    cfg: &OptimizerConfig,
) -> Result<ConstrainedOptimum> {
    cfg.validate()?;
    check_budget(delta_e)?;
    let model = TwoQubit::new(sys)?;
    let warm = ansatz_two_angle(sys, delta_e)?;
    let mut warm_x = vec![0.0; N_PARAMS];
    warm_x[0] = warm.angles.0;
    warm_x[6] = warm.angles.1;

    let runs = map_indexed(cfg.mode, cfg.restarts, |idx| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(idx as u64);
        let (start, step) = match idx {
            0 => (warm_x.clone(), 0.1),
            _ if idx % 2 == 1 => {
                let noise = Normal::new(0.0, 0.3).expect("valid sigma");
                (warm_x.iter().map(|v| v + noise.sample(&mut rng)).collect(), 0.2)
            }
            _ => ((0..N_PARAMS).map(|_| rng.random_range(-PI..PI)).collect(), 0.5),
        };
        let mut x = start;
        for &weight in &cfg.penalty_weight_schedule {
            let objective = |p: &[f64]| model.penalized(&unitary_from_params(p), delta_e, weight);
            x = nelder_mead(objective, &x, step, cfg.max_iters, cfg.simplex_tol).x;
        }
        model.project(&x, delta_e, unitary_from_params)
    });

    let (mut best_c, mut best_w, mut best_x) = {
        let (c, w, _) = model.project(&warm_x, delta_e, unitary_from_params);
        (c, w, warm_x.clone())
    };
    for (c, w, x) in runs {
        if c > best_c {
            (best_c, best_w, best_x) = (c, w, x);
        }
    }
    Ok(ConstrainedOptimum {
        concurrence: best_c,
        work: best_w,
        unitary: unitary_from_params(&best_x),
        params: best_x,
    })
}

fn check_budget(delta_e: f64) -> Result<()> {
    if delta_e.is_nan() || delta_e < 0.0 {
        return Err(Error::InvalidSystem(format!("energy budget {delta_e} must be ≥ 0")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzResult {
    pub concurrence: f64,
    pub work: f64,
    /// Angle in the `{|10⟩, |11⟩}` plane, then in the `{|00⟩, |11⟩}` plane.
    pub angles: (f64, f64),
}

fn ansatz_unitary(a: f64, b: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4);
    rotate_rows(&mut u, 2, 3, a, 0.0).expect("valid plane");
    rotate_rows(&mut u, 0, 3, b, 0.0).expect("valid plane");
    u
}

const ANSATZ_GRID: usize = 201;

/// Rotation in the `{|10⟩, |11⟩}` plane followed by one in the
/// `{|00⟩, |11⟩}` plane: grid search on `[−π/2, π/2]²`, then a local refine.
pub fn ansatz_two_angle(sys: &ThermalSystem, delta_e: f64) -> Result<AnsatzResult> {
    check_budget(delta_e)?;
    let model = TwoQubit::new(sys)?;
    let feasible = |w: f64| w <= delta_e + tolerances::WORK_SLACK;
    let grid = |i: usize| -FRAC_PI_2 + PI * i as f64 / (ANSATZ_GRID - 1) as f64;
    let mut best = (0.0, 0.0, (0.0, 0.0));
    let mut found = false;
    for i in 0..ANSATZ_GRID {
        for j in 0..ANSATZ_GRID {
            let (a, b) = (grid(i), grid(j));
            let (c, w) = model.evaluate(&ansatz_unitary(a, b));
            if feasible(w) && (!found || c > best.0) {
                best = (c, w, (a, b));
                found = true;
            }
        }
    }
    let build = |x: &[f64]| ansatz_unitary(x[0], x[1]);
    let start = [best.2 .0, best.2 .1];
    let mut x = start.to_vec();
    for weight in [1e4, 1e8] {
        let objective = |p: &[f64]| model.penalized(&build(p), delta_e, weight);
        x = nelder_mead(objective, &x, PI / (ANSATZ_GRID - 1) as f64, 500, 1e-14).x;
    }
    let (c, w, xs) = model.project(&x, delta_e, build);
    if c > best.0 {
        best = (c, w, (xs[0], xs[1]));
    }
    Ok(AnsatzResult {
        concurrence: best.0,
        work: best.1,
        angles: best.2,
    })
}

/// Concurrence below this counts as no entanglement.
pub const ENTANGLEMENT_FLOOR: f64 = 1e-4;

/// Smallest budget for which the optimizer finds concurrence above
/// [`ENTANGLEMENT_FLOOR`].
pub fn min_energy_to_entangle(sys: &ThermalSystem, cfg: &OptimizerConfig) -> Result<f64> {
    if sys.n() != 2 || !sys.is_qubit() {
        return Err(Error::BadProtocol("needs exactly two qubits".into()));
    }
    if sys.beta().is_infinite() {
        return Ok(0.0);
    }
    let limit = threshold_two_qubit()?.kt_over_e;
    if sys.kt() * sys.levels()[1].recip() >= limit {
        return Err(Error::AboveThreshold(sys.kt()));
    }
    let full = verstraete_protocol(sys)?.work;
    let entangles = |budget: f64| -> Result<bool> {
        Ok(optimize_concurrence_constrained(sys, budget, cfg)?.concurrence > ENTANGLEMENT_FLOOR)
    };
    if !entangles(full)? {
        return Err(Error::AboveThreshold(sys.kt()));
    }
    let (mut lo, mut hi) = (0.0, full);
    while hi - lo > 1e-5 * full.max(1e-3) {
        let mid = 0.5 * (lo + hi);
        if entangles(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    MiVsEnergy,
    ConcurrenceVsEnergy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub kt_over_e: f64,
    pub measure: String,
    pub method: String,
}

/// A measure against the available energy `ΔE/E` for two qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub x: Vec<f64>,
    /// Exact optimum (mutual information) or optimizer result (concurrence).
    pub y: Vec<f64>,
    /// Two-angle ansatz, concurrence sweeps only.
    pub y_ansatz: Option<Vec<f64>>,
    pub meta: SweepMeta,
}

/// Mutual information runs up to the full budget `n(Tr H/d − Tr Hτ)`;
/// concurrence runs up to the work of the optimal unrestricted protocol.
pub fn sweep_curve(kind: SweepKind, kt_over_e: f64, points: usize, cfg: &OptimizerConfig) -> Result<SweepCurve> {
    if points < 2 {
        return Err(Error::InvalidSystem("a sweep needs at least two points".into()));
    }
    if !(kt_over_e > 0.0) || !kt_over_e.is_finite() {
        return Err(Error::InvalidSystem(format!(
            "kT/E = {kt_over_e} must be positive and finite"
        )));
    }
    let sys = ThermalSystem::qubits(2, 1.0 / kt_over_e)?;
    let top = match kind {
        SweepKind::MiVsEnergy => sys.max_energy_budget(),
        SweepKind::ConcurrenceVsEnergy => verstraete_protocol(&sys)?.work,
    };
    let x: Vec<f64> = (0..points).map(|i| top * i as f64 / (points - 1) as f64).collect();
    let meta = |measure: &str, method: &str| SweepMeta {
        kt_over_e,
        measure: measure.into(),
        method: method.into(),
    };
    match kind {
        SweepKind::MiVsEnergy => {
            let y = x
                .iter()
                .map(|&budget| mi_energy_bound(&sys, budget.min(top)))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepCurve {
                x,
                y,
                y_ansatz: None,
                meta: meta("mutual-information", "thermal-marginal-bound"),
            })
        }
        SweepKind::ConcurrenceVsEnergy => {
            cfg.validate()?;
            let pairs = map_indexed(cfg.mode, points, |i| -> Result<(f64, f64)> {
                let opt = optimize_concurrence_constrained(&sys, x[i], cfg)?;
                let ans = ansatz_two_angle(&sys, x[i])?;
                Ok((opt.concurrence.max(ans.concurrence), ans.concurrence))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let (y, ya) = pairs.into_iter().unzip();
            Ok(SweepCurve {
                x,
                y,
                y_ansatz: Some(ya),
                meta: meta("concurrence", "nelder-mead+two-angle-ansatz"),
            })
        }
    }
}
