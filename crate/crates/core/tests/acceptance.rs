//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thermocorr::correlations::{mi_energy_bound, mi_max_bound};
use thermocorr::energycost::{
    optimize_concurrence_constrained, protocol_work_closed_form, OptimizerConfig, ProtocolKind,
};
use thermocorr::entanglement::{cmax_thermal_2q, concurrence_2q, dicke_witness, SpectrumVector};
use thermocorr::linalg::{random_unitary, DensityMatrix, QuantumState};
use thermocorr::par::ExecMode;
use thermocorr::protocols::{
    bell_protocol, circulant_heating_protocol, circulant_plan, dicke_protocol, ghz_subspace_protocol,
    verstraete_protocol, GhzVariant,
};
use thermocorr::selftest::run_selftest;
use thermocorr::thermal::{thermal_state, ThermalSystem};
use thermocorr::thresholds::{
    kt_from_p, separability_expression, threshold_all_bip, threshold_gme_dicke_many, threshold_gme_ghz,
    threshold_single_bip, threshold_two_qubit,
};

// criterion 1
const P_MIN: f64 = 0.698;
const P_MIN_TOL: f64 = 1e-3;
const KT_MAX: f64 = 1.19;
const KT_MAX_TOL: f64 = 1e-2;
// criterion 2
const MI_TOL: f64 = 1e-9;
// criterion 3
const ORACLE_SPECTRA: usize = 50;
const ORACLE_UNITARIES: usize = 500;
const ORACLE_TOL: f64 = 1e-6;
// criterion 4
const CLOSED_FORM_REL: f64 = 0.05;
const GHZ_LIMIT_REL: f64 = 0.01;
// criterion 5
const BOUNDARY_TOL: f64 = 1e-6;
// criterion 6
const GROUND_CURVE_TOL: f64 = 2e-3;
const UNLIMITED_TOL: f64 = 1e-3;
const ABOVE_THRESHOLD_FLOOR: f64 = 1e-9;
// criterion 7
const WORK_TOL: f64 = 1e-9;
// criterion 8
const MARGINAL_TOL: f64 = 1e-9;
const MI_BOUND_TOL: f64 = 1e-8;
// criterion 9
const RATIO_RANGE: (f64, f64) = (0.5, 2.0);
const W3_TOL: f64 = 1e-12;
// criterion 10
const SELFTEST_TRIALS: usize = 1000;
const SELFTEST_SEED: u64 = 2024;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn two_qubit_threshold() -> Outcome {
    let r = threshold_two_qubit().expect("root");
    let ok = (r.p - P_MIN).abs() <= P_MIN_TOL && (r.kt_over_e - KT_MAX).abs() <= KT_MAX_TOL;
    outcome(ok, format!("p_min = {:.6}, kT/E = {:.6}", r.p, r.kt_over_e))
}

fn bound_saturation() -> Outcome {
    let mut worst: f64 = 0.0;
    for beta in [0.1, 0.5, 1.0, 2.0, 5.0] {
        for d in [2, 3] {
            for n in [2, 3] {
                let sys = ThermalSystem::ladder(n, d, beta).expect("system");
                let mi = bell_protocol(&sys)
                    .expect("protocol")
                    .measures
                    .mutual_info
                    .expect("small");
                worst = worst.max((mi - mi_max_bound(&sys)).abs());
            }
        }
    }
    outcome(worst <= MI_TOL, format!("max |I − n(ln d − S)| = {worst:.2e}"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..ORACLE_SPECTRA {
        let sys = ThermalSystem::qubits(2, rng.random_range(0.2..5.0)).expect("system");
        let best = verstraete_protocol(&sys)
            .expect("protocol")
            .measures
            .concurrence
            .expect("two qubits");
        let (tau, _, _) = thermal_state(&sys).expect("state");
        let mut sampled: f64 = 0.0;
        for _ in 0..ORACLE_UNITARIES {
            let u = random_unitary(4, &mut rng);
            sampled = sampled.max(concurrence_2q(&tau.evolve(&u).expect("evolve")).expect("concurrence"));
        }
        worst_gap = worst_gap.max(sampled - best);
    }
    outcome(
        worst_gap <= ORACLE_TOL,
        format!("max(random − protocol) = {worst_gap:.2e} over {ORACLE_SPECTRA} spectra"),
    )
}

fn closed_form_thresholds() -> Outcome {
    let rel = |r: &thermocorr::thresholds::ThresholdResult| (r.kt_over_e / r.closed_form.unwrap() - 1.0).abs();
    let all = threshold_all_bip(20).expect("root");
    let single = threshold_single_bip(20).expect("root");
    let ghz20 = threshold_gme_ghz(20).expect("root");
    let ghz40 = threshold_gme_ghz(40).expect("root");
    let ok = rel(&all) <= CLOSED_FORM_REL
        && rel(&single) <= CLOSED_FORM_REL
        && rel(&ghz20) <= CLOSED_FORM_REL
        && rel(&ghz40) <= GHZ_LIMIT_REL;
    outcome(
        ok,
        format!(
            "n=20 rel. dev. all-bip {:.4}, single-bip {:.4}, GHZ-GME {:.2e}; n=40 GHZ-GME {:.2e}",
            rel(&all),
            rel(&single),
            rel(&ghz20),
            rel(&ghz40)
        ),
    )
}

/// Boundary of the spectral criterion from the full sorted thermal spectrum.
fn spectral_boundary(n: usize) -> f64 {
    let f = |p: f64| {
        let sys = ThermalSystem::qubits(n, (p / (1.0 - p)).ln()).expect("system");
        let spec = SpectrumVector::from_unsorted(sys.product_populations().expect("pops")).expect("spectrum");
        separability_expression(&spec).expect("even length")
    };
    let (mut lo, mut hi) = (0.5 + 1e-12, 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    kt_from_p(0.5 * (lo + hi))
}

fn separability_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=10 {
        let a = spectral_boundary(n);
        let b = threshold_single_bip(n).expect("root").kt_over_e;
        worst = worst.max((a - b).abs());
    }
    outcome(
        worst <= BOUNDARY_TOL,
        format!("max |T_boundary − T_single| = {worst:.2e} for n = 3..10"),
    )
}

fn energy_constrained_optimizer() -> Outcome {
    let cfg = OptimizerConfig::default();
    let cold = ThermalSystem::qubits(2, f64::INFINITY).expect("system");
    let mut worst_cold: f64 = 0.0;
    for i in 1..=20 {
        let budget = i as f64 / 20.0;
        let r = optimize_concurrence_constrained(&cold, budget, &cfg).expect("optimizer");
        let target = (budget * (2.0 - budget)).sqrt();
        worst_cold = worst_cold.max((r.concurrence - target).abs());
    }
    let mut worst_unlimited: f64 = 0.0;
    for kt in [0.1, 0.5, 1.0] {
        let sys = ThermalSystem::qubits(2, 1.0 / kt).expect("system");
        let r = optimize_concurrence_constrained(&sys, f64::INFINITY, &cfg).expect("optimizer");
        worst_unlimited = worst_unlimited.max((r.concurrence - cmax_thermal_2q(sys.p())).abs());
    }
    let hot = ThermalSystem::qubits(2, 1.0 / 1.3).expect("system");
    let mut hot_max: f64 = 0.0;
    for budget in [0.05, 0.2, 0.5, f64::INFINITY] {
        hot_max = hot_max.max(
            optimize_concurrence_constrained(&hot, budget, &cfg)
                .expect("optimizer")
                .concurrence,
        );
    }
    let ok = worst_cold <= GROUND_CURVE_TOL && worst_unlimited <= UNLIMITED_TOL && hot_max <= ABOVE_THRESHOLD_FLOOR;
    outcome(
        ok,
        format!("T=0 curve dev. {worst_cold:.2e}, unlimited dev. {worst_unlimited:.2e}, kT/E=1.3 max C {hot_max:.2e}"),
    )
}

fn work_closed_forms() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        for beta in [0.05, 0.3, 1.0, 2.0, 5.0, f64::INFINITY] {
            let sys = ThermalSystem::qubits(n, beta).expect("system");
            let closed = protocol_work_closed_form(ProtocolKind::Ghz, &sys).expect("closed form");
            let direct = ghz_subspace_protocol(&sys, GhzVariant::AllBip).expect("protocol").work;
            worst = worst.max((closed - direct).abs());
        }
    }
    let sep: Vec<f64> = (4..=30)
        .map(|n| {
            let sys = ThermalSystem::qubits(n, 1.0).expect("system");
            protocol_work_closed_form(ProtocolKind::LeaveSeparable, &sys).expect("closed form")
        })
        .collect();
    let decreasing = sep.windows(2).all(|w| w[1] < w[0]);
    outcome(
        worst <= WORK_TOL && decreasing,
        format!("max |closed − direct| = {worst:.2e}; W_sep decreasing on n = 4..30: {decreasing}"),
    )
}

fn circulant_protocol() -> Outcome {
    let mut worst_marginal: f64 = 0.0;
    let mut worst_mi: f64 = 0.0;
    let mut min_alpha = f64::INFINITY;
    for d in [2, 3, 4] {
        for beta in [0.3, 1.0, 2.5, f64::INFINITY] {
            for frac in [0.0, 0.25, 0.6, 0.9] {
                let sys = ThermalSystem::ladder(2, d, beta).expect("system");
                let bp = if beta.is_infinite() {
                    [0.0, 0.5, LN_2, 3.0][(frac * 4.0) as usize]
                } else {
                    frac * beta
                };
                let plan = circulant_plan(&sys, bp).expect("plan");
                min_alpha = plan.alphas.iter().copied().fold(min_alpha, f64::min);
                let out = circulant_heating_protocol(&sys, bp).expect("protocol");
                let target = sys.with_beta(bp).expect("system").local_populations();
                for keep in [0, 1] {
                    let r = out.final_state.reduced(&[keep]).expect("marginal");
                    let expected = DensityMatrix::from_diag(&target, vec![d]).expect("state");
                    worst_marginal = worst_marginal.max(r.matrix().max_abs_diff(expected.matrix()));
                }
                let bound = mi_energy_bound(&sys, out.work).expect("bound");
                worst_mi = worst_mi.max((out.measures.mutual_info.expect("small") - bound).abs());
            }
        }
    }
    outcome(
        worst_marginal <= MARGINAL_TOL && worst_mi <= MI_BOUND_TOL && min_alpha >= 0.0,
        format!("marginal dev. {worst_marginal:.2e}, MI dev. {worst_mi:.2e}, min α {min_alpha:.3e}"),
    )
}

fn dicke_scaling() -> Outcome {
    let ns = [8, 12, 16, 20];
    let results = threshold_gme_dicke_many(&ns, 1, ExecMode::Parallel).expect("thresholds");
    let ratios: Vec<f64> = results
        .iter()
        .zip(ns)
        .map(|(r, n)| r.kt_over_e / (n as f64 / (2.0 * (n as f64).ln())))
        .collect();
    let in_range = ratios.iter().all(|r| (RATIO_RANGE.0..=RATIO_RANGE.1).contains(r));
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let cold = ThermalSystem::qubits(3, f64::INFINITY).expect("system");
    let w3 = dicke_protocol(&cold, 1, None).expect("protocol");
    let w3_witness = dicke_witness(&w3.final_state, 3, 1).expect("witness");
    let exact = (w3_witness - 1.0).abs() <= W3_TOL;
    outcome(
        in_range && increasing && exact,
        format!(
            "ratios {:?}, increasing: {increasing}, W3 witness = {w3_witness}",
            ratios.iter().map(|r| (r * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    )
}

fn invariant_suite() -> Outcome {
    let r = run_selftest(SELFTEST_TRIALS, SELFTEST_SEED, ExecMode::Parallel);
    let first = r.violations.first().cloned().unwrap_or_default();
    outcome(
        r.passed(),
        format!(
            "{} checks over {} trials, {} violations {first}",
            r.checks,
            r.trials,
            r.violations.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("two-qubit threshold", two_qubit_threshold, Duration::from_secs(1)),
        ("bound saturation", bound_saturation, Duration::from_secs(10)),
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(120)),
        (
            "closed-form thresholds",
            closed_form_thresholds,
            Duration::from_secs(30),
        ),
        (
            "separability consistency",
            separability_consistency,
            Duration::from_secs(10),
        ),
        (
            "energy-constrained optimizer",
            energy_constrained_optimizer,
            Duration::from_secs(600),
        ),
        ("work closed forms", work_closed_forms, Duration::from_secs(10)),
        ("circulant protocol", circulant_protocol, Duration::from_secs(10)),
        ("Dicke GME scaling", dicke_scaling, Duration::from_secs(300)),
        ("invariant suite", invariant_suite, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let ok = o.ok && elapsed <= *limit;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} [{}] {} ({:.2} s, limit {} s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            name,
            o.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
