use thermocorr::energycost::{optimize_concurrence_constrained, work_cost, OptimizerConfig};
use thermocorr::entanglement::{bipartition_concurrence_of_state, bipartition_masks, cmax_thermal_2q};
use thermocorr::linalg::QuantumState;
use thermocorr::par::ExecMode;
use thermocorr::protocols::{dicke_protocol, ghz_subspace_protocol, verstraete_protocol, GhzVariant};
use thermocorr::thermal::ThermalSystem;
use thermocorr::thresholds::{
    p_from_kt, threshold_all_bip, threshold_gme_dicke, threshold_gme_dicke_many, threshold_two_qubit,
};

fn small_cfg() -> OptimizerConfig {
    OptimizerConfig {
        restarts: 6,
        max_iters: 800,
        ..OptimizerConfig::default()
    }
}

#[test]
fn structured_and_dense_final_states_agree() {
    let sys = ThermalSystem::qubits(4, 0.8).unwrap();
    let out = ghz_subspace_protocol(&sys, GhzVariant::AllBip).unwrap();
    let dense = out.final_state.to_dense().unwrap();
    for i in 0..16 {
        for j in 0..16 {
            assert!((dense.element(i, j) - out.final_state.element(i, j)).norm() < 1e-15);
        }
    }
    assert!((work_cost(&dense, &sys).unwrap() - out.work).abs() < 1e-12);
}

#[test]
fn all_bip_concurrence_vanishes_at_its_threshold() {
    let r = threshold_all_bip(5).unwrap();
    let at = |p: f64| {
        let sys = ThermalSystem::qubits(5, (p / (1.0 - p)).ln()).unwrap();
        let out = ghz_subspace_protocol(&sys, GhzVariant::AllBip).unwrap();
        bipartition_masks(5)
            .into_iter()
            .map(|m| bipartition_concurrence_of_state(&out.final_state, 5, m).unwrap())
            .fold(f64::INFINITY, f64::min)
    };
    assert!(at(r.p - 1e-3) < 1e-12);
    assert!(at(r.p + 1e-3) > 0.0);
}

#[test]
fn dicke_witness_changes_sign_at_threshold() {
    let r = threshold_gme_dicke(6, 1, None).unwrap();
    let witness = |kt: f64| {
        let sys = ThermalSystem::qubits(6, 1.0 / kt).unwrap();
        dicke_protocol(&sys, 1, None).unwrap().measures.witness.unwrap()
    };
    assert!(witness(r.kt_over_e * 0.98) > 0.0);
    assert!(witness(r.kt_over_e * 1.02) < 0.0);
}

#[test]
fn execution_modes_give_identical_thresholds() {
    let ns = [4, 6, 9];
    let a = threshold_gme_dicke_many(&ns, 1, ExecMode::Parallel).unwrap();
    let b = threshold_gme_dicke_many(&ns, 1, ExecMode::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn verstraete_matches_thermal_cmax_and_threshold() {
    let t = threshold_two_qubit().unwrap();
    for kt in [0.3, 0.8, 1.1] {
        let sys = ThermalSystem::qubits(2, 1.0 / kt).unwrap();
        let c = verstraete_protocol(&sys).unwrap().measures.concurrence.unwrap();
        assert!((c - cmax_thermal_2q(p_from_kt(kt))).abs() < 1e-12);
    }
    let hot = ThermalSystem::qubits(2, 1.0 / (t.kt_over_e * 1.01)).unwrap();
    assert_eq!(verstraete_protocol(&hot).unwrap().measures.concurrence, Some(0.0));
}

#[test]
fn optimizer_concurrence_grows_with_budget() {
    let sys = ThermalSystem::qubits(2, 2.0).unwrap();
    let cfg = small_cfg();
    let values: Vec<f64> = [0.3, 0.6, 1.0, 1.5]
        .iter()
        .map(|&b| optimize_concurrence_constrained(&sys, b, &cfg).unwrap().concurrence)
        .collect();
    for w in values.windows(2) {
        assert!(w[1] >= w[0] - 1e-6, "{values:?}");
    }
    let ceiling = cmax_thermal_2q(sys.p());
    assert!(values.iter().all(|&c| c <= ceiling + 1e-9));
}

#[test]
fn optimizer_respects_budget() {
    let sys = ThermalSystem::qubits(2, 1.5).unwrap();
    let r = optimize_concurrence_constrained(&sys, 0.4, &small_cfg()).unwrap();
    assert!(r.work <= 0.4 + 1e-9);
    let rho = thermocorr::thermal::thermal_state(&sys)
        .unwrap()
        .0
        .evolve(&r.unitary)
        .unwrap();
    assert!((work_cost(&rho, &sys).unwrap() - r.work).abs() < 1e-9);
}
