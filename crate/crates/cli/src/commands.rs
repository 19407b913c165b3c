use std::collections::BTreeMap;

use serde_json::{json, Value};
use thermocorr::energycost::{
    ansatz_two_angle, optimize_concurrence_constrained, protocol_work_closed_form, sweep_curve, wstate_work_report,
    OptimizerConfig, ProtocolKind, SweepKind,
};
use thermocorr::entanglement::cmax_thermal_2q;
use thermocorr::par::{map_indexed, ExecMode};
use thermocorr::protocols::{
    bell_protocol, circulant_heating_protocol, circulant_plan, dicke_protocol, ghz_subspace_protocol,
    verstraete_protocol, xstate_protocol, GhzVariant, ProtocolOutcome,
};
use thermocorr::selftest::run_selftest;
use thermocorr::thermal::{solve_beta_prime, ThermalSystem};
use thermocorr::thresholds::{
    separability_boundary, threshold_all_bip, threshold_gme_dicke_many, threshold_gme_ghz, threshold_single_bip,
    threshold_two_qubit, ThresholdResult,
};
use thermocorr::Error;

use crate::args::{Family, OptimizeArgs, ProtocolArgs, ProtocolName, SweepArgs, SweepKindArg, ThresholdArgs};
use crate::output::{num, num_or_inf, Cell, Report, Table};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BadIndex { .. }
            | Error::DimensionTooLarge(_)
            | Error::InvalidSystem(_)
            | Error::BudgetExceedsMax { .. }
            | Error::BadExcitation { .. }
            | Error::FillTooLarge { .. }
            | Error::NotEqualSpacing
            | Error::BadProtocol(_)
            | Error::AboveThreshold(_) => CliError::Validation(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Validation(msg.into()))
}

fn check_kt(kt: f64) -> Result<f64, CliError> {
    if kt > 0.0 && kt.is_finite() {
        Ok(1.0 / kt)
    } else {
        invalid(format!("--kT must be positive and finite, got {kt}"))
    }
}

fn exec_mode() -> ExecMode {
    ExecMode::Parallel
}

fn inputs(command: &str, pairs: Vec<(&str, Value)>) -> BTreeMap<String, Value> {
    let mut m: BTreeMap<String, Value> = pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    m.insert("command".into(), json!(command));
    m
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::TwoQubit => "two-qubit",
        Family::AllBip => "all-bip",
        Family::SingleBip => "single-bip",
        Family::GmeGhz => "gme-ghz",
        Family::GmeDicke => "gme-dicke",
        Family::UpperQubitQudit => "upper-qubit-qudit",
    }
}

pub fn threshold(a: &ThresholdArgs) -> Result<Report, CliError> {
    let ns: Vec<usize> = match a.family {
        Family::TwoQubit if a.n.is_empty() || a.n == [2] => vec![2],
        Family::TwoQubit => return invalid("the two-qubit family has n = 2"),
        _ if a.n.is_empty() => return invalid("--n is required for this family"),
        _ => a.n.clone(),
    };
    let mode = exec_mode();
    let results: Vec<ThresholdResult> = match a.family {
        Family::TwoQubit => vec![threshold_two_qubit()?],
        Family::GmeDicke => threshold_gme_dicke_many(&ns, a.k, mode)?,
        other => {
            let solve = match other {
                Family::AllBip => threshold_all_bip,
                Family::SingleBip => threshold_single_bip,
                Family::GmeGhz => threshold_gme_ghz,
                _ => separability_boundary,
            };
            map_indexed(mode, ns.len(), |i| solve(ns[i]))
                .into_iter()
                .collect::<Result<_, _>>()?
        }
    };
    let family = family_name(a.family);
    let rows_json: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "family": family,
                "n": r.n,
                "k": r.k,
                "kT_over_E": num(r.kt_over_e),
                "p": num(r.p),
                "closed_form": r.closed_form.map(num),
                "residual": num(r.residual),
                "iterations": r.iterations,
            })
        })
        .collect();
    let rows = results
        .iter()
        .map(|r| {
            vec![
                family.into(),
                r.n.into(),
                r.k.into(),
                r.kt_over_e.into(),
                r.p.into(),
                r.closed_form.into(),
                r.residual.into(),
                r.iterations.into(),
            ]
        })
        .collect();
    let max_residual = results.iter().map(|r| r.residual).fold(0.0, f64::max);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("max_residual".into(), num(max_residual));
    let mut pairs = vec![("family", json!(family)), ("n", json!(ns))];
    if a.family == Family::GmeDicke {
        pairs.push(("k", json!(a.k)));
    }
    Ok(Report {
        inputs: inputs("threshold", pairs),
        results: json!({ "thresholds": rows_json }),
        diagnostics,
        table: Table {
            header: vec![
                "family",
                "n",
                "k",
                "kT_over_E",
                "p",
                "closed_form",
                "residual",
                "iterations",
            ],
            rows,
        },
    })
}

fn protocol_name(p: ProtocolName) -> &'static str {
    match p {
        ProtocolName::Bell => "bell",
        ProtocolName::Verstraete => "verstraete",
        ProtocolName::Ghz => "ghz",
        ProtocolName::GhzSingle => "ghz-single",
        ProtocolName::Xstate => "xstate",
        ProtocolName::Dicke => "dicke",
        ProtocolName::Circulant => "circulant",
    }
}

pub fn protocol(a: &ProtocolArgs) -> Result<Report, CliError> {
    let beta = check_kt(a.kt)?;
    let qudit = matches!(a.name, ProtocolName::Bell | ProtocolName::Circulant);
    if !qudit && a.d != 2 {
        return invalid("--d applies to the bell and circulant protocols only");
    }
    if a.delta_e.is_some() && a.name != ProtocolName::Circulant {
        return invalid("--deltaE applies to the circulant protocol only");
    }
    let sys = ThermalSystem::ladder(a.n, a.d, beta)?;
    let name = protocol_name(a.name);
    let mut diagnostics = BTreeMap::new();
    let mut pairs = vec![
        ("name", json!(name)),
        ("n", json!(a.n)),
        ("d", json!(a.d)),
        ("kT", num(a.kt)),
    ];
    let mut extra = BTreeMap::new();
    let out: ProtocolOutcome = match a.name {
        ProtocolName::Bell => bell_protocol(&sys)?,
        ProtocolName::Verstraete => verstraete_protocol(&sys)?,
        ProtocolName::Ghz => {
            let out = ghz_subspace_protocol(&sys, GhzVariant::AllBip)?;
            let closed = protocol_work_closed_form(ProtocolKind::Ghz, &sys)?;
            diagnostics.insert("closed_form_work".into(), num(closed));
            diagnostics.insert("closed_form_discrepancy".into(), num((closed - out.work).abs()));
            out
        }
        ProtocolName::GhzSingle => {
            if a.n < 2 {
                return invalid("the single-cut protocol needs n ≥ 2");
            }
            let side = 1usize << (a.n - 1);
            extra.insert("cut_mask".to_string(), json!(side));
            ghz_subspace_protocol(&sys, GhzVariant::SingleBip { side })?
        }
        ProtocolName::Xstate => xstate_protocol(&sys)?,
        ProtocolName::Dicke => {
            pairs.push(("k", json!(a.k)));
            let out = dicke_protocol(&sys, a.k, None)?;
            if a.k == 1 && a.n >= 3 {
                let w = wstate_work_report(&sys)?;
                diagnostics.insert(
                    "wstate_work".into(),
                    json!({
                        "closed_form": num(w.closed_form),
                        "direct": num(w.direct),
                        "discrepancy": num(w.discrepancy),
                        "authoritative": "direct",
                    }),
                );
            }
            out
        }
        ProtocolName::Circulant => {
            let Some(delta_e) = a.delta_e else {
                return invalid("the circulant protocol needs --deltaE");
            };
            pairs.push(("deltaE", num(delta_e)));
            let bp = solve_beta_prime(&sys, delta_e)?;
            let plan = circulant_plan(&sys, bp)?;
            extra.insert("beta_prime".to_string(), num(bp));
            extra.insert(
                "alphas".to_string(),
                json!(plan.alphas.iter().map(|&x| num(x)).collect::<Vec<_>>()),
            );
            circulant_heating_protocol(&sys, bp)?
        }
    };
    let m = &out.measures;
    let mut results = json!({
        "name": name,
        "work": num(out.work),
        "mutual_info": m.mutual_info.map(num),
        "concurrence": m.concurrence.map(num),
        "witness": m.witness.map(num),
        "gme_concurrence": m.gme_concurrence.map(num),
    });
    if let Value::Object(obj) = &mut results {
        obj.extend(extra);
    }
    let row = vec![
        name.into(),
        a.n.into(),
        a.d.into(),
        a.kt.into(),
        out.work.into(),
        m.mutual_info.into(),
        m.concurrence.into(),
        m.witness.into(),
        m.gme_concurrence.into(),
    ];
    Ok(Report {
        inputs: inputs("protocol", pairs),
        results,
        diagnostics,
        table: Table {
            header: vec![
                "name",
                "n",
                "d",
                "kT",
                "work",
                "mutual_info",
                "concurrence",
                "witness",
                "gme_concurrence",
            ],
            rows: vec![row],
        },
    })
}

fn optimizer_config(restarts: usize, seed: u64) -> Result<OptimizerConfig, CliError> {
    let cfg = OptimizerConfig {
        restarts,
        seed,
        mode: exec_mode(),
        ..OptimizerConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn sweep(a: &SweepArgs, seed: u64) -> Result<Report, CliError> {
    check_kt(a.kt)?;
    let (kind, kind_name) = match a.kind {
        SweepKindArg::MiVsEnergy => (SweepKind::MiVsEnergy, "mi-vs-energy"),
        SweepKindArg::ConcurrenceVsEnergy => (SweepKind::ConcurrenceVsEnergy, "concurrence-vs-energy"),
    };
    let mut pairs = vec![
        ("kind", json!(kind_name)),
        ("kT", num(a.kt)),
        ("points", json!(a.points)),
    ];
    if kind == SweepKind::ConcurrenceVsEnergy {
        pairs.push(("restarts", json!(a.restarts)));
        pairs.push(("seed", json!(seed)));
    }
    let cfg = optimizer_config(a.restarts, seed)?;
    let curve = sweep_curve(kind, a.kt, a.points, &cfg)?;
    let rows = (0..curve.x.len())
        .map(|i| {
            vec![
                curve.x[i].into(),
                curve.y[i].into(),
                curve.y_ansatz.as_ref().map(|ya| ya[i]).into(),
            ]
        })
        .collect();
    let nums = |v: &[f64]| v.iter().map(|&x| num(x)).collect::<Vec<_>>();
    let mut diagnostics = BTreeMap::new();
    let monotone = curve.y.windows(2).all(|w| w[1] >= w[0]);
    diagnostics.insert("y_monotone".into(), json!(monotone));
    Ok(Report {
        inputs: inputs("sweep", pairs),
        results: json!({
            "x": nums(&curve.x),
            "y": nums(&curve.y),
            "y_ansatz": curve.y_ansatz.as_deref().map(nums),
            "measure": curve.meta.measure,
            "method": curve.meta.method,
        }),
        diagnostics,
        table: Table {
            header: vec!["x", "y", "y_ansatz"],
            rows,
        },
    })
}

pub fn optimize(a: &OptimizeArgs, seed: u64) -> Result<Report, CliError> {
    let beta = check_kt(a.kt)?;
    let sys = ThermalSystem::qubits(2, beta)?;
    let cfg = optimizer_config(a.restarts, seed)?;
    let opt = optimize_concurrence_constrained(&sys, a.delta_e, &cfg)?;
    let ans = ansatz_two_angle(&sys, a.delta_e)?;
    let ceiling = cmax_thermal_2q(sys.p());
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("unconstrained_cmax".into(), num(ceiling));
    diagnostics.insert("ansatz_concurrence".into(), num(ans.concurrence));
    diagnostics.insert("ansatz_work".into(), num(ans.work));
    Ok(Report {
        inputs: inputs(
            "optimize",
            vec![
                ("kT", num(a.kt)),
                ("deltaE", num_or_inf(a.delta_e)),
                ("restarts", json!(a.restarts)),
                ("seed", json!(seed)),
            ],
        ),
        results: json!({
            "concurrence": num(opt.concurrence),
            "work": num(opt.work),
            "params": opt.params.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        }),
        diagnostics,
        table: Table {
            header: vec!["kT", "deltaE", "concurrence", "work"],
            rows: vec![vec![
                a.kt.into(),
                a.delta_e.into(),
                opt.concurrence.into(),
                opt.work.into(),
            ]],
        },
    })
}

/// The report plus whether every invariant held.
pub fn selftest(trials: usize, seed: u64) -> Result<(Report, bool), CliError> {
    if trials == 0 {
        return invalid("--trials must be ≥ 1");
    }
    let r = run_selftest(trials, seed, exec_mode());
    let passed = r.passed();
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("tolerance".into(), num(thermocorr::selftest::SELFTEST_TOL));
    let report = Report {
        inputs: inputs("selftest", vec![("trials", json!(trials)), ("seed", json!(seed))]),
        results: json!({
            "trials": r.trials,
            "checks": r.checks,
            "violations": r.violations,
            "passed": passed,
        }),
        diagnostics,
        table: Table {
            header: vec!["trials", "seed", "checks", "violations", "passed"],
            rows: vec![vec![
                r.trials.into(),
                Cell::Int(seed),
                r.checks.into(),
                r.violations.len().into(),
                if passed { "true" } else { "false" }.into(),
            ]],
        },
    };
    Ok((report, passed))
}
