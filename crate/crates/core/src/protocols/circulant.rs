use serde::{Deserialize, Serialize};

use super::{apply_protocol, ProtocolOutcome};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::thermal::ThermalSystem;
use crate::tolerances;

/// Weights of the doubly stochastic map `T = Σ_i α_i Π^i`, acting on a
/// population vector as `(Tp)_x = Σ_i α_i p_{x−i mod d}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CirculantPlan {
    pub alphas: Vec<f64>,
}

impl CirculantPlan {
    pub fn identity(d: usize) -> Self {
        let mut alphas = vec![0.0; d];
        alphas[0] = 1.0;
        Self { alphas }
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let d = self.alphas.len();
        (0..d)
            .map(|x| (0..d).map(|i| self.alphas[i] * p[(x + d - i) % d]).sum())
            .collect()
    }

    fn check(self) -> Result<Self> {
        if let Some((index, &value)) = self
            .alphas
            .iter()
            .enumerate()
            .find(|(_, &a)| a < -tolerances::ALPHA_NEGATIVE)
        {
            return Err(Error::NegativeAlpha { index, value });
        }
        Ok(self)
    }
}

/// Closed-form weights taking `τ_β` to `τ_{β′}` on an equally spaced ladder
/// with gap `E₀` and `v = e^{−βE₀}`:
///
/// ```text
/// α_0 = ((1 − v′) + (v′ − v) p′_{d−1}) / (1 − v)
/// α_k = (v′ − v) p′_{k−1} / (1 − v),   k ≥ 1
/// ```
pub fn circulant_plan(sys: &ThermalSystem, beta_prime: f64) -> Result<CirculantPlan> {
    check_equal_spacing(sys)?;
    check_beta_prime(sys, beta_prime)?;
    let d = sys.d();
    let v = sys.v();
    if beta_prime == sys.beta() || v == 1.0 {
        return Ok(CirculantPlan::identity(d));
    }
    let hotter = sys.with_beta(beta_prime)?;
    let vp = hotter.v();
    let pp = hotter.local_populations();
    let mut alphas = Vec::with_capacity(d);
    alphas.push(((1.0 - vp) + (vp - v) * pp[d - 1]) / (1.0 - v));
    for k in 1..d {
        alphas.push((vp - v) * pp[k - 1] / (1.0 - v));
    }
    CirculantPlan { alphas }.check()
}

/// Weights solving `T p = p_target` directly; fails with `NegativeAlpha`
/// when no circulant doubly stochastic map does the job.
pub fn circulant_plan_numeric(p: &[f64], target: &[f64]) -> Result<CirculantPlan> {
    let d = p.len();
    if target.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: target.len(),
        });
    }
    let a: Vec<Vec<f64>> = (0..d).map(|x| (0..d).map(|i| p[(x + d - i) % d]).collect()).collect();
    let alphas =
        solve_linear(a, target.to_vec()).ok_or_else(|| Error::BadProtocol("singular circulant system".into()))?;
    CirculantPlan { alphas }.check()
}

/// Heats both marginals of a two-qudit thermal state to `τ_{β′}` at the
/// minimal work, keeping the global spectrum. Inside each subspace
/// `S_j = {|k, k+j⟩}` the diagonal `x_j` is rotated to `T x_j`.
pub fn circulant_heating_protocol(sys: &ThermalSystem, beta_prime: f64) -> Result<ProtocolOutcome> {
    if sys.n() != 2 {
        return Err(Error::BadProtocol("circulant heating needs two subsystems".into()));
    }
    let plan = circulant_plan(sys, beta_prime)?;
    let d = sys.d();
    let p = sys.local_populations();
    let mut u = ComplexMatrix::zeros(d * d, d * d);
    for j in 0..d {
        let idx: Vec<usize> = (0..d).map(|k| k * d + (k + j) % d).collect();
        let x: Vec<f64> = (0..d).map(|k| p[k] * p[(k + j) % d]).collect();
        let y = plan.apply(&x);
        let block = schur_horn(&x, &y);
        for a in 0..d {
            for b in 0..d {
                u[(idx[a], idx[b])] = C64::new(block[a][b], 0.0);
            }
        }
    }
    apply_protocol(&u, sys)
}

fn check_equal_spacing(sys: &ThermalSystem) -> Result<()> {
    let gap = sys.levels()[1];
    let equal = gap > 0.0
        && sys
            .levels()
            .iter()
            .enumerate()
            .all(|(k, &e)| (e - k as f64 * gap).abs() <= 1e-12 * (1.0 + e.abs()));
    if equal {
        Ok(())
    } else {
        Err(Error::NotEqualSpacing)
    }
}

fn check_beta_prime(sys: &ThermalSystem, beta_prime: f64) -> Result<()> {
    if beta_prime.is_nan() || beta_prime < 0.0 || beta_prime > sys.beta() {
        return Err(Error::InvalidSystem(format!(
            "β′ = {beta_prime} must lie in [0, β = {}]",
            sys.beta()
        )));
    }
    Ok(())
}

/// Real orthogonal `U` with `diag(U diag(x) Uᵀ) = y`, for `y` majorized by `x`.
///
/// Greedy Givens construction: the largest open target `η` is produced on a
/// coordinate whose value `a ≥ η` neighbours one with `b ≤ η`, by a rotation
/// with `cos²θ = (η − b)/(a − b)`; that coordinate is then frozen. The open
/// coordinates stay mutually decoupled, so each step only sees a diagonal.
fn schur_horn(x: &[f64], y: &[f64]) -> Vec<Vec<f64>> {
    let m = x.len();
    let mut u: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut cur = x.to_vec();
    let mut open = vec![true; m];
    let mut slot = vec![0usize; m];
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| y[b].total_cmp(&y[a]));

    for t in order {
        let eta = y[t];
        let mut act: Vec<usize> = (0..m).filter(|&i| open[i]).collect();
        act.sort_by(|&a, &b| cur[b].total_cmp(&cur[a]));
        let exact = act.iter().copied().find(|&i| (cur[i] - eta).abs() <= 1e-15);
        let frozen = match exact {
            Some(i) => i,
            None if act.len() == 1 => act[0],
            None => {
                let pos = act
                    .windows(2)
                    .position(|w| cur[w[0]] >= eta && eta >= cur[w[1]])
                    .unwrap_or(if eta > cur[act[0]] { 0 } else { act.len() - 2 });
                let (a, b) = (act[pos], act[pos + 1]);
                let (va, vb) = (cur[a], cur[b]);
                let c2 = if va > vb {
                    ((eta - vb) / (va - vb)).clamp(0.0, 1.0)
                } else {
                    1.0
                };
                let (c, s) = (c2.sqrt(), (1.0 - c2).sqrt());
                for col in 0..m {
                    let (ra, rb) = (u[a][col], u[b][col]);
                    u[a][col] = c * ra + s * rb;
                    u[b][col] = -s * ra + c * rb;
                }
                cur[a] = c2 * va + (1.0 - c2) * vb;
                cur[b] = (1.0 - c2) * va + c2 * vb;
                a
            }
        };
        open[frozen] = false;
        slot[frozen] = t;
    }

    let mut out = vec![vec![0.0; m]; m];
    for (i, row) in u.into_iter().enumerate() {
        out[slot[i]] = row;
    }
    out
}

/// Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::mi_energy_bound;
    use crate::linalg::QuantumState;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    #[test]
    fn closed_form_weights() {
        let sys = ThermalSystem::ladder(2, 2, 1.3).unwrap();
        let plan = circulant_plan(&sys, 0.4).unwrap();
        assert!((plan.alphas[1] - 0.32736952).abs() < 1e-8);
        let sys3 = ThermalSystem::ladder(2, 3, 1.3).unwrap();
        let plan3 = circulant_plan(&sys3, 0.4).unwrap();
        for (a, b) in plan3.alphas.iter().zip([0.56910280, 0.25797284, 0.17292437]) {
            assert!((a - b).abs() < 1e-8);
        }
        let numeric = circulant_plan_numeric(
            &sys3.local_populations(),
            &sys3.with_beta(0.4).unwrap().local_populations(),
        )
        .unwrap();
        for (a, b) in plan3.alphas.iter().zip(&numeric.alphas) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_plans() {
        let sys = ThermalSystem::ladder(2, 3, 0.7).unwrap();
        assert_eq!(circulant_plan(&sys, 0.7).unwrap(), CirculantPlan::identity(3));
        let flat = circulant_plan(&sys, 0.0).unwrap();
        for a in flat.alphas {
            assert!((a - 1.0 / 3.0).abs() < 1e-12);
        }
        let out = circulant_heating_protocol(&sys, 0.7).unwrap();
        assert!(out.work.abs() < 1e-14);
    }

    #[test]
    fn ground_state_example() {
        let sys = ThermalSystem::qubits(2, f64::INFINITY).unwrap();
        let out = circulant_heating_protocol(&sys, LN_2).unwrap();
        assert!((out.work - 2.0 / 3.0).abs() < 1e-12);
        assert!((out.measures.mutual_info.unwrap() - 1.273028336589626).abs() < 1e-9);
        let a = out.final_state.reduced(&[0]).unwrap();
        assert!((a.population(0) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let uneven = ThermalSystem::new(2, vec![0.0, 1.0, 3.0], 1.0).unwrap();
        assert_eq!(circulant_plan(&uneven, 0.5), Err(Error::NotEqualSpacing));
        let sys = ThermalSystem::ladder(2, 3, 1.0).unwrap();
        assert!(circulant_plan(&sys, 1.5).is_err());
        // heating cannot cool: the map would need negative weights
        let p = sys.local_populations();
        let colder = sys.with_beta(2.0).unwrap().local_populations();
        assert!(matches!(
            circulant_plan_numeric(&p, &colder),
            Err(Error::NegativeAlpha { .. })
        ));
    }

    #[test]
    fn schur_horn_hits_targets() {
        let x = [0.5, 0.3, 0.15, 0.05];
        let y = [0.2, 0.35, 0.25, 0.2];
        let u = schur_horn(&x, &y);
        for (i, &target) in y.iter().enumerate() {
            let diag: f64 = (0..4).map(|k| u[i][k] * u[i][k] * x[k]).sum();
            assert!((diag - target).abs() < 1e-14);
            let norm: f64 = u[i].iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn marginals_reach_the_target(d in 2usize..5, beta in 0.05f64..6.0, frac in 0.0f64..1.0) {
            let sys = ThermalSystem::ladder(2, d, beta).unwrap();
            let bp = frac * beta;
            let plan = circulant_plan(&sys, bp).unwrap();
            prop_assert!(plan.alphas.iter().all(|&a| a >= -1e-12));
            prop_assert!((plan.alphas.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            let out = circulant_heating_protocol(&sys, bp).unwrap();
            let target = sys.with_beta(bp).unwrap().local_populations();
            let ra = out.final_state.reduced(&[0]).unwrap();
            let rb = out.final_state.reduced(&[1]).unwrap();
            prop_assert!(ra.matrix().max_abs_diff(rb.matrix()) <= 1e-10);
            for k in 0..d {
                prop_assert!((ra.population(k) - target[k]).abs() <= 1e-9);
                for l in 0..d {
                    if k != l {
                        prop_assert!(ra.element(k, l).norm() <= 1e-9);
                    }
                }
            }
            let bound = mi_energy_bound(&sys, out.work).unwrap();
            prop_assert!((out.measures.mutual_info.unwrap() - bound).abs() <= 1e-8);
        }
    }
}
