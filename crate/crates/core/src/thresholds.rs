//! Critical temperatures for correlation and entanglement creation, and the
//! spectral separability criterion bounding them from above.
//!
//! Every root is found in the ground-state population `p ∈ [1/2, 1)` and
//! converted with `k_B T/E = 1/ln(p/(1−p))`.

use std::f64::consts::{LN_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::entanglement::{bipartition_expression, cmax_thermal_2q_expression, BipVariant, SpectrumVector};
use crate::error::{Error, Result};
use crate::par::{map_indexed, ExecMode};
use crate::protocols::{DickeFill, DickeWitnessModel};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdFamily {
    TwoQubit,
    AllBip,
    SingleBip,
    GmeGhz,
    GmeDicke,
    UpperQubitQudit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub family: ThresholdFamily,
    pub n: usize,
    pub k: Option<usize>,
    pub kt_over_e: f64,
    /// Ground-state population at the root.
    pub p: f64,
    /// Asymptotic closed form for comparison, when the family has one.
    pub closed_form: Option<f64>,
    /// `|f(root)|` of the bisected expression.
    pub residual: f64,
    pub iterations: usize,
}

/// `k_B T/E` for ground-state population `p` of a qubit with gap `E`.
pub fn kt_from_p(p: f64) -> f64 {
    1.0 / (p / (1.0 - p)).ln()
}

/// Inverse of [`kt_from_p`].
pub fn p_from_kt(kt: f64) -> f64 {
    1.0 / (1.0 + (-1.0 / kt).exp())
}

struct Root {
    p: f64,
    residual: f64,
    iterations: usize,
}

/// Bisection for `f(p) = 0` on `[1/2, P_UPPER]` with `f(1/2) ≤ 0 < f(P_UPPER)`.
fn bisect_p<F: Fn(f64) -> f64>(f: F) -> Result<Root> {
    let (mut lo, mut hi) = (0.5, tolerances::P_UPPER);
    if f(lo) > 0.0 || f(hi) <= 0.0 {
        return Err(Error::NotBracketed { lo, hi });
    }
    let mut iterations = 0;
    while iterations < tolerances::BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (flo, fhi) = (f(lo).abs(), f(hi).abs());
    let (p, residual) = if flo <= fhi { (lo, flo) } else { (hi, fhi) };
    if residual >= tolerances::ROOT_RESIDUAL {
        return Err(Error::NotBracketed { lo, hi });
    }
    Ok(Root {
        p,
        residual,
        iterations,
    })
}

fn result(
    family: ThresholdFamily,
    n: usize,
    k: Option<usize>,
    root: Root,
    closed_form: Option<f64>,
) -> ThresholdResult {
    ThresholdResult {
        family,
        n,
        k,
        kt_over_e: kt_from_p(root.p),
        p: root.p,
        closed_form,
        residual: root.residual,
        iterations: root.iterations,
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::InvalidSystem(format!("need at least {min} qubits, got {n}")))
    } else {
        Ok(())
    }
}

/// Largest temperature at which two thermal qubits can be entangled.
pub fn threshold_two_qubit() -> Result<ThresholdResult> {
    let root = bisect_p(cmax_thermal_2q_expression)?;
    Ok(result(ThresholdFamily::TwoQubit, 2, None, root, None))
}

/// `n/(2 ln(1+√2))`.
pub fn all_bip_closed_form(n: usize) -> f64 {
    n as f64 / (2.0 * (1.0 + SQRT_2).ln())
}

/// `(n − 1/2)/ln 3`.
pub fn single_bip_closed_form(n: usize) -> f64 {
    (n as f64 - 0.5) / 3f64.ln()
}

/// `1/(2 ln 2)`.
pub fn gme_ghz_limit() -> f64 {
    1.0 / (2.0 * LN_2)
}

/// `n/((k+1) ln n)`.
pub fn gme_dicke_closed_form(n: usize, k: usize) -> f64 {
    n as f64 / ((k + 1) as f64 * (n as f64).ln())
}

/// GHZ-subspace protocol entangling every bipartition at once.
pub fn threshold_all_bip(n: usize) -> Result<ThresholdResult> {
    check_n(n, 2)?;
    let root = bisect_p(|p| bipartition_expression(p, n, BipVariant::AllBip))?;
    Ok(result(
        ThresholdFamily::AllBip,
        n,
        None,
        root,
        Some(all_bip_closed_form(n)),
    ))
}

/// GHZ-subspace protocol with the single-cut permutation.
pub fn threshold_single_bip(n: usize) -> Result<ThresholdResult> {
    check_n(n, 2)?;
    let root = bisect_p(|p| bipartition_expression(p, n, BipVariant::SingleBip))?;
    Ok(result(
        ThresholdFamily::SingleBip,
        n,
        None,
        root,
        Some(single_bip_closed_form(n)),
    ))
}

/// `p^n − (1−p)^n − 2(2^{n−1}−1)(p(1−p))^{n/2}`.
pub fn gme_ghz_expression(p: f64, n: usize) -> f64 {
    let q = 1.0 - p;
    let pairs = 2f64.powi(n as i32 - 1) - 1.0;
    p.powi(n as i32) - q.powi(n as i32) - 2.0 * pairs * (p * q).powf(n as f64 / 2.0)
}

/// GME from the GHZ-basis X-state protocol.
pub fn threshold_gme_ghz(n: usize) -> Result<ThresholdResult> {
    check_n(n, 2)?;
    let root = bisect_p(|p| gme_ghz_expression(p, n))?;
    Ok(result(ThresholdFamily::GmeGhz, n, None, root, Some(gme_ghz_limit())))
}

/// GME from the Dicke protocol: the temperature where the witness of the
/// protocol output changes sign.
pub fn threshold_gme_dicke(n: usize, k: usize, fill: Option<DickeFill>) -> Result<ThresholdResult> {
    check_n(n, 3)?;
    let model = DickeWitnessModel::new(n, k, fill)?;
    let root = bisect_p(|p| model.witness_at(p))?;
    Ok(result(
        ThresholdFamily::GmeDicke,
        n,
        Some(k),
        root,
        Some(gme_dicke_closed_form(n, k)),
    ))
}

/// Dicke thresholds for several register sizes, computed in parallel.
pub fn threshold_gme_dicke_many(ns: &[usize], k: usize, mode: ExecMode) -> Result<Vec<ThresholdResult>> {
    map_indexed(mode, ns.len(), |i| threshold_gme_dicke(ns[i], k, None))
        .into_iter()
        .collect()
}

/// `λ₁ − λ_{2d−1} − 2√(λ_{2d−2} λ_{2d})` for a non-increasing spectrum of
/// length `2d`; non-positive iff every state with this spectrum is separable
/// across the qubit/qudit cut.
pub fn separability_expression(spec: &SpectrumVector) -> Result<f64> {
    let l = spec.values();
    let len = l.len();
    if len < 4 || len % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: 2 * (len / 2).max(2),
            got: len,
        });
    }
    Ok(l[0] - l[len - 2] - 2.0 * (l[len - 3] * l[len - 1]).sqrt())
}

/// Whether the spectrum is absolutely separable for a qubit/qudit split.
pub fn separability_upper_bound(spec: &SpectrumVector) -> Result<bool> {
    Ok(separability_expression(spec)? <= 0.0)
}

/// The criterion evaluated on the `n`-qubit thermal spectrum, built from
/// excitation classes (`p > 1/2` orders them by excitation number).
fn thermal_separability_expression(p: f64, n: usize) -> f64 {
    let q = 1.0 - p;
    let class = |c: usize| p.powi((n - c) as i32) * q.powi(c as i32);
    // smallest three: class n once, then class n−1 (n ≥ 2 members)
    let (last, second_last, third_last) = (class(n), class(n - 1), class(n - 1));
    class(0) - second_last - 2.0 * (third_last * last).sqrt()
}

/// Temperature above which no unitary entangles any qubit/qudit cut of `n`
/// thermal qubits.
pub fn separability_boundary(n: usize) -> Result<ThresholdResult> {
    check_n(n, 2)?;
    let root = bisect_p(|p| thermal_separability_expression(p, n))?;
    Ok(result(
        ThresholdFamily::UpperQubitQudit,
        n,
        None,
        root,
        Some(upper_bound_temperatures(n)?.0),
    ))
}

/// `(n−1)/ln 3`, the asymptotic form of the separability boundary, quoted as
/// an upper bound for both the all-bipartition and the GME threshold.
pub fn upper_bound_temperatures(n: usize) -> Result<(f64, f64)> {
    check_n(n, 2)?;
    let t = (n as f64 - 1.0) / 3f64.ln();
    Ok((t, t))
}
