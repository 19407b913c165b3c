//! Entanglement quantifiers and genuine-multipartite witnesses.
//!
//! Witness sign convention: a positive value certifies GME.

use serde::{Deserialize, Serialize};

use crate::basis::{all_ones, binomial, weight_indices};
use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, DensityMatrix, QuantumState, C64};
use crate::tolerances;

/// Eigenvalues sorted non-increasing and summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumVector {
    values: Vec<f64>,
}

impl SpectrumVector {
    /// Requires non-increasing order.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidState("spectrum must be non-increasing".into()));
        }
        Self::from_unsorted(values)
    }

    /// Sorts, clamps round-off negatives and validates.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyList);
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if values.iter().any(|&x| x < tolerances::MIN_EIGENVALUE) {
            return Err(Error::InvalidState("negative eigenvalue".into()));
        }
        for x in &mut values {
            *x = x.max(0.0);
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > tolerances::TRACE {
            return Err(Error::InvalidState(format!("spectrum sums to {sum}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn of_state<S: QuantumState + ?Sized>(rho: &S) -> Result<Self> {
        Self::from_unsorted(rho.spectrum()?)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let m = rho.matrix();
    // σy ⊗ σy
    let mut flip = ComplexMatrix::zeros(4, 4);
    flip[(0, 3)] = C64::new(-1.0, 0.0);
    flip[(1, 2)] = C64::new(1.0, 0.0);
    flip[(2, 1)] = C64::new(1.0, 0.0);
    flip[(3, 0)] = C64::new(-1.0, 0.0);
    let tilde = flip.matmul(&m.conj()).matmul(&flip);
    let root = eigh(m)?.map(|x| x.max(0.0).sqrt());
    let r = root.matmul(&tilde).matmul(&root);
    let r = r.add(&r.adjoint()).scale(C64::new(0.5, 0.0));
    let mut mu: Vec<f64> = crate::linalg::eigvalsh(&r)?
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// Largest concurrence on the unitary orbit of a two-qubit spectrum:
/// `max(0, λ₁ − λ₃ − 2√(λ₂λ₄))`.
pub fn cmax_from_spectrum(spec: &SpectrumVector) -> Result<f64> {
    let l = spec.values();
    if l.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: l.len(),
        });
    }
    Ok((l[0] - l[2] - 2.0 * (l[1] * l[3]).sqrt()).max(0.0))
}

/// Unclamped `2p² − p − 2(1−p)√(p(1−p))`.
pub fn cmax_thermal_2q_expression(p: f64) -> f64 {
    2.0 * p * p - p - 2.0 * (1.0 - p) * (p * (1.0 - p)).sqrt()
}

/// Spectrum-optimal concurrence of two thermal qubits with ground population `p`.
pub fn cmax_thermal_2q(p: f64) -> f64 {
    cmax_thermal_2q_expression(p).max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BipVariant {
    AllBip,
    SingleBip,
}

/// Unclamped bipartition concurrence of the GHZ-subspace protocol.
pub fn bipartition_expression(p: f64, n: usize, variant: BipVariant) -> f64 {
    let q = 1.0 - p;
    let nf = n as i32;
    match variant {
        BipVariant::AllBip => p.powi(nf) - q.powi(nf) - 2.0 * (p * q).powf(n as f64 / 2.0),
        BipVariant::SingleBip => {
            let lam = p * q.powi(nf - 1);
            p.powi(nf) - lam - 2.0 * (lam * q.powi(nf)).sqrt()
        }
    }
}

pub fn bipartition_concurrence(p: f64, n: usize, variant: BipVariant) -> f64 {
    bipartition_expression(p, n, variant).max(0.0)
}

/// Concurrence bound across a cut from the GHZ coherence:
/// `2 max(0, |ρ_{0…0,1…1}| − √(ρ_{x₁x₁} ρ_{x₂x₂}))`, where `x₁ = side` has
/// ones exactly on one side of the cut and `x₂` is its complement. `side` is a
/// basis-index bitmask; [`crate::basis::leading_ones`] gives the cut after the first `j` qubits.
pub fn bipartition_concurrence_of_state<S: QuantumState + ?Sized>(rho: &S, n: usize, side: usize) -> Result<f64> {
    check_qubits(rho, n)?;
    let ones = all_ones(n);
    if side == 0 || side & ones == ones || side > ones {
        return Err(Error::BadIndex {
            index: side,
            bound: ones,
        });
    }
    let complement = ones ^ side;
    let z = rho.element(0, ones).norm();
    Ok(2.0 * (z - (rho.population(side) * rho.population(complement)).max(0.0).sqrt()).max(0.0))
}

/// One representative bitmask per bipartition of `n` qubits (the side not
/// containing qubit 0).
pub fn bipartition_masks(n: usize) -> Vec<usize> {
    let top = 1usize << (n - 1);
    (1..top).collect()
}

/// `(a_i, b_i, z_i)` for the pairs `(i, 2^n−1−i)`, `i < 2^{n−1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XStateParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub z: Vec<C64>,
}

impl XStateParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>, z: Vec<C64>) -> Result<Self> {
        let x = Self { a, b, z };
        x.validate()?;
        Ok(x)
    }

    /// Reads the X pattern from an `n`-qubit state, ignoring other entries.
    pub fn from_state<S: QuantumState + ?Sized>(rho: &S, n: usize) -> Result<Self> {
        check_qubits(rho, n)?;
        let ones = all_ones(n);
        let half = 1usize << (n - 1);
        let a = (0..half).map(|i| rho.population(i)).collect();
        let b = (0..half).map(|i| rho.population(ones - i)).collect();
        let z = (0..half).map(|i| rho.element(i, ones - i)).collect();
        Self::new(a, b, z)
    }

    fn validate(&self) -> Result<()> {
        let len = self.a.len();
        if len == 0 || !len.is_power_of_two() || self.b.len() != len || self.z.len() != len {
            return Err(Error::InvalidXState("a, b, z must share a power-of-two length".into()));
        }
        let mut sum = 0.0;
        for i in 0..len {
            let (a, b, z) = (self.a[i], self.b[i], self.z[i].norm());
            if a < -tolerances::EXACT || b < -tolerances::EXACT {
                return Err(Error::InvalidXState(format!("negative population at {i}")));
            }
            if z > (a.max(0.0) * b.max(0.0)).sqrt() + tolerances::EXACT {
                return Err(Error::InvalidXState(format!("coherence too large at {i}")));
            }
            sum += a + b;
        }
        if (sum - 1.0).abs() > tolerances::TRACE {
            return Err(Error::InvalidXState(format!("trace {sum}")));
        }
        Ok(())
    }
}

/// Genuine multipartite concurrence of an X-state:
/// `max_i 2 max(0, |z_i| − Σ_{j≠i} √(a_j b_j))`.
pub fn xstate_gme_concurrence(x: &XStateParams) -> Result<f64> {
    x.validate()?;
    let roots: Vec<f64> =
        x.a.iter()
            .zip(&x.b)
            .map(|(&a, &b)| (a.max(0.0) * b.max(0.0)).sqrt())
            .collect();
    let total: f64 = roots.iter().sum();
    Ok(x.z
        .iter()
        .zip(&roots)
        .map(|(z, r)| 2.0 * (z.norm() - (total - r)).max(0.0))
        .fold(0.0, f64::max))
}

/// First-excitation block of an `n`-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub struct WSubspaceState {
    /// `Tr ω`.
    pub alpha: f64,
    /// `Tr ω² / α²`.
    pub lam: f64,
    pub offdiag: ComplexMatrix,
}

impl WSubspaceState {
    pub fn from_state<S: QuantumState + ?Sized>(rho: &S, n: usize) -> Result<Self> {
        check_qubits(rho, n)?;
        let idx = weight_indices(n, 1);
        let mut w = ComplexMatrix::zeros(n, n);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                w[(a, b)] = rho.element(i, j);
            }
        }
        let alpha = w.trace().re;
        let purity = w.matmul(&w).trace().re;
        let lam = if alpha > 0.0 {
            (purity / (alpha * alpha)).clamp(1.0 / n as f64, 1.0)
        } else {
            1.0 / n as f64
        };
        Ok(Self { alpha, lam, offdiag: w })
    }

    /// Uniform-diagonal, equal-modulus form with all phases zero; maximizes
    /// `Σ_{i≠j} |ω_ij|` at fixed trace and purity.
    pub fn optimal_form(&self) -> ComplexMatrix {
        let n = self.offdiag.rows();
        let nf = n as f64;
        let off = ((self.lam - 1.0 / nf) / (nf * (nf - 1.0))).max(0.0).sqrt();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = C64::new(self.alpha * if i == j { 1.0 / nf } else { off }, 0.0);
            }
        }
        m
    }

    /// `α √(n(n−1)(λ − 1/n))`.
    pub fn max_offdiag_sum(&self) -> f64 {
        let nf = self.offdiag.rows() as f64;
        self.alpha * (nf * (nf - 1.0) * (self.lam - 1.0 / nf)).max(0.0).sqrt()
    }
}

/// W-state witness `Σ_{i≠j}|Ω_ij| − 2√Ω₀₀ Σ_a √Ω_aa − (n−2) Σ_i Ω_ii`.
pub fn w_witness<S: QuantumState + ?Sized>(omega: &S, n: usize) -> Result<f64> {
    check_qubits(omega, n)?;
    if n < 2 {
        return Err(Error::BadExcitation { n, m: 1 });
    }
    let w1 = weight_indices(n, 1);
    let w2 = weight_indices(n, 2);
    let mut coh = 0.0;
    for &i in &w1 {
        for &j in &w1 {
            if i != j {
                coh += omega.element(i, j).norm();
            }
        }
    }
    let ground = omega.population(0).max(0.0).sqrt();
    let doubles: f64 = w2.iter().map(|&a| omega.population(a).max(0.0).sqrt()).sum();
    let singles: f64 = w1.iter().map(|&i| omega.population(i)).sum();
    Ok(coh - 2.0 * ground * doubles - (n as f64 - 2.0) * singles)
}

/// Dicke-subspace witness `𝓔_m`: over ordered pairs `(α, β)` of weight-`m`
/// strings sharing `m−1` ones, `Σ |Ω_αβ| − √(Ω_{α∧β} Ω_{α∨β})`, minus
/// `m(n−m−1) Σ_α Ω_αα`.
pub fn dicke_witness<S: QuantumState + ?Sized>(omega: &S, n: usize, m: usize) -> Result<f64> {
    check_qubits(omega, n)?;
    if m == 0 || m >= n {
        return Err(Error::BadExcitation { n, m });
    }
    let mut total = 0.0;
    let mut diag = 0.0;
    for alpha in weight_indices(n, m) {
        diag += omega.population(alpha);
        let mut partners: Vec<usize> = Vec::with_capacity(m * (n - m));
        for a in 0..n {
            if alpha >> a & 1 == 0 {
                continue;
            }
            for b in 0..n {
                if alpha >> b & 1 == 1 {
                    continue;
                }
                partners.push(alpha ^ (1 << a) ^ (1 << b));
            }
        }
        partners.sort_unstable();
        for beta in partners {
            let lower = omega.population(alpha & beta).max(0.0);
            let upper = omega.population(alpha | beta).max(0.0);
            total += omega.element(alpha, beta).norm() - (lower * upper).sqrt();
        }
    }
    Ok(total - (m * (n - m - 1)) as f64 * diag)
}

/// Number of ordered pairs entering `𝓔_m`.
pub fn dicke_pair_count(n: usize, m: usize) -> usize {
    m * (n - m) * binomial(n, m)
}

fn check_qubits<S: QuantumState + ?Sized>(rho: &S, n: usize) -> Result<()> {
    if n == 0 || rho.dims().len() != n || rho.dims().iter().any(|&d| d != 2) {
        return Err(Error::DimensionMismatch {
            expected: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            got: rho.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_unitary, ZERO};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pure(psi: &[C64], n: usize) -> DensityMatrix {
        DensityMatrix::pure(psi, vec![2; n]).unwrap()
    }

    fn dicke(n: usize, k: usize) -> DensityMatrix {
        let idx = weight_indices(n, k);
        let amp = C64::new(1.0 / (idx.len() as f64).sqrt(), 0.0);
        let mut psi = vec![ZERO; 1 << n];
        for i in idx {
            psi[i] = amp;
        }
        pure(&psi, n)
    }

    fn werner(w: f64) -> DensityMatrix {
        let mut m = ComplexMatrix::from_diag(&[0.25 * (1.0 - w); 4]);
        for &i in &[0, 3] {
            for &j in &[0, 3] {
                m[(i, j)] += C64::new(0.5 * w, 0.0);
            }
        }
        DensityMatrix::new(m, vec![2, 2]).unwrap()
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence_2q(&werner(1.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((concurrence_2q(&werner(0.8)).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(concurrence_2q(&werner(0.3)).unwrap(), 0.0);
        let product = DensityMatrix::from_diag(&[0.48, 0.32, 0.12, 0.08], vec![2, 2]).unwrap();
        assert!(concurrence_2q(&product).unwrap() < 1e-12);
    }

    #[test]
    fn concurrence_rejects_three_qubits() {
        assert!(concurrence_2q(&dicke(3, 1)).is_err());
    }

    #[test]
    fn cmax_examples() {
        let pure = SpectrumVector::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(cmax_from_spectrum(&pure).unwrap(), 1.0);
        let flat = SpectrumVector::new(vec![0.25; 4]).unwrap();
        assert_eq!(cmax_from_spectrum(&flat).unwrap(), 0.0);
        let thermal = SpectrumVector::new(vec![0.5625, 0.1875, 0.1875, 0.0625]).unwrap();
        assert!((cmax_from_spectrum(&thermal).unwrap() - 0.158493649053890).abs() < 1e-12);
        assert!((cmax_thermal_2q(0.75) - 0.158493649053890).abs() < 1e-12);
        assert_eq!(cmax_thermal_2q(1.0), 1.0);
        assert!(cmax_thermal_2q(0.698) < 1e-3);
    }

    #[test]
    fn spectrum_vector_validation() {
        assert!(SpectrumVector::new(vec![0.2, 0.8]).is_err());
        assert!(SpectrumVector::from_unsorted(vec![0.2, 0.7]).is_err());
        assert_eq!(
            SpectrumVector::from_unsorted(vec![0.2, 0.8]).unwrap().values(),
            &[0.8, 0.2]
        );
    }

    #[test]
    fn bipartition_examples() {
        for n in 2..8 {
            assert!((bipartition_concurrence(1.0, n, BipVariant::AllBip) - 1.0).abs() < 1e-15);
            assert!((bipartition_concurrence(1.0, n, BipVariant::SingleBip) - 1.0).abs() < 1e-15);
        }
        assert!((bipartition_concurrence(0.75, 2, BipVariant::AllBip) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn xstate_examples() {
        let n = 3;
        let half = 1 << (n - 1);
        let mut a = vec![0.0; half];
        let mut b = vec![0.0; half];
        let mut z = vec![ZERO; half];
        a[0] = 0.5;
        b[0] = 0.5;
        z[0] = C64::new(0.5, 0.0);
        let ghz = XStateParams::new(a.clone(), b.clone(), z).unwrap();
        assert!((xstate_gme_concurrence(&ghz).unwrap() - 1.0).abs() < 1e-15);
        let diag = XStateParams::new(a, b, vec![ZERO; half]).unwrap();
        assert_eq!(xstate_gme_concurrence(&diag).unwrap(), 0.0);
    }

    #[test]
    fn xstate_rejects_excess_coherence() {
        let r = XStateParams::new(vec![0.5], vec![0.5], vec![C64::new(0.6, 0.0)]);
        assert!(matches!(r, Err(Error::InvalidXState(_))));
        let r = XStateParams::new(vec![0.5, 0.1, 0.0], vec![0.4, 0.0, 0.0], vec![ZERO; 3]);
        assert!(matches!(r, Err(Error::InvalidXState(_))));
    }

    #[test]
    fn w_witness_examples() {
        assert!((w_witness(&dicke(3, 1), 3).unwrap() - 1.0).abs() < 1e-12);
        for n in 3..7 {
            assert!((w_witness(&dicke(n, 1), n).unwrap() - 1.0).abs() < 1e-12);
        }
        let mut g = vec![ZERO; 8];
        g[0] = C64::new(1.0, 0.0);
        assert_eq!(w_witness(&pure(&g, 3), 3).unwrap(), 0.0);
    }

    #[test]
    fn dicke_witness_examples() {
        assert!((dicke_witness(&dicke(3, 1), 3, 1).unwrap() - 1.0).abs() < 1e-12);
        let d42 = dicke_witness(&dicke(4, 2), 4, 2).unwrap();
        assert!((d42 - 2.0).abs() < 1e-12);
        let thermal = DensityMatrix::from_diag(
            &crate::thermal::ThermalSystem::qubits(4, 0.9)
                .unwrap()
                .product_populations()
                .unwrap(),
            vec![2; 4],
        )
        .unwrap();
        for m in 1..4 {
            assert!(dicke_witness(&thermal, 4, m).unwrap() <= 0.0);
        }
        assert!(matches!(
            dicke_witness(&thermal, 4, 4),
            Err(Error::BadExcitation { .. })
        ));
        assert!(matches!(
            dicke_witness(&thermal, 4, 0),
            Err(Error::BadExcitation { .. })
        ));
    }

    #[test]
    fn pair_count() {
        assert_eq!(dicke_pair_count(24, 1), 552);
        assert_eq!(dicke_pair_count(4, 2), 24);
    }

    #[test]
    fn optimal_form_is_psd() {
        let w = WSubspaceState::from_state(&dicke(4, 1), 4).unwrap();
        assert!((w.alpha - 1.0).abs() < 1e-12 && (w.lam - 1.0).abs() < 1e-12);
        let eig = eigh(&w.optimal_form()).unwrap();
        assert!(eig.eigenvalues[0] > -1e-12);
        assert!((w.max_offdiag_sum() - 3.0).abs() < 1e-12);
    }

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        let dim = 1 << n;
        let u = random_unitary(dim, rng);
        let mut w: Vec<f64> = (0..dim).map(|_| rng.random::<f64>().powi(4)).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        DensityMatrix::new(u.conjugate(&ComplexMatrix::from_diag(&w)), vec![2; n]).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn cmax_is_permutation_invariant(mut w in proptest::collection::vec(0.0f64..1.0, 4), shift in 0usize..4) {
            let s: f64 = w.iter().sum::<f64>() + 1e-9;
            w.iter_mut().for_each(|x| *x /= s);
            w[0] += 1.0 - w.iter().sum::<f64>();
            let a = cmax_from_spectrum(&SpectrumVector::from_unsorted(w.clone()).unwrap()).unwrap();
            w.rotate_left(shift);
            let b = cmax_from_spectrum(&SpectrumVector::from_unsorted(w).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn w_witness_equals_dicke_m1(seed in any::<u64>(), n in 3usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_state(n, &mut rng);
            let a = w_witness(&rho, n).unwrap();
            let b = dicke_witness(&rho, n, 1).unwrap();
            prop_assert!((a - b).abs() <= 1e-10);
        }

        #[test]
        fn orbit_never_beats_spectrum_bound(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_state(2, &mut rng);
            let bound = cmax_from_spectrum(&SpectrumVector::of_state(&rho).unwrap()).unwrap();
            prop_assert!(concurrence_2q(&rho).unwrap() <= bound + 1e-6);
        }
    }
}
