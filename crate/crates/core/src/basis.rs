//! Computational-basis bookkeeping for qubit registers.
//!
//! Qubit `0` is the most significant bit, so ascending index order equals
//! lexicographic order of bitstrings.

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

#[inline]
pub fn weight(x: usize) -> usize {
    x.count_ones() as usize
}

/// All `n`-bit indices of Hamming weight `w`, ascending.
pub fn weight_indices(n: usize, w: usize) -> Vec<usize> {
    if w > n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(n, w));
    if w == 0 {
        out.push(0);
        return out;
    }
    // Gosper's hack enumerates same-weight integers in increasing order
    let mut x: usize = (1usize << w) - 1;
    let limit = 1usize << n;
    while x < limit {
        out.push(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Index with qubits `0..k` set (|1…10…0⟩ with `k` ones, most significant first).
#[inline]
pub fn leading_ones(n: usize, k: usize) -> usize {
    if k == 0 {
        0
    } else {
        ((1usize << k) - 1) << (n - k)
    }
}

#[inline]
pub fn all_ones(n: usize) -> usize {
    (1usize << n) - 1
}
