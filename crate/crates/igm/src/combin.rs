//! Exact combinatorics: binomial coefficients, colexicographic subset
//! ranking, the order/size recurrences, and the central-binomial
//! approximation.
//!
//! Clone populations grow like `C(n, n/2)`, so every count in this module
//! is an arbitrary-precision [`BigCount`]. Subsets are addressed by their
//! colex rank: for a sorted subset `s`, `rank = sum_i C(s[i], i+1)`. Colex
//! order compares subsets by their largest differing element, which means
//! the rank of a subset of `{0..n-1}` does not depend on `n` — a clone
//! keeps its address as the base grows.

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Arbitrary-precision nonnegative count.
pub type BigCount = num_bigint::BigUint;

/// Exact binomial coefficient `C(n, m)`.
///
/// Panics if `m > n`; use [`binomial_big`] for counts beyond `u64`.
pub fn binomial(n: u64, m: u64) -> BigCount {
    assert!(m <= n, "binomial: m = {m} exceeds n = {n}");
    let m = m.min(n - m);
    let mut result = BigCount::one();
    for i in 1..=m {
        result = result * (n - m + i) / i;
    }
    result
}

/// `C(n, m)` for counts that may not fit a machine word.
///
/// The multiplicative loop runs `min(m, n - m)` times, so this is only
/// practical when that many big-integer operations are affordable.
pub fn binomial_big(n: &BigCount, m: &BigCount) -> BigCount {
    assert!(m <= n, "binomial: m exceeds n");
    let mut m = m.clone();
    let nm = n - &m;
    if nm < m {
        m = nm;
    }
    let mut result = BigCount::one();
    let mut i = BigCount::one();
    let base = n - &m;
    while i <= m {
        result = result * (&base + &i) / &i;
        i += 1u32;
    }
    result
}

/// Base-10 logarithm of a positive count, accurate to double precision.
pub fn log10_big(x: &BigCount) -> f64 {
    assert!(!x.is_zero(), "log10 of zero");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("small count fits f64").log10();
    }
    // Top 53 bits carry all the precision a double can hold.
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53 bits fit f64");
    (top.log2() + shift as f64) * std::f64::consts::LOG10_2
}

/// Colex rank of a strictly increasing subset: `sum_i C(s[i], i+1)`.
pub fn colex_rank(subset: &[NodeId]) -> Result<BigCount> {
    if !subset.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::contract(
            "subset must be strictly increasing with no duplicates",
        ));
    }
    let mut rank = BigCount::zero();
    for (i, &s) in subset.iter().enumerate() {
        let i = i as u64 + 1;
        // C(s, i) with the empty convention: zero whenever s < i.
        if u64::from(s) >= i {
            rank += binomial(u64::from(s), i);
        }
    }
    Ok(rank)
}

/// The unique `m`-subset of `{0..n-1}` with the given colex rank.
///
/// Inverse of [`colex_rank`]; fails if `rank >= C(n, m)`.
pub fn colex_unrank(rank: &BigCount, m: usize, n: usize) -> Result<Vec<NodeId>> {
    let total = binomial(n as u64, m as u64);
    if *rank >= total {
        return Err(Error::contract(format!(
            "rank {rank} out of range: valid clone ranks are 0..={}",
            total - 1u32
        )));
    }
    let mut subset = vec![0 as NodeId; m];
    if m == 0 {
        return Ok(subset);
    }
    if m == n {
        // Only one subset, and the range check above pinned rank to 0.
        return Ok((0..m as NodeId).collect());
    }
    let mut rank = rank.clone();
    // Descend positions m..1, keeping b = C(v, i) updated incrementally.
    let mut v = (n - 1) as u64;
    let mut b = binomial(v, m as u64);
    for i in (1..=m as u64).rev() {
        while b > rank {
            // C(v-1, i) = C(v, i) * (v-i) / v
            b = b * (v - i) / v;
            v -= 1;
        }
        subset[i as usize - 1] = v as NodeId;
        rank -= &b;
        if i > 1 {
            // C(v-1, i-1) = C(v, i) * i / v
            b = b * i / v;
            v -= 1;
        }
    }
    Ok(subset)
}

/// Iterator over all `m`-subsets of `{0..n-1}` in colex order.
///
/// Subset with colex rank `r` is yielded `r`-th; this is the order clones
/// are appended in during evolution.
pub fn colex_subsets(n: usize, m: usize) -> ColexSubsets {
    assert!(m <= n, "colex_subsets: m = {m} exceeds n = {n}");
    ColexSubsets {
        n,
        next: Some((0..m as NodeId).collect()),
    }
}

pub struct ColexSubsets {
    n: usize,
    next: Option<Vec<NodeId>>,
}

impl Iterator for ColexSubsets {
    type Item = Vec<NodeId>;

    fn next(&mut self) -> Option<Vec<NodeId>> {
        let current = self.next.take()?;
        let m = current.len();
        // Successor: bump the lowest element that has room above it,
        // resetting everything below to 0..i-1.
        let mut succ = current.clone();
        let mut advanced = false;
        for i in 0..m {
            let ceiling = if i + 1 < m {
                succ[i + 1]
            } else {
                self.n as NodeId
            };
            if succ[i] + 1 < ceiling {
                succ[i] += 1;
                for (j, slot) in succ[..i].iter_mut().enumerate() {
                    *slot = j as NodeId;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Exact order/size trajectory of the model without materializing anything.
///
/// Starting from `(n0, e0)`, each step adds `C(n, floor(n/k))` nodes and
/// `floor(n/k) * C(n, floor(n/k))` edges. Returns the `steps + 1` pairs for
/// levels `0..=steps`. Pure arithmetic: no node budget applies, but each
/// additional step squares the cost of the binomial, so large `steps` are
/// limited by big-integer cost alone.
pub fn predicted_counts(n0: u64, e0: u64, k: usize, steps: usize) -> Vec<(BigCount, BigCount)> {
    assert!(k >= 1, "k must be >= 1");
    let mut out = Vec::with_capacity(steps + 1);
    let mut n = BigCount::from(n0);
    let mut e = BigCount::from(e0);
    out.push((n.clone(), e.clone()));
    for _ in 0..steps {
        let m = &n / k;
        let clones = binomial_big(&n, &m);
        e += &m * &clones;
        n += clones;
        out.push((n.clone(), e.clone()));
    }
    out
}

/// The clone population `C(n_t, floor(n_t/2))` of the half-model at a level.
pub fn alpha(n: u64) -> BigCount {
    binomial(n, n / 2)
}

/// Central-binomial approximation `C(2n, n) ~ 4^n / sqrt(pi n)`, carried in
/// log space so it stays meaningful far past the range of `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralBinomialApprox {
    log10: f64,
}

impl CentralBinomialApprox {
    pub fn log10(&self) -> f64 {
        self.log10
    }

    /// The approximation as a double; `inf` once past ~1e308.
    pub fn value(&self) -> f64 {
        10f64.powf(self.log10)
    }

    /// Decimal mantissa in `[1, 10)` and exponent, valid at any magnitude.
    pub fn mantissa_exp10(&self) -> (f64, i64) {
        let exp = self.log10.floor();
        (10f64.powf(self.log10 - exp), exp as i64)
    }

    /// Ratio of the approximation to an exact count.
    pub fn ratio_to(&self, exact: &BigCount) -> f64 {
        10f64.powf(self.log10 - log10_big(exact))
    }
}

/// Evaluates `4^n / sqrt(pi n)` for `n >= 1`.
pub fn central_binomial_approx(n: u64) -> CentralBinomialApprox {
    assert!(n >= 1, "central binomial approximation needs n >= 1");
    let n = n as f64;
    CentralBinomialApprox {
        log10: 2.0 * n * std::f64::consts::LOG10_2
            - 0.5 * (std::f64::consts::PI * n).log10(),
    }
}
