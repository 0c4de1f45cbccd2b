//! The derivative-growth contradiction: `2^k` disjoint intervals of length at
//! least `A^{3N}(3/4)^{k−N}|J|` cannot fit in `[a,b]` once
//! `(3/2)^k` outgrows the ratio of lengths.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthCertificate {
    pub a: BigRational,
    pub n: u32,
    pub j_len: BigRational,
    pub ab_len: BigRational,
    /// Least `k ≥ N` with `2^k A^{3N} (3/4)^{k−N} |J| > |[a,b]|`.
    pub k_star: u32,
    /// `2^{k*} A^{3N} (3/4)^{k*−N} |J|`.
    pub total_at_k_star: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow(q: &BigRational, e: u32) -> BigRational {
    num_traits::pow(q.clone(), e as usize)
}

/// `2^k A^{3N} (3/4)^{k−N} |J|`, the total length forced by `2^k` disjoint
/// intervals, each at least `A^{3N} (3/4)^{k−N} |J|`.
pub fn total_lower_bound(a: &BigRational, n: u32, j_len: &BigRational, k: u32) -> BigRational {
    assert!(k >= n, "the bound starts at k = N");
    pow(&rat(3, 2), k) * pow(&rat(4, 3), n) * pow(a, 3 * n) * j_len
}

/// Exact search for the first `k ≥ N` at which the bound exceeds `|[a,b]|`.
pub fn growth_contradiction(a: &BigRational, n: u32, j_len: &BigRational, ab_len: &BigRational) -> GrowthCertificate {
    assert!(a.is_positive() && a < &BigRational::one(), "need 0 < A < 1");
    assert!(j_len.is_positive() && ab_len.is_positive(), "lengths must be positive");
    let exceeds = |k: u32| &total_lower_bound(a, n, j_len, k) > ab_len;
    // the bound grows by 3/2 per step: gallop, then bisect
    let (mut lo, mut hi) = (n, n);
    let mut step = 1u32;
    while !exceeds(hi) {
        lo = hi + 1;
        hi = hi.checked_add(step).expect("k* fits in u32");
        step = step.saturating_mul(2);
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    GrowthCertificate {
        a: a.clone(),
        n,
        j_len: j_len.clone(),
        ab_len: ab_len.clone(),
        k_star: lo,
        total_at_k_star: total_lower_bound(a, n, j_len, lo),
    }
}

fn ln_rational(q: &BigRational) -> f64 {
    let bits = |b: &BigInt| b.bits() as i64;
    let (nb, db) = (bits(q.numer()), bits(q.denom()));
    // scale both into f64 range before taking logarithms
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let num = (q.numer() >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let den = (q.denom() >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    num.ln() - den.ln() + (shift_n - shift_d) as f64 * std::f64::consts::LN_2
}

/// The same threshold from logarithms:
/// `k* = max(N, ⌊ln(|[a,b]| / (A^{3N}(4/3)^N|J|)) / ln(3/2)⌋ + 1)`.
pub fn growth_threshold_log(a: f64, n: u32, j_len: f64, ab_len: f64) -> u32 {
    let rhs = ab_len.ln() - 3.0 * n as f64 * a.ln() - n as f64 * (4.0f64 / 3.0).ln() - j_len.ln();
    let k = (rhs / 1.5f64.ln()).floor() + 1.0;
    (k.max(0.0) as u32).max(n)
}

impl GrowthCertificate {
    /// `ln` of the bound at `k*`, for reports.
    pub fn ln_total(&self) -> f64 {
        ln_rational(&self.total_at_k_star)
    }

    pub fn holds(&self) -> bool {
        self.total_at_k_star > self.ab_len
            && (self.k_star == self.n || total_lower_bound(&self.a, self.n, &self.j_len, self.k_star - 1) <= self.ab_len)
    }
}

impl fmt::Display for GrowthCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A = {}, N = {}, |J| = {}, |[a,b]| = {}: 2^k A^3N (3/4)^(k-N) |J| grows like (3/2)^k and exceeds |[a,b]| first at k* = {}",
            self.a, self.n, self.j_len, self.ab_len, self.k_star
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_case() {
        let c = growth_contradiction(&rat(1, 2), 4, &rat(1, 100), &rat(1, 1));
        assert_eq!(c.k_star, 30);
        assert!(c.holds());
        assert_eq!(growth_threshold_log(0.5, 4, 0.01, 1.0), 30);
        // (3/2)^30 ≈ 1.9·10⁵ clears 2¹²(3/4)⁴·100 = 129600, (3/2)^29 does not
        assert!(pow(&rat(3, 2), 30) > rat(129_600, 1));
        assert!(pow(&rat(3, 2), 29) < rat(129_600, 1));
    }

    #[test]
    fn limiting_cases() {
        let c = growth_contradiction(&rat(1, 2), 4, &rat(1, 1), &rat(1, 1));
        // (3/2)^k > 2¹²(3/4)⁴ = 1296
        assert_eq!(c.k_star, 18);
        // the bound already holds at k = N
        let c = growth_contradiction(&rat(99, 100), 2, &rat(10, 1), &rat(1, 1));
        assert_eq!(c.k_star, 2);
        // A → 1 with N = 0 leaves (3/2)^k > |[a,b]|/|J|
        let c = growth_contradiction(&rat(999, 1000), 0, &rat(1, 10), &rat(1, 1));
        assert_eq!(c.k_star, 6);
        assert!(ln_rational(&c.total_at_k_star) > 0.0);
    }

    #[test]
    fn monotone_on_a_grid() {
        let js = [rat(1, 1000), rat(1, 100), rat(1, 10), rat(1, 2), rat(1, 1)];
        let abs = [rat(1, 2), rat(1, 1), rat(2, 1), rat(10, 1), rat(100, 1)];
        for (a, n) in [(rat(1, 2), 4), (rat(3, 4), 1)] {
            for ab in &abs {
                let ks: Vec<u32> = js.iter().map(|j| growth_contradiction(&a, n, j, ab).k_star).collect();
                assert!(ks.windows(2).all(|w| w[1] <= w[0]), "{ks:?}");
            }
            for j in &js {
                let ks: Vec<u32> = abs.iter().map(|ab| growth_contradiction(&a, n, j, ab).k_star).collect();
                assert!(ks.windows(2).all(|w| w[1] >= w[0]), "{ks:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn exact_and_log_agree(an in 1i64..99, n in 0u32..8, jn in 1i64..1000, abn in 1i64..1000) {
            let (a, j, ab) = (rat(an, 100), rat(jn, 1000), rat(abn, 100));
            let c = growth_contradiction(&a, n, &j, &ab);
            prop_assert!(c.holds());
            let log = growth_threshold_log(an as f64 / 100.0, n, jn as f64 / 1000.0, abn as f64 / 100.0);
            // the logarithmic route can only be off at exact ties
            prop_assert!((c.k_star as i64 - log as i64).abs() <= 1);
        }
    }
}
