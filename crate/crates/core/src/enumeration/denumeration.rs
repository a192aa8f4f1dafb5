//! The frozen bijection `φ: ℕ → ℚ` with exact forward and inverse queries.

use super::encoding::{decompose_odd, encode_odd, fraction_delta, EncodedIndex};
use super::params::{grid_point, ConstructionParams};
use super::prescription::Prescription;
use super::slots::{choose_grid_rational, classify_structured, slot_interval, structured_index, Side};
use super::Denumerate;
use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::RwLock;

/// How much checking `freeze` performs beyond building the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationDepth {
    /// Parameters only.
    Basic,
    /// Also decode `1..=n` and check injectivity and the inverse on it.
    Prefix(u64),
}

/// Branch of the construction an index belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexClass {
    Structured { k: usize, side: Side, n: BigUint },
    Encoded(EncodedIndex),
    /// `rank` is the 0-based position among leftover indices.
    Leftover { rank: BigUint },
}

/// Sorted list of every valid encoded index up to `bound`.
#[derive(Default)]
struct EncodedTable {
    bound: BigUint,
    values: Vec<BigUint>,
}

pub struct Denumeration {
    prescription: Prescription,
    params: ConstructionParams,
    slot_memo: RwLock<HashMap<(usize, Side, BigUint), Rational>>,
    prefix: RwLock<Vec<Rational>>,
    encoded: RwLock<EncodedTable>,
}

impl std::fmt::Debug for Denumeration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Denumeration")
            .field("prescription", &self.prescription)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

/// 0-based leftover rank to integer: `0, 1, −1, 2, −2, …`.
pub fn integer_of_rank(rank: &BigUint) -> BigInt {
    if rank.is_zero() {
        return BigInt::zero();
    }
    let half = BigInt::from((rank + 1u32) >> 1u32);
    if rank.is_odd() {
        half
    } else {
        -half
    }
}

/// Inverse of [`integer_of_rank`].
pub fn rank_of_integer(z: &BigInt) -> BigUint {
    if z.is_positive() {
        (z.magnitude() << 1u32) - 1u32
    } else {
        z.magnitude() << 1u32
    }
}

impl Denumeration {
    /// Builds the construction for `prescription`. Deterministic.
    pub fn freeze(prescription: Prescription, depth: ValidationDepth) -> Result<Self> {
        let params = ConstructionParams::build(&prescription);
        let denum = Denumeration {
            prescription,
            params,
            slot_memo: RwLock::new(HashMap::new()),
            prefix: RwLock::new(Vec::new()),
            encoded: RwLock::new(EncodedTable::default()),
        };
        if let ValidationDepth::Prefix(n) = depth {
            denum.validate_prefix(n)?;
        }
        Ok(denum)
    }

    pub fn prescription(&self) -> &Prescription {
        &self.prescription
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    fn validate_prefix(&self, len: u64) -> Result<()> {
        let len = usize::try_from(len)
            .map_err(|_| Error::InvalidArgument("validation prefix too long".into()))?;
        self.with_prefix(len, |values| {
            let mut seen = HashSet::with_capacity(values.len());
            for (i, r) in values.iter().enumerate() {
                if !seen.insert(r) {
                    return Err(Error::Construction(format!(
                        "value {} repeats at index {}",
                        rational::format_exact(r),
                        i + 1
                    )));
                }
            }
            Ok(())
        })?;
        Ok(())
    }

    /// The rational chosen for slot `n ≥ m_k` of cluster `k`.
    pub fn slot_rational(&self, k: usize, side: Side, n: &BigUint) -> Rational {
        let key = (k, side, n.clone());
        if let Some(r) = self.slot_memo.read().expect("slot memo poisoned").get(&key) {
            return r.clone();
        }
        let point = self.prescription.point(k);
        let cl = self.params.cluster(k);
        let (lo, hi) = slot_interval(&point.xi, &point.c, cl.d, side, n);
        let r = choose_grid_rational(&lo, &hi, cl.prime);
        self.slot_memo
            .write()
            .expect("slot memo poisoned")
            .entry(key)
            .or_insert(r)
            .clone()
    }

    /// Side and slot number whose open interval around `ξ_k` contains `r`,
    /// regardless of `m_k`. `None` if `r` lies beyond `x_1` from `ξ_k`.
    pub fn slot_position(&self, k: usize, r: &Rational) -> Option<(Side, BigUint)> {
        let point = self.prescription.point(k);
        let d = self.params.cluster(k).d;
        let diff = point.xi.subtracted_from(r);
        let (side, dist) = match diff.signum() {
            Ordering::Greater => (Side::Plus, diff),
            _ => (Side::Minus, diff.neg()),
        };
        // x_{n+1} < dist < x_n  ⇔  n < 1/(c d² dist) < n + 1
        let scale = &point.c * rational::int(d) * rational::int(d);
        let n = dist.scale(&scale).recip().floor().to_biguint()?;
        if n.is_zero() {
            return None;
        }
        Some((side, n))
    }

    /// The structured slot `(k, side, n)` whose chosen rational is `r`.
    pub fn slot_of(&self, r: &Rational) -> Option<(usize, Side, BigUint)> {
        let den = r.denom().to_biguint()?;
        if den <= BigUint::one() {
            return None;
        }
        for cl in &self.params.clusters {
            if !is_power_of(&den, cl.prime) {
                continue;
            }
            let (side, n) = self.slot_position(cl.k, r)?;
            if n >= BigUint::from(cl.m) && &self.slot_rational(cl.k, side, &n) == r {
                return Some((cl.k, side, n));
            }
            return None;
        }
        None
    }

    pub fn is_slot_chosen(&self, r: &Rational) -> bool {
        self.slot_of(r).is_some()
    }

    /// Whether the exponent pattern is a genuine image of the explicit formula.
    fn is_valid_encoded(&self, e: &EncodedIndex) -> bool {
        if e.alpha.gcd(&e.beta) != 1 {
            return false;
        }
        let q = BigUint::from(e.beta);
        fraction_delta(&self.prescription, &e.numerator(), &q) == e.gamma
            && !self.is_slot_chosen(&e.rational())
    }

    pub fn classify(&self, n: &BigUint) -> IndexClass {
        assert!(!n.is_zero(), "indices start at 1");
        if let Some((k, side, slot)) = classify_structured(&self.params, n) {
            return IndexClass::Structured { k, side, n: slot };
        }
        if let Some(e) = decompose_odd(n) {
            if self.is_valid_encoded(&e) {
                return IndexClass::Encoded(e);
            }
        }
        IndexClass::Leftover {
            rank: self.leftover_count_le(n) - 1u32,
        }
    }

    fn decode_uncached(&self, n: &BigUint) -> Rational {
        match self.classify(n) {
            IndexClass::Structured { k, side, n } => self.slot_rational(k, side, &n),
            IndexClass::Encoded(e) => e.rational(),
            IndexClass::Leftover { rank } => rational::int(integer_of_rank(&rank)),
        }
    }

    /// `φ(n)` for `n ≥ 1`.
    pub fn decode(&self, n: &BigUint) -> Rational {
        if let Some(i) = n.to_usize() {
            let prefix = self.prefix.read().expect("prefix memo poisoned");
            if i >= 1 && i <= prefix.len() {
                return prefix[i - 1].clone();
            }
        }
        self.decode_uncached(n)
    }

    pub fn decode_u64(&self, n: u64) -> Rational {
        self.decode(&BigUint::from(n))
    }

    /// Runs `f` on `[φ(1), …, φ(len)]`, extending the memoized prefix first.
    pub fn with_prefix<R>(&self, len: usize, f: impl FnOnce(&[Rational]) -> R) -> R {
        {
            let prefix = self.prefix.read().expect("prefix memo poisoned");
            if prefix.len() >= len {
                return f(&prefix[..len]);
            }
        }
        let start = self.prefix.read().expect("prefix memo poisoned").len();
        let fresh: Vec<Rational> = (start + 1..=len)
            .map(|i| self.decode_uncached(&BigUint::from(i)))
            .collect();
        let mut prefix = self.prefix.write().expect("prefix memo poisoned");
        if prefix.len() == start {
            prefix.extend(fresh);
        }
        f(&prefix[..len])
    }

    /// Structured indices `≤ n`, by a closed formula per progression.
    pub fn structured_count_le(&self, n: &BigUint) -> BigUint {
        let mut total = BigUint::zero();
        for cl in &self.params.clusters {
            for s in [cl.a, cl.b] {
                let first = BigUint::from(s) + BigUint::from(cl.m) * cl.d;
                if n >= &first {
                    total += (n - &first) / cl.d + 1u32;
                }
            }
        }
        total
    }

    fn build_encoded_table(&self, bound: &BigUint) -> Vec<BigUint> {
        let mut out = Vec::new();
        let bound_bits = BigUint::from(bound.bits());
        for positive in [false, true] {
            let base13 = BigUint::from(if positive { 13u32 } else { 1 });
            for alpha in 1u64.. {
                let base3 = &base13 * BigUint::from(3u32).pow(alpha as u32);
                if base3.clone() * 25u32 * 7u32 > *bound {
                    break;
                }
                for beta in 2u64.. {
                    let base5 = &base3 * BigUint::from(5u32).pow(beta as u32);
                    if base5.clone() * 7u32 > *bound {
                        break;
                    }
                    if alpha.gcd(&beta) != 1 {
                        continue;
                    }
                    let num = if positive {
                        BigInt::from(alpha)
                    } else {
                        -BigInt::from(alpha)
                    };
                    let e = EncodedIndex {
                        positive,
                        alpha,
                        beta,
                        gamma: fraction_delta(&self.prescription, &num, &BigUint::from(beta)),
                    };
                    if e.bits_lower_bound() > bound_bits {
                        continue;
                    }
                    let v = e.value();
                    if v <= *bound && !self.is_slot_chosen(&e.rational()) {
                        out.push(v);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Valid encoded indices `≤ n`.
    pub fn encoded_count_le(&self, n: &BigUint) -> usize {
        {
            let table = self.encoded.read().expect("encoded table poisoned");
            if n <= &table.bound {
                return table.values.partition_point(|v| v <= n);
            }
        }
        let mut table = self.encoded.write().expect("encoded table poisoned");
        if n > &table.bound {
            let bound = n.max(&(&table.bound << 1u32)).clone().max(BigUint::from(1u32 << 16));
            table.values = self.build_encoded_table(&bound);
            table.bound = bound;
        }
        table.values.partition_point(|v| v <= n)
    }

    /// Number of leftover indices in `1..=n`.
    pub fn leftover_count_le(&self, n: &BigUint) -> BigUint {
        n - self.structured_count_le(n) - BigUint::from(self.encoded_count_le(n))
    }

    /// `φ^{-1}(r)`. Integers are located by binary search over leftover
    /// counts on `1..=scan_limit`.
    pub fn index_of(&self, r: &Rational, scan_limit: &BigUint) -> Result<BigUint> {
        if rational::is_integer(r) {
            return self.integer_index(&r.to_integer(), scan_limit);
        }
        if let Some((k, side, n)) = self.slot_of(r) {
            return Ok(structured_index(&self.params, k, side, &n));
        }
        let q = r.denom().to_biguint().expect("denominator is positive");
        Ok(encode_odd(&self.prescription, r.numer(), &q)?.value())
    }

    fn integer_index(&self, z: &BigInt, scan_limit: &BigUint) -> Result<BigUint> {
        let target = rank_of_integer(z) + 1u32;
        if &target > scan_limit || self.leftover_count_le(scan_limit) < target {
            return Err(Error::ScanLimitExceeded {
                value: z.clone(),
                limit: scan_limit.clone(),
            });
        }
        // Smallest n with leftover_count_le(n) ≥ target; such n is leftover.
        let mut lo = target.clone();
        let mut hi = scan_limit.clone();
        while lo < hi {
            let mid = (&lo + &hi) >> 1u32;
            if self.leftover_count_le(&mid) >= target {
                hi = mid;
            } else {
                lo = mid + 1u32;
            }
        }
        Ok(lo)
    }

    /// `x_n^{(k)}`.
    pub fn grid(&self, k: usize, n: &BigUint) -> Rational {
        grid_point(&self.prescription.point(k).c, self.params.cluster(k).d, n)
    }
}

impl Denumerate for Denumeration {
    fn name(&self) -> &str {
        "constructed"
    }

    fn rational_at(&self, n: u64) -> Rational {
        self.decode_u64(n)
    }

    fn prefix(&self, len: usize) -> Vec<Rational> {
        self.with_prefix(len, |v| v.to_vec())
    }
}

fn is_power_of(n: &BigUint, p: u64) -> bool {
    let mut n = n.clone();
    let p = BigUint::from(p);
    while (&n % &p).is_zero() {
        n /= &p;
    }
    n.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::prescription::PrescriptionPoint;
    use crate::exact::rational::rat;
    use crate::exact::QuadraticIrrational;

    fn three_point() -> Denumeration {
        let pt = |u: i64, w: u64, c: Rational| {
            PrescriptionPoint::new(QuadraticIrrational::new(rat(u, 1), rat(1, 1), w).unwrap(), c)
        };
        let p = Prescription::new(vec![
            pt(-1, 2, rat(1, 1)),
            pt(-1, 3, rat(2, 1)),
            pt(-2, 5, rat(1, 2)),
        ])
        .unwrap();
        Denumeration::freeze(p, ValidationDepth::Basic).unwrap()
    }

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn zigzag() {
        let zs: Vec<BigInt> = (0u64..7).map(|r| integer_of_rank(&b(r))).collect();
        let want: Vec<BigInt> = [0, 1, -1, 2, -2, 3, -3].iter().map(|&z| BigInt::from(z)).collect();
        assert_eq!(zs, want);
        for z in -20i64..=20 {
            assert_eq!(integer_of_rank(&rank_of_integer(&BigInt::from(z))), BigInt::from(z));
        }
    }

    #[test]
    fn decode_examples() {
        let d = three_point();
        assert_eq!(d.decode_u64(42), rat(851, 2048));
        assert_eq!(d.decode_u64(3675), rat(-1, 2));
        assert_eq!(d.decode_u64(1), rat(0, 1));
        let limit = b(1_000_000);
        assert_eq!(d.index_of(&rat(851, 2048), &limit).unwrap(), b(42));
        assert_eq!(d.index_of(&rat(-1, 2), &limit).unwrap(), b(3675));
        assert_eq!(d.index_of(&rat(0, 1), &limit).unwrap(), b(1));
    }

    /// Leftover ranks from a direct scan agree with the counting formula.
    #[test]
    fn leftover_scan_oracle() {
        let d = three_point();
        let mut rank = 0u64;
        for n in 1u64..3000 {
            let n = b(n);
            let structured = classify_structured(d.params(), &n).is_some();
            let encoded = decompose_odd(&n).is_some_and(|e| d.is_valid_encoded(&e));
            if !structured && !encoded {
                assert_eq!(d.classify(&n), IndexClass::Leftover { rank: b(rank) });
                assert_eq!(d.decode(&n), rational::int(integer_of_rank(&b(rank))));
                rank += 1;
            }
        }
    }

    #[test]
    fn roundtrip_small_prefix() {
        let d = three_point();
        let limit = b(100_000);
        let mut seen = HashSet::new();
        for n in 1u64..=4000 {
            let r = d.decode_u64(n);
            assert!(seen.insert(r.clone()), "repeat at {n}");
            assert_eq!(d.index_of(&r, &limit).unwrap(), b(n), "{r}");
        }
    }

    #[test]
    fn scan_limit_reported() {
        let d = three_point();
        let err = d.index_of(&rat(5000, 1), &b(100)).unwrap_err();
        assert!(matches!(err, Error::ScanLimitExceeded { .. }));
    }

    #[test]
    fn slot_values_are_never_encoded() {
        let d = three_point();
        let r = d.slot_rational(1, Side::Plus, &b(2));
        assert!(d.is_slot_chosen(&r));
        assert!(!d.is_slot_chosen(&rat(-1, 2)));
        // A dyadic inside slot 2 that is not the chosen grid point.
        assert!(!d.is_slot_chosen(&rat(1701, 4096)));
    }

    #[test]
    fn concurrent_readers_agree() {
        let d = std::sync::Arc::new(three_point());
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let d = d.clone();
                std::thread::spawn(move || (1u64..500).map(|n| d.decode_u64(n)).collect::<Vec<_>>())
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }
}
