//! Per-point construction parameters: the progressions `a_k + n d_k`,
//! `b_k + n d_k`, the separation bound `δ_k`, and the starting index `m_k`.

use super::prescription::{Prescription, PrescriptionPoint};
use crate::exact::rational::{self, Rational};
use crate::exact::{shifted_tail_bounds, Interval};
use num_bigint::BigUint;
use num_traits::{One, Signed};

/// `(a_k, b_k, d_k) = (2·3^k, 4·3^k, 2·3^(k+1))`.
pub fn progressions(k: usize) -> (u64, u64, u64) {
    assert!(k >= 1, "progression index starts at 1");
    let p = 3u64.pow(k as u32);
    (2 * p, 4 * p, 6 * p)
}

/// The `k`-th prime, 1-based.
pub fn nth_prime(k: usize) -> u64 {
    assert!(k >= 1);
    let mut found = 0;
    let mut candidate = 1u64;
    while found < k {
        candidate += 1;
        if (2..candidate).take_while(|d| d * d <= candidate).all(|d| !candidate.is_multiple_of(d)) {
            found += 1;
        }
    }
    candidate
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterParams {
    pub k: usize,
    pub a: u64,
    pub b: u64,
    pub d: u64,
    pub m: u64,
    /// `y_k = x_{m_k} = 1/(c_k d_k² m_k)`
    pub y: Rational,
    /// Certified `L` with `δ_k/2 ≤ L ≤ δ_k`.
    pub delta_lb: Rational,
    pub prime: u64,
}

impl ClusterParams {
    /// `c_k y_k = 1/(d_k² m_k)`.
    pub fn cy(&self, c: &Rational) -> Rational {
        c * &self.y
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub clusters: Vec<ClusterParams>,
}

impl ConstructionParams {
    pub fn cluster(&self, k: usize) -> &ClusterParams {
        &self.clusters[k - 1]
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Computes every cluster in order. Deterministic in the prescription.
    pub fn build(prescription: &Prescription) -> Self {
        let mut clusters: Vec<ClusterParams> = Vec::with_capacity(prescription.len());
        for k in 1..=prescription.len() {
            let (a, b, d) = progressions(k);
            let delta_lb = separation_lower_bound(prescription, k);
            let m = select_m(prescription, &clusters, k);
            let y = grid_point(&prescription.point(k).c, d, &BigUint::from(m));
            clusters.push(ClusterParams {
                k,
                a,
                b,
                d,
                m,
                y,
                delta_lb,
                prime: nth_prime(k),
            });
        }
        ConstructionParams { clusters }
    }
}

/// `x_n = 1/(c d² n)`.
pub fn grid_point(c: &Rational, d: u64, n: &BigUint) -> Rational {
    let den = rational::int(BigUint::from(d) * BigUint::from(d) * n) * c;
    Rational::one() / den
}

/// Enclosure of `|ξ_i − ξ_k|` whose lower end is at least half its upper end.
fn distance_enclosure(a: &PrescriptionPoint, b: &PrescriptionPoint) -> Interval<Rational> {
    let mut bits = 16;
    loop {
        let diff = a.xi.enclosure_bits(bits) - b.xi.enclosure_bits(bits);
        let abs = if diff.lo().is_positive() {
            Some(diff)
        } else if diff.hi().is_negative() {
            Some(-diff)
        } else {
            None
        };
        if let Some(abs) = abs {
            if abs.width() <= *abs.lo() {
                return abs;
            }
        }
        bits += 16;
    }
}

/// Rational `L` with `0 < L ≤ δ_k` and `L ≥ δ_k/2`, where `δ_1 = 1` and
/// `δ_k = min_{i<k} |ξ_i − ξ_k|`.
pub fn separation_lower_bound(prescription: &Prescription, k: usize) -> Rational {
    assert!(k >= 1 && k <= prescription.len());
    if k == 1 {
        return Rational::one();
    }
    let target = prescription.point(k);
    (1..k)
        .map(|i| distance_enclosure(prescription.point(i), target).lo().clone())
        .min()
        .expect("k ≥ 2 has predecessors")
}

/// Conditions on `m` for cluster `k`, each a sufficient surrogate for the
/// exact inequality:
/// 1. `y + sqrt_upper(c y) < L/2`,
/// 2. `2 c y < c_{k−1} y_{k−1}` (for `k ≥ 2`; strict so that the margin
///    reported by the verifier is positive),
/// 3. both sandwich tails `≤ 2 c y`.
fn conditions_hold(
    point: &PrescriptionPoint,
    prev_cy: Option<&Rational>,
    delta_lb: &Rational,
    (a, b, d): (u64, u64, u64),
    m: u64,
) -> bool {
    let big_m = BigUint::from(m);
    let y = grid_point(&point.c, d, &big_m);
    let cy = &point.c * &y;
    let half = delta_lb / rational::int(2);
    let bits = rational::bits_for(&half) + 24;
    if &y + rational::sqrt_upper(&cy, bits) >= half {
        return false;
    }
    let two_cy = &cy * rational::int(2);
    if let Some(prev) = prev_cy {
        if &two_cy >= prev {
            return false;
        }
    }
    shifted_tail_bounds(a, d, &big_m).hi() <= &two_cy
        && shifted_tail_bounds(b, d, &big_m).hi() <= &two_cy
}

/// Minimal `m ≥ 1` satisfying the construction conditions for cluster `k`.
///
/// Every condition is monotone in `m`, so a short linear scan is followed by
/// doubling and a binary search for the least passing value.
pub fn select_m(prescription: &Prescription, earlier: &[ClusterParams], k: usize) -> u64 {
    assert_eq!(earlier.len(), k - 1, "clusters must be selected in order");
    let point = prescription.point(k);
    let prev_cy = earlier
        .last()
        .map(|p| p.cy(&prescription.point(p.k).c));
    let delta_lb = separation_lower_bound(prescription, k);
    let prog = progressions(k);
    let ok = |m: u64| conditions_hold(point, prev_cy.as_ref(), &delta_lb, prog, m);

    const LINEAR: u64 = 64;
    if let Some(m) = (1..=LINEAR).find(|&m| ok(m)) {
        return m;
    }
    let mut fail = LINEAR;
    let mut pass = LINEAR * 2;
    while !ok(pass) {
        fail = pass;
        pass = pass.checked_mul(2).expect("no admissible m within u64");
    }
    while pass - fail > 1 {
        let mid = fail + (pass - fail) / 2;
        if ok(mid) {
            pass = mid;
        } else {
            fail = mid;
        }
    }
    pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::prescription::PrescriptionPoint;
    use crate::exact::rational::rat;
    use crate::exact::QuadraticIrrational;

    fn pt(u: i64, w: u64, c: Rational) -> PrescriptionPoint {
        PrescriptionPoint::new(
            QuadraticIrrational::new(rat(u, 1), rat(1, 1), w).unwrap(),
            c,
        )
    }

    fn three_point() -> Prescription {
        Prescription::new(vec![
            pt(-1, 2, rat(1, 1)),
            pt(-1, 3, rat(2, 1)),
            pt(-2, 5, rat(1, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn progression_triples() {
        assert_eq!(progressions(1), (6, 12, 18));
        assert_eq!(progressions(2), (18, 36, 54));
        assert_eq!(progressions(3), (54, 108, 162));
    }

    #[test]
    fn primes() {
        let first: Vec<u64> = (1..=8).map(nth_prime).collect();
        assert_eq!(first, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn separation_bounds() {
        let p = three_point();
        assert_eq!(separation_lower_bound(&p, 1), rat(1, 1));
        // √3 − √2 ≈ 0.317837
        let l2 = separation_lower_bound(&p, 2);
        assert!(l2 <= rat(317_837, 1_000_000) && l2 >= rat(158_918, 1_000_000));
        // min(|√5−2−(√2−1)|, |√5−2−(√3−1)|) ≈ 0.178142
        let l3 = separation_lower_bound(&p, 3);
        assert!(l3 <= rat(178_142, 1_000_000) && l3 >= rat(89_071, 1_000_000));
    }

    #[test]
    fn select_m_examples() {
        let p = three_point();
        let params = ConstructionParams::build(&p);
        let c1 = params.cluster(1);
        assert_eq!(c1.m, 2);
        assert_eq!(c1.y, rat(1, 648));
        let c2 = params.cluster(2);
        assert_eq!(c2.m, 2);
        // y₂ = 1/(c₂ d₂² m₂) = 1/(2·2916·2); c₂ y₂ = 1/5832
        assert_eq!(c2.y, rat(1, 11664));
        assert_eq!(c2.cy(&rat(2, 1)), rat(1, 5832));
        assert_eq!(params.cluster(3).m, 2);
    }

    #[test]
    fn extreme_c_still_satisfies_predicates() {
        // Tiny c inflates y = 1/(c d² m); large c leaves m small.
        let big = Prescription::new(vec![pt(-1, 2, rat(1_000_000, 1))]).unwrap();
        let m_big = select_m(&big, &[], 1);
        assert!(conditions_hold(big.point(1), None, &rat(1, 1), progressions(1), m_big));
        let p = Prescription::new(vec![pt(-1, 2, rat(1, 1_000_000))]).unwrap();
        let m = select_m(&p, &[], 1);
        assert!(m > 1000);
        let ok = |m: u64| {
            conditions_hold(
                p.point(1),
                None,
                &rat(1, 1),
                progressions(1),
                m,
            )
        };
        assert!(ok(m));
        assert!(!ok(m - 1));
    }

    #[test]
    fn close_points_need_large_m() {
        let xi = QuadraticIrrational::new(rat(-1, 1), rat(1, 1), 2).unwrap();
        let p = Prescription::new(vec![
            PrescriptionPoint::new(xi.clone(), rat(1, 1)),
            PrescriptionPoint::new(xi.offset(&rat(1, 10_000)), rat(1, 1)),
        ])
        .unwrap();
        let params = ConstructionParams::build(&p);
        let c2 = params.cluster(2);
        // y + √y < 1/20000 forces y < 2.5e-9, i.e. m ≳ 1.37e5.
        assert!(c2.m > 130_000, "m₂ = {}", c2.m);
    }
}
