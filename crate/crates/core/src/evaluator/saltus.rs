use crate::enumeration::{Denumerate, Denumeration};
use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use crate::exact::{DyadicSum, Interval, Point, Weight};
use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive};

/// Truncation point `N` with `Σ_{n>N} weight(n) ≤ eps/2`.
pub fn truncation_for(weight: Weight, eps: &Rational) -> u64 {
    let half = eps / rational::int(2);
    match weight {
        Weight::InverseSquare => rational::ceil(&(rational::int(1) / &half))
            .to_u64()
            .expect("tolerance too small for index-indexed evaluation")
            .max(1),
        Weight::Binary => rational::bits_for(&half).max(1),
    }
}

/// Enclosure of `Σ_{φ(n) < x} weight(n)` of width at most `eps`.
///
/// Sums indices `n ≤ N` in index order, rounding each term outward onto a
/// dyadic grid fine enough that rounding and the tail together stay below
/// `eps`.
pub fn eval_saltus<D: Denumerate + ?Sized>(denum: &D, weight: Weight, x: &Point, eps: &Rational) -> Result<Interval<Rational>> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let big_n = truncation_for(weight, eps);
    let len = usize::try_from(big_n).map_err(|_| Error::InvalidArgument("eps too small".into()))?;
    let bits = match weight {
        Weight::InverseSquare => rational::bits_for(&(eps / rational::int(2 * big_n))),
        Weight::Binary => big_n,
    };
    let mut acc = DyadicSum::new(bits);
    for (i, r) in denum.prefix(len).iter().enumerate() {
        if x.cmp_rational(r).is_gt() {
            let n = BigUint::from(i as u64 + 1);
            match weight {
                Weight::InverseSquare => acc.add_inverse_square(&n),
                Weight::Binary => acc.add_pow2_neg(&n),
            }
        }
    }
    let tail = weight.tail_bound(big_n);
    Ok(acc.enclosure().widen_up(&tail))
}

/// Jump of the saltus function at `r`: the weight of `φ^{-1}(r)`.
pub fn jump_at(denum: &Denumeration, weight: Weight, r: &Rational, scan_limit: &BigUint) -> Result<Rational> {
    let n = denum.index_of(r, scan_limit)?;
    if weight == Weight::Binary && n.to_u64().is_none() {
        return Err(Error::InvalidArgument(format!(
            "index of {} has {} bits; its binary weight is not representable",
            rational::format_exact(r),
            n.bits()
        )));
    }
    Ok(weight.of(&n))
}
