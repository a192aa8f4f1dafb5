//! Difference quotients along the grid `x_m` at a prescribed point.

use super::window::window_mass;
use crate::enumeration::Denumeration;
use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use crate::exact::{Interval, Point, Weight};
use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use std::fmt::Write as _;

/// Window tolerance as a function of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsRule {
    /// `f · c_κ · x_m`, so quotient enclosures have width at most `f · c_κ`.
    RelativeToTarget(Rational),
    /// The same absolute tolerance for every window.
    Fixed(Rational),
}

impl Default for EpsRule {
    fn default() -> Self {
        EpsRule::RelativeToTarget(rational::rat(1, 100))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRow {
    pub m: u64,
    pub x_m: Rational,
    /// Encloses `(G(ξ + x_m) − G(ξ)) / x_m`.
    pub plus: Interval<Rational>,
    /// Encloses `(G(ξ) − G(ξ − x_m)) / x_m`.
    pub minus: Interval<Rational>,
}

/// Quotient enclosures at `ξ_κ` for every `m` in `m_lo..=m_hi`.
pub fn quotient_sequence(
    denum: &Denumeration,
    kappa: usize,
    m_lo: u64,
    m_hi: u64,
    eps_rule: &EpsRule,
    weight: Weight,
    scan_limit: &BigUint,
) -> Result<Vec<QuotientRow>> {
    let k_max = denum.params().len();
    if kappa == 0 || kappa > k_max {
        return Err(Error::InvalidArgument(format!("kappa {kappa} outside 1..={k_max}")));
    }
    let m_start = denum.params().cluster(kappa).m;
    if m_lo < m_start || m_hi < m_lo {
        return Err(Error::InvalidArgument(format!(
            "m range {m_lo}..{m_hi} must satisfy {m_start} ≤ lo ≤ hi"
        )));
    }
    let point = denum.prescription().point(kappa);
    let xi = Point::Irrational(point.xi.clone());
    let mut rows = Vec::with_capacity((m_hi - m_lo + 1) as usize);
    for m in m_lo..=m_hi {
        let x_m = denum.grid(kappa, &BigUint::from(m));
        let eps = match eps_rule {
            EpsRule::RelativeToTarget(f) => f * &point.c * &x_m,
            EpsRule::Fixed(e) => e.clone(),
        };
        if !eps.is_positive() {
            return Err(Error::InvalidArgument("window tolerance must be positive".into()));
        }
        let right = Point::Irrational(point.xi.offset(&x_m));
        let left = Point::Irrational(point.xi.offset(&-&x_m));
        let plus = window_mass(denum, weight, &xi, &right, &eps, scan_limit)?;
        let minus = window_mass(denum, weight, &left, &xi, &eps, scan_limit)?;
        let zero = Rational::zero();
        rows.push(QuotientRow {
            m,
            plus: plus.mass.div_scalar(&x_m).clamp_below(&zero),
            minus: minus.mass.div_scalar(&x_m).clamp_below(&zero),
            x_m,
        });
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "m,x_m,Qplus_lo,Qplus_hi,Qminus_lo,Qminus_hi";

/// CSV rendering: exact `p/q` by default, or decimals with `digits`
/// fractional digits, rounding lower endpoints down and upper endpoints up.
pub fn quotients_csv(rows: &[QuotientRow], decimal: Option<u32>) -> String {
    let lo = |r: &Rational| match decimal {
        Some(d) => rational::to_decimal_directed(r, d, false),
        None => rational::format_exact(r),
    };
    let hi = |r: &Rational| match decimal {
        Some(d) => rational::to_decimal_directed(r, d, true),
        None => rational::format_exact(r),
    };
    let mid = |r: &Rational| match decimal {
        Some(d) => rational::to_decimal_nearest(r, d),
        None => rational::format_exact(r),
    };
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.m,
            mid(&row.x_m),
            lo(row.plus.lo()),
            hi(row.plus.hi()),
            lo(row.minus.lo()),
            hi(row.minus.hi())
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{Prescription, ValidationDepth};
    use crate::exact::rational::rat;

    fn three_point() -> Denumeration {
        let p = Prescription::parse(
            "xi = -1 + sqrt(2) ; c = 1\nxi = -1 + sqrt(3) ; c = 2\nxi = -2 + sqrt(5) ; c = 1/2\n",
        )
        .unwrap();
        Denumeration::freeze(p, ValidationDepth::Basic).unwrap()
    }

    #[test]
    fn quotients_approach_targets() {
        let d = three_point();
        let lim = BigUint::from(1_000_000u32);
        for (kappa, c) in [(1, rat(1, 1)), (2, rat(2, 1)), (3, rat(1, 2))] {
            let rows = quotient_sequence(&d, kappa, 400, 402, &EpsRule::default(), Weight::InverseSquare, &lim).unwrap();
            let band = Interval::new(&c * rat(97, 100), &c * rat(103, 100));
            for row in rows {
                assert!(row.plus.is_subset_of(&band), "κ={kappa} m={} {}", row.m, row.plus);
                assert!(row.minus.is_subset_of(&band), "κ={kappa} m={} {}", row.m, row.minus);
                assert!(row.plus.width() <= &c / rational::int(100));
            }
        }
    }

    #[test]
    fn range_validation() {
        let d = three_point();
        let lim = BigUint::from(1000u32);
        let rule = EpsRule::default();
        assert!(quotient_sequence(&d, 4, 2, 3, &rule, Weight::InverseSquare, &lim).is_err());
        assert!(quotient_sequence(&d, 1, 1, 3, &rule, Weight::InverseSquare, &lim).is_err());
        assert!(quotient_sequence(&d, 1, 5, 3, &rule, Weight::InverseSquare, &lim).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = vec![QuotientRow {
            m: 2,
            x_m: rat(1, 648),
            plus: Interval::new(rat(1, 3), rat(2, 3)),
            minus: Interval::new(rat(1, 4), rat(1, 2)),
        }];
        assert_eq!(quotients_csv(&rows, None), format!("{CSV_HEADER}\n2,1/648,1/3,2/3,1/4,1/2\n"));
        assert_eq!(
            quotients_csv(&rows, Some(3)),
            format!("{CSV_HEADER}\n2,0.002,0.333,0.667,0.250,0.500\n")
        );
    }
}
