//! Quadratic irrationals `u + v·√w` with exact order decisions.
//!
//! The radicand is kept squarefree, so two values are equal exactly when their
//! normalized coefficients agree (`1` and `√w` are linearly independent over ℚ,
//! and so are `√w₁`, `√w₂` for distinct squarefree `w₁, w₂`).

use super::interval::Interval;
use super::rational::{self, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational {
    u: Rational,
    v: Rational,
    w: u64,
}

/// Splits `w` into `(f, r)` with `w = f²·r` and `r` squarefree.
fn squarefree_part(mut w: u64) -> (u64, u64) {
    let mut f = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= w {
        while w.is_multiple_of(p * p) {
            w /= p * p;
            f *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (f, w)
}

impl QuadraticIrrational {
    /// Builds `u + v·√w`. Fails when the value would be rational.
    pub fn new(u: Rational, v: Rational, w: u64) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::InvalidIrrational(format!(
                "coefficient of sqrt({w}) must be nonzero"
            )));
        }
        if w == 0 {
            return Err(Error::InvalidIrrational("radicand must be positive".into()));
        }
        let (f, r) = squarefree_part(w);
        if r == 1 {
            return Err(Error::InvalidIrrational(format!(
                "radicand {w} is a perfect square"
            )));
        }
        Ok(QuadraticIrrational {
            u,
            v: v * rational::int(f),
            w: r,
        })
    }

    /// `√w` for nonsquare `w`.
    pub fn sqrt(w: u64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), w)
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }

    pub fn w(&self) -> u64 {
        self.w
    }

    /// `self + r`.
    pub fn offset(&self, r: &Rational) -> Self {
        QuadraticIrrational {
            u: &self.u + r,
            v: self.v.clone(),
            w: self.w,
        }
    }

    /// `self · k` for nonzero `k`.
    pub fn scale(&self, k: &Rational) -> Self {
        assert!(!k.is_zero());
        QuadraticIrrational {
            u: &self.u * k,
            v: &self.v * k,
            w: self.w,
        }
    }

    pub fn neg(&self) -> Self {
        QuadraticIrrational {
            u: -&self.u,
            v: -&self.v,
            w: self.w,
        }
    }

    /// `r − self`.
    pub fn subtracted_from(&self, r: &Rational) -> Self {
        self.neg().offset(r)
    }

    /// `1 / self`, which is again a quadratic irrational.
    pub fn recip(&self) -> Self {
        let norm = &self.u * &self.u - &self.v * &self.v * rational::int(self.w);
        QuadraticIrrational {
            u: &self.u / &norm,
            v: -&self.v / &norm,
            w: self.w,
        }
    }

    /// Exact sign; never zero.
    pub fn signum(&self) -> Ordering {
        let su = self.u.cmp(&Rational::zero());
        let sv = self.v.cmp(&Rational::zero());
        if su == Ordering::Equal || su == sv {
            return sv;
        }
        let u2 = &self.u * &self.u;
        let v2w = &self.v * &self.v * rational::int(self.w);
        if u2 > v2w {
            su
        } else {
            sv
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Exact order of `self` versus `r`. Equality is impossible.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.offset(&-r).signum()
    }

    /// Exact `⌊self⌋` via one integer square root.
    pub fn floor(&self) -> BigInt {
        let d = self.u.denom().lcm(self.v.denom());
        let a = (&self.u * Rational::from_integer(d.clone())).to_integer();
        let b = (&self.v * Rational::from_integer(d.clone())).to_integer();
        let s = (&b * &b * BigInt::from(self.w)).sqrt();
        let top = if b.is_positive() { a + s } else { a - s - 1 };
        top.div_floor(&d)
    }

    /// Exact `⌈self⌉ = ⌊self⌋ + 1` (the value is never an integer).
    pub fn ceil(&self) -> BigInt {
        self.floor() + 1
    }

    /// Enclosure `[k/2^bits, (k+1)/2^bits]` with `k = ⌊self · 2^bits⌋`.
    pub fn enclosure_bits(&self, bits: u64) -> Interval<Rational> {
        let scale = Rational::from_integer(BigInt::from(rational::pow2(bits)));
        let k = self.scale(&scale).floor();
        Interval::new(
            rational::dyadic(k.clone(), bits),
            rational::dyadic(k + 1, bits),
        )
    }

    /// Enclosure of width at most `width_cap > 0`.
    pub fn refine(&self, width_cap: &Rational) -> Interval<Rational> {
        self.enclosure_bits(rational::bits_for(width_cap))
    }

    /// Exact order between two quadratic irrationals.
    pub fn cmp_irrational(&self, other: &Self) -> Ordering {
        if self.w == other.w {
            let du = &self.u - &other.u;
            let dv = &self.v - &other.v;
            if dv.is_zero() {
                return du.cmp(&Rational::zero());
            }
            return QuadraticIrrational {
                u: du,
                v: dv,
                w: self.w,
            }
            .signum();
        }
        // Distinct squarefree radicands: the values differ, so refinement ends.
        let mut bits = 32;
        loop {
            let a = self.enclosure_bits(bits);
            let b = other.enclosure_bits(bits);
            if a.hi() < b.lo() {
                return Ordering::Less;
            }
            if b.hi() < a.lo() {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.u) + rational::to_f64(&self.v) * (self.w as f64).sqrt()
    }

    /// Parses `u + v*sqrt(w)`, also accepting `u - v*sqrt(w)`, `v*sqrt(w)`,
    /// `sqrt(w)` and `u + sqrt(w)`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidIrrational(format!("{why}: `{}`", text.trim()));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let at = compact
            .find("sqrt(")
            .ok_or_else(|| bad("missing sqrt(...)"))?;
        let close = compact[at..]
            .find(')')
            .map(|i| i + at)
            .ok_or_else(|| bad("unclosed sqrt("))?;
        if close + 1 != compact.len() {
            return Err(bad("trailing characters after sqrt(...)"));
        }
        let w: u64 = compact[at + 5..close]
            .parse()
            .map_err(|_| bad("radicand must be a positive integer"))?;
        let head = &compact[..at];
        let head = head.strip_suffix('*').unwrap_or(head);
        // Split "u+v" / "u-v" at the last sign that follows a digit.
        let bytes = head.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit());
        let (u_text, v_text) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let u = if u_text.is_empty() {
            Rational::zero()
        } else {
            rational::parse_rational(u_text).map_err(|_| bad("bad rational part"))?
        };
        let v = match v_text {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            t => {
                let t = t.strip_prefix('+').unwrap_or(t);
                rational::parse_rational(t).map_err(|_| bad("bad coefficient"))?
            }
        };
        Self::new(u, v, w)
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt({})",
            rational::format_exact(&self.u),
            rational::format_exact(&self.v),
            self.w
        )
    }
}
