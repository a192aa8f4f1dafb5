//! Prescribed points and derivative values, and their text format.
//!
//! One point per line:
//!
//! ```text
//! # comment
//! xi = -1 + 1*sqrt(2) ; c = 1/1
//! ```

use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use crate::exact::QuadraticIrrational;
use num_traits::Signed;
use sha2::{Digest, Sha256};
use std::cmp::Ordering;

/// Largest supported prescription length; keeps `2·3^(k+1)` within `u64`.
pub const MAX_POINTS: usize = 36;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrescriptionPoint {
    pub xi: QuadraticIrrational,
    pub c: Rational,
}

impl PrescriptionPoint {
    pub fn new(xi: QuadraticIrrational, c: Rational) -> Self {
        PrescriptionPoint { xi, c }
    }

    fn canonical_line(&self) -> String {
        format!("xi = {} ; c = {}", self.xi, rational::format_exact(&self.c))
    }
}

/// A validated, ordered list of `(ξ_k, c_k)`; `k` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Prescription {
    points: Vec<PrescriptionPoint>,
}

impl Prescription {
    pub fn new(points: Vec<PrescriptionPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPrescription("no points given".into()));
        }
        if points.len() > MAX_POINTS {
            return Err(Error::InvalidPrescription(format!(
                "{} points given, at most {MAX_POINTS} supported",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.c.is_positive() {
                return Err(Error::InvalidPrescription(format!(
                    "point {}: c = {} is not positive",
                    i + 1,
                    rational::format_exact(&p.c)
                )));
            }
            for (j, q) in points[..i].iter().enumerate() {
                if p.xi.cmp_irrational(&q.xi) == Ordering::Equal {
                    return Err(Error::InvalidPrescription(format!(
                        "points {} and {} share xi = {}",
                        j + 1,
                        i + 1,
                        p.xi
                    )));
                }
            }
        }
        Ok(Prescription { points })
    }

    /// Parses the line-oriented format described in the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            points.push(parse_line(line).map_err(|message| Error::Parse {
                line: line_no,
                message,
            })?);
        }
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PrescriptionPoint] {
        &self.points
    }

    /// The point with 1-based index `k`.
    pub fn point(&self, k: usize) -> &PrescriptionPoint {
        &self.points[k - 1]
    }

    /// Normalized text form; parsing it yields an equal prescription.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&p.canonical_line());
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn parse_prescription(text: &str) -> Result<Prescription> {
    Prescription::parse(text)
}

fn parse_line(line: &str) -> std::result::Result<PrescriptionPoint, String> {
    let (xi_part, c_part) = line
        .split_once(';')
        .ok_or_else(|| "expected `xi = ... ; c = ...`".to_string())?;
    let xi_text = strip_key(xi_part, "xi")?;
    let c_text = strip_key(c_part, "c")?;
    let xi = QuadraticIrrational::parse(xi_text).map_err(|e| e.to_string())?;
    let c = rational::parse_rational(c_text).map_err(|e| e.to_string())?;
    Ok(PrescriptionPoint { xi, c })
}

fn strip_key<'a>(part: &'a str, key: &str) -> std::result::Result<&'a str, String> {
    let (k, v) = part
        .split_once('=')
        .ok_or_else(|| format!("expected `{key} = ...`"))?;
    if k.trim() != key {
        return Err(format!("expected key `{key}`, found `{}`", k.trim()));
    }
    Ok(v.trim())
}
