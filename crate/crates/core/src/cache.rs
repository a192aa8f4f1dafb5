//! Plain-text persistence of a frozen construction and a decoded prefix.
//!
//! ```text
//! saltus-cache 1
//! fingerprint <hex>
//! prescription <K>
//! <canonical line>            (K lines)
//! params <K>
//! <k> <a> <b> <d> <m>         (K lines)
//! records <R>
//! <n> <numerator> <denominator>   (n = 1..=R)
//! records_sha256 <hex>
//! ```

use crate::enumeration::{Denumeration, Prescription, ValidationDepth};
use crate::error::{Error, Result};
use crate::exact::Rational;
use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;

pub const FORMAT_NAME: &str = "saltus-cache";
pub const FORMAT_VERSION: u32 = 1;
/// Records recomputed on load.
pub const SPOT_CHECKS: usize = 100;

/// A loaded cache: the re-frozen construction and the stored prefix.
#[derive(Debug)]
pub struct Cache {
    pub denumeration: Denumeration,
    pub records: Vec<Rational>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn record_line(n: usize, r: &Rational) -> String {
    format!("{n} {} {}\n", r.numer(), r.denom())
}

/// Serializes the construction with records `φ(1..=records)`.
pub fn serialize(denum: &Denumeration, records: usize) -> String {
    let pres = denum.prescription();
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_NAME} {FORMAT_VERSION}");
    let _ = writeln!(out, "fingerprint {}", pres.fingerprint());
    let _ = writeln!(out, "prescription {}", pres.len());
    out.push_str(&pres.canonical_text());
    let _ = writeln!(out, "params {}", denum.params().len());
    for c in &denum.params().clusters {
        let _ = writeln!(out, "{} {} {} {} {}", c.k, c.a, c.b, c.d, c.m);
    }
    let _ = writeln!(out, "records {records}");
    let mut hasher = Sha256::new();
    denum.with_prefix(records, |prefix| {
        for (i, r) in prefix.iter().enumerate() {
            let line = record_line(i + 1, r);
            hasher.update(line.as_bytes());
            out.push_str(&line);
        }
    });
    let _ = writeln!(out, "records_sha256 {}", hex(&hasher.finalize()));
    out
}

pub fn save(denum: &Denumeration, records: usize, path: &Path) -> Result<()> {
    std::fs::write(path, serialize(denum, records))?;
    Ok(())
}

/// Reads a cache file; see [`parse`].
pub fn load(path: &Path, expected: Option<&Prescription>) -> Result<Cache> {
    parse(&std::fs::read_to_string(path)?, expected)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.inner
            .next()
            .map(|(i, l)| (i + 1, l))
            .ok_or_else(|| corrupt(format!("truncated before {what}")))
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let (line, text) = self.next(key)?;
        text.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| corrupt(format!("line {line}: expected `{key}`")))
    }

    fn count(&mut self, key: &str) -> Result<usize> {
        let v = self.keyed(key)?;
        v.parse().map_err(|_| corrupt(format!("bad {key} count `{v}`")))
    }
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::CorruptCache(msg.into())
}

/// Parses and validates a cache.
///
/// The embedded prescription is re-frozen and must reproduce the stored
/// fingerprint and params. With `expected`, its fingerprint must match too.
/// The records checksum is verified and [`SPOT_CHECKS`] records, chosen by an
/// RNG seeded from the fingerprint, are recomputed.
pub fn parse(text: &str, expected: Option<&Prescription>) -> Result<Cache> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let header = lines.keyed(FORMAT_NAME)?;
    if header != FORMAT_VERSION.to_string() {
        return Err(corrupt(format!("unsupported version `{header}`")));
    }
    let fingerprint = lines.keyed("fingerprint")?.to_string();
    if let Some(p) = expected {
        let want = p.fingerprint();
        if want != fingerprint {
            return Err(Error::FingerprintMismatch {
                expected: want,
                found: fingerprint,
            });
        }
    }

    let k = lines.count("prescription")?;
    let mut pres_text = String::new();
    for _ in 0..k {
        pres_text.push_str(lines.next("prescription line")?.1);
        pres_text.push('\n');
    }
    let pres = Prescription::parse(&pres_text).map_err(|e| corrupt(format!("embedded prescription: {e}")))?;
    if pres.fingerprint() != fingerprint {
        return Err(corrupt("embedded prescription does not match fingerprint"));
    }
    let denum = Denumeration::freeze(pres, ValidationDepth::Basic)?;

    let pk = lines.count("params")?;
    if pk != denum.params().len() {
        return Err(corrupt("params block size differs from prescription"));
    }
    for c in &denum.params().clusters {
        let (line, text) = lines.next("params line")?;
        let want = format!("{} {} {} {} {}", c.k, c.a, c.b, c.d, c.m);
        if text != want {
            return Err(corrupt(format!("line {line}: params `{text}` differ from recomputed `{want}`")));
        }
    }

    let count = lines.count("records")?;
    let mut records = Vec::with_capacity(count);
    let mut hasher = Sha256::new();
    for n in 1..=count {
        let (line, text) = lines.next("record")?;
        let bad = || corrupt(format!("line {line}: malformed record"));
        let mut parts = text.split(' ');
        let idx: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let num: BigInt = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let den: BigInt = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if idx != n || parts.next().is_some() || den <= BigInt::from(0) {
            return Err(bad());
        }
        let r = Rational::new(num, den);
        if record_line(n, &r) != format!("{text}\n") {
            return Err(corrupt(format!("line {line}: record not in lowest terms")));
        }
        hasher.update(format!("{text}\n").as_bytes());
        records.push(r);
    }
    let sum = lines.keyed("records_sha256")?;
    if sum != hex(&hasher.finalize()) {
        return Err(corrupt("records checksum mismatch"));
    }
    if lines.inner.next().is_some() {
        return Err(corrupt("trailing content"));
    }

    let mut seed = [0u8; 32];
    seed.copy_from_slice(&Sha256::digest(fingerprint.as_bytes()));
    let mut rng = ChaCha20Rng::from_seed(seed);
    for i in sample(&mut rng, count, SPOT_CHECKS.min(count)).into_iter() {
        let n = i as u64 + 1;
        if denum.decode_u64(n) != records[i] {
            return Err(corrupt(format!("record {n} disagrees with recomputation")));
        }
    }
    Ok(Cache {
        denumeration: denum,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE: &str = "xi = -1 + sqrt(2) ; c = 1\nxi = -1 + sqrt(3) ; c = 2\nxi = -2 + sqrt(5) ; c = 1/2\n";

    fn three_point() -> Denumeration {
        Denumeration::freeze(Prescription::parse(THREE).unwrap(), ValidationDepth::Basic).unwrap()
    }

    #[test]
    fn roundtrip_and_determinism() {
        let a = serialize(&three_point(), 500);
        assert_eq!(a, serialize(&three_point(), 500));
        let d = three_point();
        let cache = parse(&a, Some(d.prescription())).unwrap();
        assert_eq!(cache.records.len(), 500);
        for (i, r) in cache.records.iter().enumerate() {
            assert_eq!(&d.decode_u64(i as u64 + 1), r);
            assert_eq!(&cache.denumeration.decode_u64(i as u64 + 1), r);
        }
    }

    #[test]
    fn edited_record_is_corrupt() {
        let text = serialize(&three_point(), 50);
        let line = record_line(42, &three_point().decode_u64(42));
        let edited = text.replace(&line, "42 1 7\n");
        assert_ne!(edited, text);
        assert!(matches!(parse(&edited, None), Err(Error::CorruptCache(_))));
    }

    /// A consistent re-checksum cannot hide a wrong record from recomputation
    /// when every record is spot-checked.
    #[test]
    fn rechecksummed_edit_is_caught() {
        let d = three_point();
        let mut text = serialize(&d, 60);
        let line = record_line(17, &d.decode_u64(17));
        text = text.replace(&line, "17 1 7\n");
        let start = text.find("records 60\n").unwrap() + "records 60\n".len();
        let tail = text.rfind("records_sha256").unwrap();
        let body = text[start..tail].to_string();
        text.truncate(tail);
        text.push_str(&format!("records_sha256 {}\n", hex(&Sha256::digest(body.as_bytes()))));
        assert!(
            matches!(parse(&text, None), Err(Error::CorruptCache(m)) if m.contains("recomputation")),
        );
    }

    #[test]
    fn other_prescription_is_fingerprint_error() {
        let text = serialize(&three_point(), 10);
        let other = Prescription::parse("xi = -1 + sqrt(2) ; c = 1").unwrap();
        assert!(matches!(parse(&text, Some(&other)), Err(Error::FingerprintMismatch { .. })));
    }

    #[test]
    fn truncated_and_versioned() {
        let text = serialize(&three_point(), 10);
        assert!(parse(&text[..text.len() / 2], None).is_err());
        assert!(parse(&text.replace("saltus-cache 1", "saltus-cache 2"), None).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cache");
        save(&three_point(), 100, &path).unwrap();
        let loaded = load(&path, None).unwrap();
        assert_eq!(serialize(&loaded.denumeration, 100), std::fs::read_to_string(&path).unwrap());
    }
}
