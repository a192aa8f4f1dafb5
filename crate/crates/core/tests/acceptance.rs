//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saltus::enumeration::{CalkinWilf, ValidationDepth};
use saltus::evaluator::{eval_saltus, jump_at, quotient_sequence, quotients_csv, window_mass, EpsRule};
use saltus::exact::rational::{self, rat};
use saltus::verifier::{check_construction, minindex_bounds_check, proposition_witness, ratio_31, WitnessQuery};
use saltus::{cache, Denumeration, Point, Prescription, QuadraticIrrational, Rational, Weight};
use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

const THREE: &str = "xi = -1 + sqrt(2) ; c = 1\nxi = -1 + sqrt(3) ; c = 2\nxi = -2 + sqrt(5) ; c = 1/2\n";

fn three_point() -> Denumeration {
    Denumeration::freeze(Prescription::parse(THREE).unwrap(), ValidationDepth::Basic).unwrap()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("took {t:.1?}, budget {budget:?}"))?;
    Ok(format!("{t:.1?}"))
}

/// Quotients at every ξ_κ stay within 1% of c_κ for m in 2000..=2100.
fn derivative_prescription() -> Outcome {
    let start = Instant::now();
    let d = three_point();
    let limit = BigUint::from(1_000_000u32);
    let mut worst = 0f64;
    for kappa in 1..=3 {
        let c = d.prescription().point(kappa).c.clone();
        let lo = &c * rat(99, 100);
        let hi = &c * rat(101, 100);
        let rows = quotient_sequence(&d, kappa, 2000, 2100, &EpsRule::default(), Weight::InverseSquare, &limit)
            .map_err(|e| e.to_string())?;
        for row in &rows {
            for (side, q) in [("plus", &row.plus), ("minus", &row.minus)] {
                ensure(q.lo() >= &lo && q.hi() <= &hi, || {
                    format!("kappa {kappa} m {} {side}: [{}, {}]", row.m, q.lo(), q.hi())
                })?;
                let dev = rational::to_f64(&((q.hi() - &c) / &c))
                    .abs()
                    .max(rational::to_f64(&((&c - q.lo()) / &c)).abs());
                worst = worst.max(dev);
            }
        }
    }
    let t = within_budget(start, Duration::from_secs(300))?;
    Ok(format!("606 enclosures, worst relative deviation {worst:.2e}, {t}"))
}

/// Strict margins and no counterexample to the window claim up to m = 10^4.
fn construction_validity() -> Outcome {
    let start = Instant::now();
    let d = three_point();
    let rep = check_construction(&d, 10_000);
    for c in &rep.clusters {
        ensure(c.margin_32 > rat(0, 1), || format!("k {} margin_32 = {}", c.k, c.margin_32))?;
        ensure(c.margin_34 > rat(0, 1), || format!("k {} margin_34 = {}", c.k, c.margin_34))?;
        if let Some(m) = &c.margin_33 {
            ensure(m > &rat(0, 1), || format!("k {} margin_33 = {m}", c.k))?;
        }
    }
    ensure(rep.claim_35.violations.is_empty(), || format!("{:?}", rep.claim_35.violations))?;
    ensure(rep.claim_35.pairs_checked == 3 * 10_000, || "wrong pair count".into())?;
    let t = within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{} pairs, {} nonvacuous, {t}", rep.claim_35.pairs_checked, rep.claim_35.nonempty))
}

/// Injectivity and round-trips of the constructed enumeration.
fn bijection_integrity() -> Outcome {
    let start = Instant::now();
    let d = three_point();
    let limit = BigUint::from(1_000_000u32);
    let n_max = 100_000usize;
    d.with_prefix(n_max, |prefix| -> Result<(), String> {
        let distinct: HashSet<&Rational> = prefix.iter().collect();
        ensure(distinct.len() == n_max, || "decode is not injective".into())?;
        for (i, r) in prefix.iter().enumerate() {
            let n = d.index_of(r, &limit).map_err(|e| e.to_string())?;
            ensure(n == BigUint::from(i + 1), || format!("index_of(decode({})) = {n}", i + 1))?;
        }
        Ok(())
    })?;
    let mut checked = 0;
    for q in 2..=50i64 {
        for p in -50..=50i64 {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let r = rat(p, q);
            let n = d.index_of(&r, &limit).map_err(|e| e.to_string())?;
            ensure(d.decode(&n) == r, || format!("decode(index_of({p}/{q})) differs"))?;
            checked += 1;
        }
    }
    for z in -20..=20i64 {
        let r = rational::int(z);
        let n = d.index_of(&r, &limit).map_err(|e| e.to_string())?;
        ensure(d.decode(&n) == r, || format!("decode(index_of({z})) differs"))?;
        checked += 1;
    }
    let t = within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{n_max} indices, {checked} rationals, {t}"))
}

/// Tail ratio enclosures sit inside `[1 − C/m, 1 + C/m]` with `C = 1 + s/d`.
fn asymptotic_ratio() -> Outcome {
    let d = three_point();
    let mut count = 0;
    for k in 1..=3 {
        let cl = d.params().cluster(k).clone();
        for s in [cl.a, cl.b] {
            let c = rat(1, 1) + rat(s as i64, cl.d as i64);
            for m in [10u64, 100, 1000] {
                let e = ratio_31(&d, k, s, m);
                let band = &c / rational::int(m);
                let lo = rat(1, 1) - &band;
                let hi = rat(1, 1) + &band;
                ensure(e.lo() >= &lo && e.hi() <= &hi, || format!("k {k} s {s} m {m}: [{}, {}]", e.lo(), e.hi()))?;
                ensure(e.width() <= rational::int(2) * &band, || format!("k {k} s {s} m {m}: too wide"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} enclosures"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-60..=60), rng.gen_range(1..=24))
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    if rng.gen_bool(0.5) {
        Point::Rational(random_rational(rng))
    } else {
        let w = [2u64, 3, 5, 6, 7, 10][rng.gen_range(0..6)];
        let v = rat(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
        Point::Irrational(QuadraticIrrational::new(random_rational(rng), v, w).unwrap())
    }
}

/// Global bounds, monotonicity, jumps and the eval-vs-window cross-check.
fn saltus_sanity() -> Outcome {
    let d = three_point();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let eps = rat(1, 400);
    let limit = BigUint::from(1_000_000u32);
    let err = |e: saltus::Error| e.to_string();
    for _ in 0..100 {
        let x = random_point(&mut rng);
        let g = eval_saltus(&d, Weight::InverseSquare, &x, &eps).map_err(err)?;
        let f = eval_saltus(&d, Weight::Binary, &x, &eps).map_err(err)?;
        ensure(g.lo() >= &rat(0, 1) && g.hi() <= &rat(2, 1), || format!("G out of range at {x:?}"))?;
        ensure(f.lo() >= &rat(0, 1) && f.hi() <= &rat(1, 1), || format!("F out of range at {x:?}"))?;
    }
    let mut pairs = 0;
    while pairs < 100 {
        let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
        if a == b {
            continue;
        }
        pairs += 1;
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        for w in [Weight::InverseSquare, Weight::Binary] {
            let ga = eval_saltus(&d, w, &Point::Rational(a.clone()), &eps).map_err(err)?;
            let gb = eval_saltus(&d, w, &Point::Rational(b.clone()), &eps).map_err(err)?;
            ensure(ga.lo() <= gb.hi(), || format!("not monotone on {a} < {b}"))?;
        }
        // The window [a, a + h) carries the jump at a and almost nothing else.
        let h = rational::pow2_neg(40);
        let jump = jump_at(&d, Weight::InverseSquare, &a, &limit).map_err(err)?;
        let mass = window_mass(
            &d,
            Weight::InverseSquare,
            &Point::Rational(a.clone()),
            &Point::Rational(&a + &h),
            &rat(1, 1_000_000_000),
            &limit,
        )
        .map_err(err)?;
        ensure(mass.mass.hi() >= &jump && mass.mass.lo() <= &(&jump + rat(1, 1_000_000_000)), || {
            format!("jump at {a} = {jump} vs window [{}, {}]", mass.mass.lo(), mass.mass.hi())
        })?;
    }
    let mut windows = 0;
    while windows < 50 {
        let a = random_point(&mut rng);
        let b = random_point(&mut rng);
        let (lo, hi) = match a.cmp_point(&b) {
            std::cmp::Ordering::Less => (a, b),
            std::cmp::Ordering::Greater => (b, a),
            std::cmp::Ordering::Equal => continue,
        };
        let w = if windows % 2 == 0 { Weight::InverseSquare } else { Weight::Binary };
        windows += 1;
        let glo = eval_saltus(&d, w, &lo, &eps).map_err(err)?;
        let ghi = eval_saltus(&d, w, &hi, &eps).map_err(err)?;
        let diff = ghi - glo;
        let mass = window_mass(&d, w, &lo, &hi, &eps, &limit).map_err(err)?;
        ensure(diff.intersects(&mass.mass), || format!("eval and window disagree on [{lo:?}, {hi:?})"))?;
    }
    Ok("100 points, 100 pairs, 50 windows".into())
}

/// Min-index sandwich and witnesses for both enumerations.
fn proposition_support() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=40);
        let set: BTreeSet<u64> = (0..len).map(|_| rng.gen_range(1..=40)).collect();
        ensure(minindex_bounds_check(&set), || format!("sandwich fails on {set:?}"))?;
    }
    let d = three_point();
    let mut ms = Vec::new();
    for _ in 0..10 {
        let w = [2u64, 3, 5, 7, 11, 13][rng.gen_range(0..6)];
        let xi = QuadraticIrrational::new(random_rational(&mut rng), rat(1, rng.gen_range(1..=4)), w).unwrap();
        let x = rng.gen_range(-3..=3);
        let q = WitnessQuery::new(xi, x, rat(1, 20), 5, 60).map_err(|e| e.to_string())?;
        let a = proposition_witness(&d, &q).ok_or_else(|| format!("no witness (constructed) for {q:?}"))?;
        let b = proposition_witness(&CalkinWilf, &q).ok_or_else(|| format!("no witness (calkin-wilf) for {q:?}"))?;
        ms.push((a.m, b.m));
    }
    let t = within_budget(start, Duration::from_secs(120))?;
    Ok(format!("10^4 subsets, 10/10 queries on both enumerations, witness m {ms:?}, {t}"))
}

/// Two independent freezes give identical cache text and CSV.
fn determinism() -> Outcome {
    let run = || {
        let d = three_point();
        let rows = quotient_sequence(&d, 1, 50, 60, &EpsRule::default(), Weight::InverseSquare, &BigUint::from(1_000_000u32))
            .unwrap();
        (cache::serialize(&d, 2000), quotients_csv(&rows, None), quotients_csv(&rows, Some(9)))
    };
    ensure(run() == run(), || "outputs differ between runs".into())?;
    Ok("cache and CSV byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 derivative prescription", derivative_prescription),
        ("2 construction validity", construction_validity),
        ("3 bijection integrity", bijection_integrity),
        ("4 asymptotic tail ratio", asymptotic_ratio),
        ("5 saltus sanity", saltus_sanity),
        ("6 proposition support", proposition_support),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
