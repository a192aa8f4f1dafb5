use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use saltus::cache;
use saltus::enumeration::{CalkinWilf, ValidationDepth};
use saltus::evaluator::{eval_saltus, quotient_sequence, quotients_csv, EpsRule};
use saltus::exact::rational::{self, parse_rational};
use saltus::verifier::{check_construction, proposition_witness, WitnessQuery};
use saltus::{Denumerate, Denumeration, Point, Prescription, QuadraticIrrational, Rational, Weight};
use num_bigint::BigUint;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "saltus", version, about = "Exact saltus-function construction, evaluation and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Freeze a prescription and write its cache.
    Construct(ConstructArgs),
    /// Enclose the saltus function at a point.
    Eval(EvalArgs),
    /// Write difference-quotient enclosures as CSV.
    Quotients(QuotientArgs),
    /// Re-check the construction inequalities.
    Verify(VerifyArgs),
    /// Search for a band violation of the binary saltus function.
    Witness(WitnessArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Prescription file, one `xi = … ; c = …` line per point.
    #[arg(long)]
    pub prescription: Option<PathBuf>,
    /// Cache written by `construct`; checked against --prescription if both are given.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long)]
    pub prescription: PathBuf,
    #[arg(long)]
    pub cache: PathBuf,
    /// Number of decoded records stored in the cache.
    #[arg(long, default_value_t = 1000)]
    pub records: usize,
    /// Params summary destination (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum EnumerationKind {
    Constructed,
    CalkinWilf,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value = "1/1000")]
    pub eps: String,
    #[arg(long, default_value = "inverse-square")]
    pub weight: Weight,
    #[arg(long, value_enum, default_value_t = EnumerationKind::Constructed)]
    pub enumeration: EnumerationKind,
    #[arg(long)]
    pub decimal: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub kappa: usize,
    /// Inclusive range `lo..hi`.
    #[arg(long)]
    pub m: String,
    /// Fixed window tolerance; by default it is c_κ·x_m/100.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long, default_value = "inverse-square")]
    pub weight: Weight,
    #[arg(long, default_value = "1000000")]
    pub scan_limit: BigUint,
    #[arg(long)]
    pub decimal: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 10_000)]
    pub grid_limit: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value_t = EnumerationKind::Constructed)]
    pub enumeration: EnumerationKind,
    /// The point ξ, e.g. `-1 + sqrt(2)`.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: String,
    /// Candidate derivative exponent x (derivative 2^x).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub exponent: i64,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    /// Inclusive scale range `N..M`.
    #[arg(long, default_value = "5..60")]
    pub m: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `lo..hi` (inclusive).
pub fn parse_range(text: &str) -> Result<(u64, u64)> {
    let (lo, hi) = text
        .split_once("..")
        .with_context(|| format!("range `{text}` is not of the form lo..hi"))?;
    let lo: u64 = lo.trim().parse().with_context(|| format!("bad range start in `{text}`"))?;
    let hi: u64 = hi.trim().parse().with_context(|| format!("bad range end in `{text}`"))?;
    Ok((lo, hi))
}

fn positive(text: &str, what: &str) -> Result<Rational> {
    let r = parse_rational(text)?;
    if r <= Rational::from_integer(0.into()) {
        bail!("{what} must be positive, got {text}");
    }
    Ok(r)
}

fn read_prescription(path: &Path) -> Result<Prescription> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Prescription::parse(&text)?)
}

fn load(source: &Source) -> Result<Denumeration> {
    let pres = source.prescription.as_deref().map(read_prescription).transpose()?;
    match (&source.cache, pres) {
        (Some(path), pres) => Ok(cache::load(path, pres.as_ref())
            .with_context(|| format!("loading cache {}", path.display()))?
            .denumeration),
        (None, Some(pres)) => Ok(Denumeration::freeze(pres, ValidationDepth::Basic)?),
        (None, None) => bail!("one of --prescription or --cache is required"),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn params_summary(denum: &Denumeration) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "fingerprint = {}", denum.prescription().fingerprint());
    let _ = writeln!(s, "k,a,b,d,m,y");
    for c in &denum.params().clusters {
        let _ = writeln!(s, "{},{},{},{},{},{}", c.k, c.a, c.b, c.d, c.m, rational::format_exact(&c.y));
    }
    s
}

fn fmt_endpoint(r: &Rational, decimal: Option<u32>, up: bool) -> String {
    match decimal {
        Some(d) => rational::to_decimal_directed(r, d, up),
        None => rational::format_exact(r),
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Construct(a) => {
            let denum = Denumeration::freeze(read_prescription(&a.prescription)?, ValidationDepth::Basic)?;
            cache::save(&denum, a.records, &a.cache)?;
            emit(a.out.as_deref(), &params_summary(&denum))?;
            Ok(EXIT_PASS)
        }
        Command::Eval(a) => {
            let x = Point::parse(&a.x)?;
            let eps = positive(&a.eps, "--eps")?;
            let e = match a.enumeration {
                EnumerationKind::Constructed => eval_saltus(&load(&a.source)?, a.weight, &x, &eps)?,
                EnumerationKind::CalkinWilf => eval_saltus(&CalkinWilf, a.weight, &x, &eps)?,
            };
            let text = format!(
                "lo = {}\nhi = {}\n",
                fmt_endpoint(e.lo(), a.decimal, false),
                fmt_endpoint(e.hi(), a.decimal, true)
            );
            emit(a.out.as_deref(), &text)?;
            Ok(EXIT_PASS)
        }
        Command::Quotients(a) => {
            let denum = load(&a.source)?;
            let (lo, hi) = parse_range(&a.m)?;
            let rule = match &a.eps {
                Some(e) => EpsRule::Fixed(positive(e, "--eps")?),
                None => EpsRule::default(),
            };
            let rows = quotient_sequence(&denum, a.kappa, lo, hi, &rule, a.weight, &a.scan_limit)?;
            emit(a.out.as_deref(), &quotients_csv(&rows, a.decimal))?;
            Ok(EXIT_PASS)
        }
        Command::Verify(a) => {
            let denum = load(&a.source)?;
            let report = check_construction(&denum, a.grid_limit);
            emit(a.out.as_deref(), &report.to_text())?;
            Ok(if report.passed() { EXIT_PASS } else { EXIT_VIOLATION })
        }
        Command::Witness(a) => {
            let xi = QuadraticIrrational::parse(&a.xi)?;
            let (n, m) = parse_range(&a.m)?;
            let query = WitnessQuery::new(xi, a.exponent, parse_rational(&a.eps)?, n, m)?;
            let enumeration: Box<dyn Denumerate> = match a.enumeration {
                EnumerationKind::Constructed => Box::new(load(&a.source)?),
                EnumerationKind::CalkinWilf => Box::new(CalkinWilf),
            };
            let (text, status) = match proposition_witness(enumeration.as_ref(), &query) {
                Some(w) => (
                    format!(
                        "enumeration = {}\nwitness_m = {}\nside = {}\nenclosure_lo = {}\nenclosure_hi = {}\n",
                        enumeration.name(),
                        w.m,
                        w.side,
                        rational::format_exact(w.enclosure.lo()),
                        rational::format_exact(w.enclosure.hi())
                    ),
                    EXIT_PASS,
                ),
                None => (
                    format!("enumeration = {}\nwitness_m = none\nsearched = {n}..{m}\n", enumeration.name()),
                    EXIT_INCONCLUSIVE,
                ),
            };
            emit(a.out.as_deref(), &text)?;
            Ok(status)
        }
    }
}
