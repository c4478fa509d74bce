//! Command-line surface: coefficient tables, transforms of atom and jet
//! files, pole tables, the radial-homogeneous classifier, and the
//! verification suites.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on domain errors (the
//! error name is echoed), 3 when a verification case fails.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde_json::{json, Value};

use crate::distributions::{radial_homogeneous_generator, SlAtom};
use crate::finitepart::{
    fp_query, pf_power_family_at_infinity, pf_power_family_at_zero, FpKind, FpResult,
};
use crate::fourier::{ft_jet, ft_star, ft_upper_star, ift_jet};
use crate::json as js;
use crate::kernelops::{kappa_coeff, lambda_coeff};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "thickfourier",
    about = "Coefficient tables, transforms and verification for the thick Fourier calculus",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Table of the diagonal kernel coefficients kappa_{beta,m}.
    KappaTable(KappaTableArgs),
    /// Table of the log-slot coefficients lambda_{q,q-2m}.
    LambdaTable(LambdaTableArgs),
    /// Transform an atom file (star: thick to sl-thick; upper: back).
    Ft(FtArgs),
    /// Transform a jet file (thick jets forward, W jets backward).
    JetFt(JetFtArgs),
    /// Pole table of a finite-part power family over an integer range.
    PoleTable(PoleTableArgs),
    /// The radial homogeneous generator of a given order.
    Generator(GeneratorArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct KappaTableArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Rational parameter beta, e.g. "-2" or "-3/2".
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    /// Harmonic degree or inclusive range, e.g. "2" or "0..4".
    #[arg(long)]
    m: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Display digits for float columns (THICKFOURIER_PRECISION overrides).
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args)]
struct LambdaTableArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Non-negative integer order q.
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Star,
    Upper,
}

#[derive(Args)]
struct FtArgs {
    #[arg(long, value_enum)]
    dir: Direction,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct JetFtArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Project the forward image onto the polynomial-free space.
    #[arg(long)]
    project: bool,
    /// Truncate output orders to |q| <= this bound.
    #[arg(long)]
    truncation: Option<i64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pf,
    Pfw,
}

#[derive(Args)]
struct PoleTableArgs {
    #[arg(long, value_enum, default_value = "pfw")]
    family: Family,
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Lower end of the integer parameter range (inclusive).
    #[arg(long, default_value_t = -6, allow_hyphen_values = true)]
    lo: i64,
    /// Upper end of the integer parameter range (inclusive).
    #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
    hi: i64,
}

#[derive(Args)]
struct GeneratorArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Rational homogeneity order, e.g. "-3" or "-1/2".
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Runs the CLI on the given argument list and returns the process exit
/// code; output goes to stdout (or `--out` files).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message (including --help text)
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {} ({})", e, e.name());
            2
        }
    }
}

fn display_precision(flag: Option<u32>) -> u32 {
    std::env::var("THICKFOURIER_PRECISION")
        .ok()
        .and_then(|v| v.parse().ok())
        .or(flag)
        .unwrap_or(12)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::KappaTable(args) => kappa_table(args),
        Command::LambdaTable(args) => lambda_table(args),
        Command::Ft(args) => ft(args),
        Command::JetFt(args) => jet_ft(args),
        Command::PoleTable(args) => pole_table(args),
        Command::Generator(args) => generator(args),
        Command::Verify(args) => verify(args),
    }
}

fn parse_degree_range(spec: &str) -> Result<(u32, u32)> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo = lo.trim().parse().map_err(|_| Error::Parse { detail: "bad range".into() })?;
        let hi = hi.trim().parse().map_err(|_| Error::Parse { detail: "bad range".into() })?;
        if lo > hi {
            return Err(Error::Parse { detail: "empty degree range".into() });
        }
        Ok((lo, hi))
    } else {
        let m = spec.trim().parse().map_err(|_| Error::Parse { detail: "bad degree".into() })?;
        Ok((m, m))
    }
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Parse { detail: format!("cannot write {}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn float_digits(v: f64, digits: u32) -> String {
    format!("{:.*}", digits as usize, v)
}

fn kappa_table(args: KappaTableArgs) -> Result<i32> {
    let beta = js::rat_from_string(&args.beta)?;
    let (m_lo, m_hi) = parse_degree_range(&args.m)?;
    let digits = display_precision(args.precision);
    let mut rows = Vec::new();
    for m in m_lo..=m_hi {
        let coeff = kappa_coeff(&beta, m, args.n)?;
        let f = coeff.to_float();
        rows.push((m, coeff.is_exact(), coeff.value.clone(), f.re, f.im));
    }
    match args.format {
        Format::Csv => {
            println!("n,beta,m,exact,value,float");
            for (m, exact, value, re, im) in rows {
                let float = if im.abs() > 1e-300 {
                    format!("{}+{}i", float_digits(re, digits), float_digits(im, digits))
                } else {
                    float_digits(re, digits)
                };
                println!("{},{},{m},{exact},{value},{float}", args.n, args.beta);
            }
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .into_iter()
                .map(|(m, exact, value, re, im)| {
                    json!({
                        "n": args.n,
                        "beta": args.beta,
                        "m": m,
                        "exact": exact,
                        "value": js::weight_to_value(&value),
                        "float_re": re,
                        "float_im": im,
                    })
                })
                .collect();
            println!("{}", js::to_canonical_string(&Value::Array(items)).trim_end());
        }
    }
    Ok(0)
}

fn lambda_table(args: LambdaTableArgs) -> Result<i32> {
    let digits = display_precision(args.precision);
    let mut rows = Vec::new();
    for m in 0..=(args.q / 2) {
        let coeff = lambda_coeff(args.q, m, args.n)?;
        let f = coeff.to_float();
        rows.push((m, coeff.value.clone(), f.re, f.im));
    }
    match args.format {
        Format::Csv => {
            println!("n,q,m,degree,value,float");
            for (m, value, re, im) in rows {
                let float = if im.abs() > 1e-300 {
                    format!("{}+{}i", float_digits(re, digits), float_digits(im, digits))
                } else {
                    float_digits(re, digits)
                };
                println!("{},{},{m},{},{value},{float}", args.n, args.q, args.q - 2 * m);
            }
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .into_iter()
                .map(|(m, value, re, im)| {
                    json!({
                        "n": args.n,
                        "q": args.q,
                        "m": m,
                        "degree": args.q - 2 * m,
                        "value": js::weight_to_value(&value),
                        "float_re": re,
                        "float_im": im,
                    })
                })
                .collect();
            println!("{}", js::to_canonical_string(&Value::Array(items)).trim_end());
        }
    }
    Ok(0)
}

fn ft(args: FtArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Error::Parse { detail: format!("cannot read input: {e}") })?;
    let value = js::parse(&text)?;
    let parsed = js::distribution_from_value(&value)?;
    let out_value = match (args.dir, parsed) {
        (Direction::Star, js::AnyDistribution::Thick(d)) => {
            let t = ft_star(&d)?;
            let rules: Vec<String> = t.provenance.iter().map(|p| p.rule.clone()).collect();
            // provenance entries track rewrites, not output atoms; attach
            // them per atom only when the counts line up
            let rules =
                if rules.len() == t.output.atoms().len() { Some(rules) } else { None };
            js::sl_to_value(&t.output, rules.as_deref())
        }
        (Direction::Upper, js::AnyDistribution::Sl(d)) => {
            let t = ft_upper_star(&d)?;
            let rules: Vec<String> = t.provenance.iter().map(|p| p.rule.clone()).collect();
            let rules =
                if rules.len() == t.output.atoms().len() { Some(rules) } else { None };
            js::thick_to_value(&t.output, rules.as_deref())
        }
        (Direction::Star, js::AnyDistribution::Sl(_)) => {
            return Err(Error::Parse {
                detail: "star direction expects a thick atom file".into(),
            })
        }
        (Direction::Upper, js::AnyDistribution::Thick(_)) => {
            return Err(Error::Parse {
                detail: "upper direction expects an sl-thick atom file".into(),
            })
        }
    };
    write_or_print(&args.output, &js::to_canonical_string(&out_value))?;
    Ok(0)
}

fn jet_ft(args: JetFtArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Error::Parse { detail: format!("cannot read input: {e}") })?;
    let value = js::parse(&text)?;
    let out_value = match js::jet_from_value(&value)? {
        js::AnyJet::Thick(jet) => {
            let mut out = ft_jet(&jet);
            if args.project {
                out = out.project_polynomial_free();
            }
            let _ = args.truncation;
            js::w_jet_to_value(&out)
        }
        js::AnyJet::W(jet) => {
            let out = ift_jet(&jet);
            js::thick_jet_to_value(&out)
        }
    };
    write_or_print(&args.output, &js::to_canonical_string(&out_value))?;
    Ok(0)
}

/// Serializes the principal part of a power family over an integer range.
pub fn pole_table_value(family: Family, n: u32, lo: i64, hi: i64) -> Result<Value> {
    let mut poles = Vec::new();
    for l in lo..=hi {
        let at = crate::rat_int(l);
        let entry = match family {
            Family::Pfw => {
                let fam = pf_power_family_at_infinity(n);
                match fp_query(&fam, &at, FpKind::PrincipalPart)? {
                    FpResult::PrincipalPart(parts) if !parts.is_empty() => Some(
                        parts.iter().map(|d| js::sl_to_value(d, None)).collect::<Vec<_>>(),
                    ),
                    _ => None,
                }
            }
            Family::Pf => {
                let fam = pf_power_family_at_zero(n);
                match fp_query(&fam, &at, FpKind::PrincipalPart)? {
                    FpResult::PrincipalPart(parts) if !parts.is_empty() => Some(
                        parts.iter().map(|d| js::thick_to_value(d, None)).collect::<Vec<_>>(),
                    ),
                    _ => None,
                }
            }
        };
        if let Some(coeffs) = entry {
            poles.push(json!({
                "lambda": l.to_string(),
                "order": coeffs.len(),
                "coeffs": coeffs,
            }));
        }
    }
    Ok(json!({
        "family": match family { Family::Pfw => "PfW", Family::Pf => "Pf" },
        "n": n,
        "poles": poles,
    }))
}

fn pole_table(args: PoleTableArgs) -> Result<i32> {
    if args.lo > args.hi {
        return Err(Error::Parse { detail: "empty parameter range".into() });
    }
    let v = pole_table_value(args.family, args.n, args.lo, args.hi)?;
    print!("{}", js::to_canonical_string(&v));
    Ok(0)
}

fn generator(args: GeneratorArgs) -> Result<i32> {
    let lambda = js::rat_from_string(&args.lambda)?;
    let g = radial_homogeneous_generator(&lambda, args.n);
    let (_, atom) = &g.atoms()[0];
    let v = match atom {
        SlAtom::PfW { lambda, .. } => {
            json!({ "atom": "PfW", "lambda": js::rat_to_param_string(lambda) })
        }
        SlAtom::DeltaInf { order, .. } => json!({ "atom": "DeltaInf", "q": order }),
        SlAtom::DeltaLnInf { order, .. } => json!({ "atom": "DeltaLnInf", "q": order }),
        SlAtom::DerivDeltaOrigin { .. } => unreachable!("generator atoms"),
    };
    println!("{}", js::to_canonical_string(&v).trim_end());
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let reports = crate::oracle::run_suite(&args.suite, args.tol)?;
    let any_failed = reports.iter().any(|r| !r.passed);
    match args.format {
        Format::Json => {
            let items: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "case": r.case_id,
                        "lhs": r.lhs,
                        "rhs": r.rhs,
                        "rel_error": r.rel_error,
                        "tol": r.tol,
                        "passed": r.passed,
                        "runtime_ms": r.runtime_ms,
                    })
                })
                .collect();
            println!("{}", js::to_canonical_string(&Value::Array(items)).trim_end());
        }
        Format::Csv => {
            println!("case,lhs,rhs,rel_error,tol,passed,runtime_ms");
            for r in &reports {
                println!(
                    "{},{:e},{:e},{:e},{:e},{},{:.3}",
                    r.case_id, r.lhs, r.rhs, r.rel_error, r.tol, r.passed, r.runtime_ms
                );
            }
        }
    }
    Ok(if any_failed { 3 } else { 0 })
}

// keep ToPrimitive linked in for rational parameter parsing helpers
#[allow(dead_code)]
fn _unused(r: &crate::Rat) -> Option<i64> {
    r.numer().to_i64()
}
