//! Command-line front end: `sqrt`, `cbrt` and `verify`.
//!
//! Exit codes: 0 success, 1 usage error, 2 malformed number, 3 verification
//! mismatch.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use digit_roots::complexity::{compare, ComplexityReport};
use digit_roots::oracle::{verify_random, verify_range, VerifyReport};
use digit_roots::tableau::{render_with, MarkerStyle};
use digit_roots::{extract_root, DecimalNatural, OpCounters, RootKind, RootResult, TraceEvent};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_MALFORMED: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

/// Seed for `verify --random` when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "digit-roots", version, about = "Digit-by-digit square and cube roots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Floor square root with remainder
    Sqrt(RootArgs),
    /// Floor cube root with remainder
    Cbrt(RootArgs),
    /// Differential check of the engine against a brute-force oracle
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct RootArgs {
    /// Non-negative decimal integer, digits only
    #[arg(allow_hyphen_values = true)]
    number: String,
    /// Print the long-form tableau
    #[arg(long)]
    tableau: bool,
    /// Use combining diacritics instead of a marker line in the tableau
    #[arg(long, requires = "tableau")]
    combining: bool,
    /// Print every engine event
    #[arg(long)]
    trace: bool,
    /// Print measured and predicted operation counts
    #[arg(long)]
    count_ops: bool,
    /// Emit one JSON object instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Root exponent
    #[arg(long = "k", value_parser = clap::value_parser!(u32).range(2..=3))]
    k: u32,
    /// Check every input in [0, MAX]
    #[arg(long, conflicts_with_all = ["random", "digits"], required_unless_present = "random")]
    max: Option<String>,
    /// Check COUNT random inputs
    #[arg(long, value_name = "COUNT", requires = "digits")]
    random: Option<u64>,
    /// Maximum digit count of random inputs
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    digits: Option<u64>,
    /// RNG seed for random inputs
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Machine-readable result. Numbers are decimal strings; key order is fixed.
#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub input: String,
    pub k: u32,
    pub root: String,
    pub remainder: String,
    pub iterations: usize,
    pub adjustments: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<&'a [TraceEvent]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counters: Option<OpCounters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<OpCounters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tableau: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };

    let written = match cli.command {
        Command::Sqrt(a) => root_command(&a, RootKind::Square, out, err),
        Command::Cbrt(a) => root_command(&a, RootKind::Cube, out, err),
        Command::Verify(a) => verify_command(&a, out, err),
    };
    written.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_USAGE
    })
}

fn parse_number(text: &str, err: &mut impl Write) -> std::io::Result<Option<DecimalNatural>> {
    match DecimalNatural::from_decimal_string(text) {
        Ok(x) => Ok(Some(x)),
        Err(e) => {
            writeln!(err, "error: malformed number {text:?}: {e}")?;
            Ok(None)
        }
    }
}

/// `<root>` or `<root> r <remainder>`.
pub fn summary_line(result: &RootResult) -> String {
    if result.remainder.is_zero() {
        result.root.to_string()
    } else {
        format!("{} r {}", result.root, result.remainder)
    }
}

pub fn envelope<'a>(
    input: &DecimalNatural,
    result: &'a RootResult,
    with_trace: bool,
    with_counts: bool,
    tableau: Option<String>,
) -> Envelope<'a> {
    let report = with_counts.then(|| compare(result));
    Envelope {
        input: input.to_string(),
        k: result.kind.exponent(),
        root: result.root.to_string(),
        remainder: result.remainder.to_string(),
        iterations: result.iterations,
        adjustments: result.adjustments(),
        trace: with_trace.then_some(result.trace.as_slice()),
        counters: report.as_ref().map(|r| r.measured),
        predicted: report.as_ref().map(|r| r.predicted),
        tableau,
    }
}

fn write_trace(out: &mut impl Write, trace: &[TraceEvent]) -> std::io::Result<()> {
    for e in trace {
        let operands: Vec<String> = e.operands.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "{:<16} @{:<3} [{}] -> {}",
            e.kind.name(),
            e.position,
            operands.join(", "),
            e.result
        )?;
    }
    Ok(())
}

fn write_report(out: &mut impl Write, report: &ComplexityReport) -> std::io::Result<()> {
    let d = report.difference;
    writeln!(
        out,
        "digits: {}  iterations: {} (nominal {}/{} = {:.2})",
        report.digits,
        report.iterations,
        report.digits,
        report.kind.exponent(),
        report.nominal_iterations()
    )?;
    writeln!(out, "predicted:  {}", report.predicted)?;
    writeln!(out, "measured:   {}", report.measured)?;
    writeln!(
        out,
        "difference: M {:+}, A {:+}, D {:+}, S {:+}, lookups {:+}",
        d.multiplications, d.additions, d.divisions, d.subtractions, d.lookups
    )?;
    writeln!(out, "adjustments: {}", report.adjustments)
}

fn root_command(
    args: &RootArgs,
    kind: RootKind,
    out: &mut impl Write,
    err: &mut impl Write,
) -> std::io::Result<u8> {
    let Some(x) = parse_number(&args.number, err)? else {
        return Ok(EXIT_MALFORMED);
    };
    let result = extract_root(&x, kind);
    let style = if args.combining {
        MarkerStyle::Combining
    } else {
        MarkerStyle::Ascii
    };
    let tableau = args.tableau.then(|| render_with(&result, &x, style));

    if args.json {
        let env = envelope(&x, &result, args.trace, args.count_ops, tableau);
        let json = serde_json::to_string(&env).map_err(std::io::Error::other)?;
        writeln!(out, "{json}")?;
        return Ok(EXIT_OK);
    }

    writeln!(out, "{}", summary_line(&result))?;
    if let Some(t) = tableau {
        writeln!(out)?;
        write!(out, "{t}")?;
    }
    if args.trace {
        writeln!(out)?;
        write_trace(out, &result.trace)?;
    }
    if args.count_ops {
        writeln!(out)?;
        write_report(out, &compare(&result))?;
    }
    Ok(EXIT_OK)
}

fn verify_command(args: &VerifyArgs, out: &mut impl Write, err: &mut impl Write) -> std::io::Result<u8> {
    let kind = RootKind::from_exponent(args.k).expect("clap restricts k to 2..=3");
    let report = match (&args.max, args.random, args.digits) {
        (Some(max), _, _) => {
            let Some(max) = parse_number(max, err)? else {
                return Ok(EXIT_MALFORMED);
            };
            verify_range(&DecimalNatural::zero(), &max, kind)
        }
        (None, Some(count), Some(digits)) => verify_random(kind, count, digits as usize, args.seed),
        _ => {
            writeln!(err, "error: verify needs --max, or --random with --digits")?;
            return Ok(EXIT_USAGE);
        }
    };
    write_verify(&report, out, err)
}

/// Prints a verification outcome and returns its exit code.
pub fn write_verify(report: &VerifyReport, out: &mut impl Write, err: &mut impl Write) -> std::io::Result<u8> {
    match &report.mismatch {
        None => {
            writeln!(out, "ok: k={}, {} checked", report.kind.exponent(), report.checked)?;
            Ok(EXIT_OK)
        }
        Some(m) => {
            writeln!(
                err,
                "mismatch: k={} x={} engine {} r {} oracle {} r {}",
                report.kind.exponent(),
                m.input,
                m.engine_root,
                m.engine_remainder,
                m.oracle_root,
                m.oracle_remainder
            )?;
            Ok(EXIT_MISMATCH)
        }
    }
}
