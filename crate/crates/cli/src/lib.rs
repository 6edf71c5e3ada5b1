//! Command implementations for the `eqchow` binary.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use eqchow_core::format::{document_from_quotient, to_toml};
use eqchow_core::{
    build_yc, enumerate_rvt, generator_report, parse_document, parse_k_range, s_check, Caps, Convention,
    CountProfile, Error, FVector, Input, Mode, Quotient, ResultTable, Table, ValidationReport,
};

pub mod selfcheck;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "eqchow", version, about = "Marked fansy divisors, downgrades and equivariant Chow generator counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a document: slice completeness, marked cones, properness, profile closed forms.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Build the quotient Y_C of X × E_T^N.
    Downgrade {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "N")]
        n: Option<usize>,
        /// Defaults to geometric when Nd ≤ 4 and counting otherwise.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Tabulate |r_k|, |v_k|, |t_k| with the sum identity.
    Count {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "N")]
        n: Option<usize>,
        /// A level such as `2` or a range such as `1..2`.
        #[arg(long)]
        k: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long, value_enum, default_value_t = ConventionArg::Rotated)]
        convention: ConventionArg,
    },
    /// Run the built-in invariant suite.
    Selfcheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Geometric,
    Counting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Rotated,
    Geometric,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Rotated => Convention::Rotated,
            ConventionArg::Geometric => Convention::Geometric,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::ResourceCap { .. } => EXIT_CAP,
        _ => EXIT_VALIDATION,
    }
}

fn usage(message: impl Into<String>) -> Error {
    Error::Parse { line: 0, column: 0, message: message.into() }
}

pub fn read_input(path: &PathBuf) -> Result<Input, Error> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text)
}

/// Runs a command, writing results to `out` and diagnostics to `err`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let caps = Caps::from_env();
    let result = match &cli.command {
        Command::Validate { input, format } => cmd_validate(input, *format, out),
        Command::Downgrade { input, n, mode, format } => cmd_downgrade(input, *n, *mode, *format, &caps, out, err),
        Command::Count { input, n, k, format, convention } => {
            cmd_count(input, *n, k.as_deref(), *format, (*convention).into(), &caps, out, err)
        }
        Command::Selfcheck => Ok(selfcheck::run(out)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ResourceCap { what: "geometric ambient rank", .. } => {
                    let _ = writeln!(err, "hint: geometric mode is limited to small ranks; rerun with --mode counting");
                }
                Error::ResourceCap { .. } => {
                    let _ = writeln!(err, "hint: raise the limit with EQCHOW_MAX_N or EQCHOW_MAX_GEOMETRIC_RANK");
                }
                _ => {}
            }
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Construction(format!("write failed: {e}"))
}

fn emit_report(report: &ValidationReport, format: OutputFormat, out: &mut dyn Write) -> Result<(), Error> {
    match format {
        OutputFormat::Text => {
            write!(out, "{report}").map_err(io)?;
            let failed = report.failures().count();
            writeln!(
                out,
                "result: {} checks={} failed={} warnings={}",
                if report.ok() { "ok" } else { "fail" },
                report.checks.len(),
                failed,
                report.warnings.len()
            )
            .map_err(io)
        }
        OutputFormat::Csv => {
            let mut t = Table::new(&["check", "status", "detail"]);
            for c in &report.checks {
                t.push(vec![c.name.clone(), if c.passed { "pass" } else { "fail" }.into(), c.detail.clone()]);
            }
            for w in &report.warnings {
                t.push(vec!["warning".into(), "warn".into(), w.clone()]);
            }
            out.write_all(t.to_csv()?.as_bytes()).map_err(io)
        }
    }
}

pub fn validate_input(input: &Input) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Some(x) = &input.fansy {
        report.extend(x.validate());
    }
    if let Some(p) = &input.profile {
        let fvector = reference_fvector(input);
        if let Some(f) = fvector {
            for i in 0..=p.d {
                report.push(format!("profile S_{i} closed form"), s_check(p, &f, i), "");
            }
        } else {
            report.warn("no reference face numbers; profile closed forms not checked");
        }
        report.push("profile has at least two special points", p.num_special_points >= 2, "");
    }
    report
}

fn cmd_validate(path: &PathBuf, format: OutputFormat, out: &mut dyn Write) -> Result<i32, Error> {
    let input = match read_input(path) {
        Ok(i) => i,
        Err(e @ Error::Parse { .. }) => return Err(e),
        Err(e) => {
            let mut r = ValidationReport::default();
            r.push("document describes a valid marked fansy divisor", false, e.to_string());
            emit_report(&r, format, out)?;
            return Ok(EXIT_VALIDATION);
        }
    };
    let report = validate_input(&input);
    emit_report(&report, format, out)?;
    Ok(if report.ok() { EXIT_OK } else { EXIT_VALIDATION })
}

fn reference_fvector(input: &Input) -> Option<FVector> {
    input
        .reference_fvector
        .clone()
        .or_else(|| input.fansy.as_ref().map(|x| x.tail_fan().f_vector()))
}

fn require_n(flag: Option<usize>, input: &Input) -> Result<usize, Error> {
    let n = flag.or(input.n).ok_or_else(|| usage("N is required: pass --N or set parameters.N"))?;
    if n == 0 {
        return Err(usage("N must be positive"));
    }
    Ok(n)
}

#[allow(clippy::too_many_arguments)]
fn cmd_downgrade(
    path: &PathBuf,
    n: Option<usize>,
    mode: Option<ModeArg>,
    format: OutputFormat,
    caps: &Caps,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let input = read_input(path)?;
    let n = require_n(n, &input)?;
    let x = input.fansy.as_ref().ok_or_else(|| usage("downgrade needs geometry (a tail fan or a bundle)"))?;
    let d = x.rank();
    let mode = match mode {
        Some(ModeArg::Geometric) => Mode::Geometric,
        Some(ModeArg::Counting) => Mode::Counting,
        None if n * d <= 4 => Mode::Geometric,
        None => Mode::Counting,
    };
    match build_yc(x, n, mode, caps)? {
        Quotient::Geometric(q) => {
            write!(err, "{}", q.report).map_err(io)?;
            let doc = document_from_quotient(&format!("{} downgraded, N={n}", input.label), &q)?;
            out.write_all(to_toml(&doc)?.as_bytes()).map_err(io)?;
            Ok(if q.report.ok() { EXIT_OK } else { EXIT_VALIDATION })
        }
        Quotient::Counting(c) => {
            let mut header = vec!["item".to_string()];
            header.extend((0..=c.rank).map(|k| format!("dim_{k}")));
            let mut t = Table { header, rows: vec![] };
            let row = |name: String, v: &[BigUint]| std::iter::once(name).chain(v.iter().map(BigUint::to_string)).collect();
            for (p, counts) in &c.slices {
                t.push(row(format!("slice {p}"), counts));
            }
            t.push(row("tail fan".into(), &c.tail_fan));
            t.push(row("marked".into(), &c.marked));
            write_table(&t, format, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn write_table(t: &Table, format: OutputFormat, out: &mut dyn Write) -> Result<(), Error> {
    let text = match format {
        OutputFormat::Csv => t.to_csv()?,
        OutputFormat::Text => t.to_text(),
    };
    out.write_all(text.as_bytes()).map_err(io)
}

/// The profile used for counting: enumerated from geometry when present, else taken from the document.
pub fn profile_of(input: &Input, convention: Convention, err: &mut dyn Write) -> Result<CountProfile, Error> {
    match (&input.fansy, &input.profile) {
        (Some(x), given) => {
            let p = enumerate_rvt(x, convention);
            if let Some(g) = given {
                let same = (0..p.r.len().max(g.r.len())).all(|k| {
                    p.r_at(k) == g.r_at(k) && p.v_at(k) == g.v_at(k) && p.t_at(k) == g.t_at(k)
                });
                if !same {
                    writeln!(err, "warning: the supplied profile differs from the enumerated one; using the enumeration")
                        .map_err(io)?;
                }
            }
            Ok(p)
        }
        (None, Some(g)) => Ok(g.clone()),
        (None, None) => Err(usage("document has neither geometry nor a profile")),
    }
}

/// Builds the result table for one document.
pub fn count_table(
    input: &Input,
    n: usize,
    ks: RangeInclusive<usize>,
    convention: Convention,
    err: &mut dyn Write,
) -> Result<(ResultTable, CountProfile), Error> {
    let p = profile_of(input, convention, err)?;
    let f = reference_fvector(input).ok_or_else(|| usage("no reference face numbers for the closed forms"))?;
    let mut t = ResultTable::default();
    t.add_variety(&input.label, &p, &f, n, ks);
    Ok((t, p))
}

#[allow(clippy::too_many_arguments)]
fn cmd_count(
    path: &PathBuf,
    n: Option<usize>,
    k: Option<&str>,
    format: OutputFormat,
    convention: Convention,
    caps: &Caps,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let input = read_input(path)?;
    let n = require_n(n, &input)?;
    caps.check_counting(n)?;
    let d = input.fansy.as_ref().map_or_else(|| input.profile.as_ref().map_or(1, |p| p.d), |x| x.rank());
    let ks = match k {
        Some(k) => parse_k_range(k)?,
        None => input.k.clone().unwrap_or(0..=d),
    };
    for k in ks.clone() {
        if k > n * d {
            writeln!(err, "warning: k = {k} exceeds Nd = {}; the approximation does not reach this level", n * d)
                .map_err(io)?;
        }
    }
    if n * d < 2 * d + 1 {
        writeln!(err, "warning: Nd - d = {} is below d + 1 = {}", n * d - d, d + 1).map_err(io)?;
    }
    let (table, profile) = count_table(&input, n, ks.clone(), convention, err)?;
    write_table(&table.table(), format, out)?;
    if format == OutputFormat::Text {
        writeln!(out).map_err(io)?;
        let mut notes = Vec::new();
        for k in ks.rev() {
            let g = generator_report(&profile, k);
            writeln!(out, "k={k}: generators V={} R={} T={} (total {})", g.v, g.r, g.t, g.total()).map_err(io)?;
            notes = g.notes;
        }
        for note in notes {
            writeln!(out, "note: {note}").map_err(io)?;
        }
    }
    Ok(if table.all_pass() { EXIT_OK } else { EXIT_VALIDATION })
}
