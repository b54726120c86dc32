use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ellper::cm::hilbert::{HilbertTable, TABLE_ENV};
use ellper::cm::{check_certificate, prove_prime, Certificate, CriterionKind, ProveConfig};
use ellper::criteria::Verdict;
use ellper::demo::run_demo;
use ellper::lattice;
use ellper::selftest::{run_selftest, Status};
use num_bigint::BigUint;
use serde_json::json;

// println! panics when stdout is a closed pipe (`ellper ... | head`); stop quietly instead.
macro_rules! out {
    ($($t:tt)*) => {
        if writeln!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0)
        }
    };
}

const EXIT_PROOF: u8 = 0;
const EXIT_COMPOSITE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;

#[derive(Parser, Debug)]
#[command(name = "ellper", version, about = "Primality proofs with rings of elliptic periods")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Criterion {
    Basic,
    Strong,
}

#[derive(clap::Args, Debug)]
struct TableArg {
    /// Hilbert class polynomial table (default: $ELLPER_HILBERT_TABLE, then the built-in table)
    #[arg(long, value_name = "PATH")]
    hilbert_table: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Try to prove n prime and print a certificate.
    Prove {
        n: String,
        #[arg(long, value_enum, default_value = "basic")]
        criterion: Criterion,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest discriminant tried.
        #[arg(long, default_value_t = 10_000)]
        disc_cap: u64,
        /// d is searched in [dmin, dmax_mult * dmin].
        #[arg(long, default_value_t = 3)]
        dmax_mult: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        table: TableArg,
        /// Run the strong criterion below d = 2001 (mechanics only, never a proof).
        #[arg(long)]
        force_small_d: bool,
        /// Also write the certificate to this file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        table: TableArg,
    },
    /// Recompute one of the worked fixtures (f7, z101sq, n1009).
    Demo {
        name: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Count short sum-zero vectors in Z^d for odd d.
    CountSd {
        d: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the built-in acceptance checks.
    Selftest {
        /// Smaller batteries and no 30-bit strong proof.
        #[arg(long)]
        quick: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn load_table(arg: &TableArg) -> Result<Option<HilbertTable>, Failure> {
    let path = match (&arg.hilbert_table, std::env::var_os(TABLE_ENV)) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => PathBuf::from(p),
        (None, None) => return Ok(None),
    };
    if !path.is_file() {
        return Err(fail(EXIT_NO_INPUT, format!("{}: no such file", path.display())));
    }
    HilbertTable::load(&path).map(Some).map_err(|e| fail(EXIT_PARSE, e.to_string()))
}

fn parse_n(s: &str) -> Result<BigUint, Failure> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(fail(EXIT_USAGE, format!("n must be a decimal integer, got {s:?}")));
    }
    s.parse().map_err(|_| fail(EXIT_USAGE, format!("bad n {s:?}")))
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::ProvenPrime | Verdict::ProvenPrimePower { .. } => EXIT_PROOF,
        Verdict::CompositeWithFactor(_) => EXIT_COMPOSITE,
        Verdict::CongruenceFailed | Verdict::BoundNotMet | Verdict::Inconclusive(_) => EXIT_INCONCLUSIVE,
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_prove(
    n: &str,
    criterion: Criterion,
    seed: u64,
    disc_cap: u64,
    dmax_mult: u64,
    format: Format,
    table: &TableArg,
    force_small_d: bool,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let n = parse_n(n)?;
    if dmax_mult < 1 {
        return Err(fail(EXIT_USAGE, "--dmax-mult must be at least 1"));
    }
    let cfg = ProveConfig {
        criterion: match criterion {
            Criterion::Basic => CriterionKind::Basic,
            Criterion::Strong => CriterionKind::Strong,
        },
        seed,
        disc_cap,
        dmax_mult,
        force_small_d,
        table: load_table(table)?,
        ..ProveConfig::default()
    };
    let rep = prove_prime(&n, &cfg);
    if let (Some(path), Some(cert)) = (out, &rep.certificate) {
        std::fs::write(path, cert.to_json() + "\n").map_err(|e| fail(EXIT_INCONCLUSIVE, format!("{}: {e}", path.display())))?;
    }
    match format {
        Format::Text => {
            out!("n = {n}");
            out!("verdict: {}", rep.verdict);
            out!("decided at: {}", rep.stage);
            if force_small_d {
                out!("note: --force-small-d runs the strong criterion below d = 2001; such runs never prove anything");
            }
            for line in &rep.trail {
                out!("  {line}");
            }
            if let Some(cert) = &rep.certificate {
                out!("certificate:");
                out!("{}", cert.to_json());
            }
        }
        Format::Structured => {
            let factor = match &rep.verdict {
                Verdict::CompositeWithFactor(g) => Some(g.to_string()),
                _ => None,
            };
            let v = json!({
                "n": n.to_string(),
                "verdict": rep.verdict.to_string(),
                "stage": rep.stage,
                "factor": factor,
                "certificate": rep.certificate,
            });
            out!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
        }
    }
    Ok(verdict_code(&rep.verdict))
}

fn cmd_verify(path: &Path, format: Format, table: &TableArg) -> Result<u8, Failure> {
    if !path.is_file() {
        return Err(fail(EXIT_NO_INPUT, format!("{}: no such file", path.display())));
    }
    let text = std::fs::read_to_string(path).map_err(|e| fail(EXIT_NO_INPUT, format!("{}: {e}", path.display())))?;
    let cert = Certificate::from_json(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let table = load_table(table)?;
    let result = check_certificate(&cert, table.as_ref().unwrap_or_else(|| HilbertTable::embedded()));
    match format {
        Format::Text => match &result {
            Ok(()) => out!("valid: {} is prime", cert.n),
            Err(why) => out!("invalid: {why}"),
        },
        Format::Structured => {
            let v = json!({ "n": cert.n, "valid": result.is_ok(), "reason": result.as_ref().err() });
            out!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
        }
    }
    Ok(if result.is_ok() { 0 } else { 1 })
}

fn cmd_demo(name: &str, format: Format) -> Result<u8, Failure> {
    let rep = run_demo(name).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    match format {
        Format::Text => {
            out!("demo {name}");
            let width = rep.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &rep.rows {
                let mark = if r.ok() { "ok" } else { "MISMATCH" };
                out!("  {:<width$}  {mark:<8}  {}", r.name, r.got);
                if !r.ok() {
                    out!("  {:<width$}  {:<8}  expected {}", "", "", r.expected);
                }
            }
            for note in &rep.notes {
                out!("note: {note}");
            }
        }
        Format::Structured => {
            let rows: Vec<_> = rep.rows.iter().map(|r| json!({ "name": r.name, "expected": r.expected, "got": r.got, "ok": r.ok() })).collect();
            let v = json!({ "demo": name, "rows": rows, "notes": rep.notes, "passed": rep.passed() });
            out!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
        }
    }
    match rep.first_mismatch() {
        None => Ok(0),
        Some(r) => {
            eprintln!("first mismatch: {}", r.name);
            Ok(1)
        }
    }
}

fn cmd_count_sd(d: u64, format: Format) -> Result<u8, Failure> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(fail(EXIT_USAGE, format!("d must be odd and at least 3, got {d}")));
    }
    let sd = lattice::count_sd(d);
    let i = lattice::count_i(d);
    let j = lattice::count_j_exact(d).ok();
    let bound = lattice::log_at_least(&sd, "1.74498", d);
    match format {
        Format::Text => {
            out!("d = {d}");
            out!("#S_d = {sd}");
            out!("#I = {i}");
            match &j {
                Some(j) => out!("#J = {j}"),
                None => out!("#J: not computed (exact count needs d <= {})", lattice::COUNT_J_MAX_D),
            }
            let verdict = if bound { "holds" } else { "does not hold" };
            out!("ln #S_d >= 1.74498 d: {verdict}{}", if d < 2001 && !bound { " (only claimed for d >= 2001)" } else { "" });
        }
        Format::Structured => {
            let v = json!({
                "d": d,
                "count_sd": sd.to_string(),
                "count_i": i.to_string(),
                "count_j": j.map(|j| j.to_string()),
                "log_sd_at_least_1_74498_d": bound,
            });
            out!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
        }
    }
    Ok(0)
}

fn cmd_selftest(quick: bool) -> Result<u8, Failure> {
    let lines = run_selftest(quick);
    for l in &lines {
        out!("{l}");
    }
    Ok(if lines.iter().any(|l| l.status == Status::Fail) { 1 } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Prove { n, criterion, seed, disc_cap, dmax_mult, format, table, force_small_d, out } => {
            cmd_prove(n, *criterion, *seed, *disc_cap, *dmax_mult, *format, table, *force_small_d, out.as_deref())
        }
        Command::Verify { path, format, table } => cmd_verify(path, *format, table),
        Command::Demo { name, format } => cmd_demo(name, *format),
        Command::CountSd { d, format } => cmd_count_sd(*d, *format),
        Command::Selftest { quick } => cmd_selftest(*quick),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ellper: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
