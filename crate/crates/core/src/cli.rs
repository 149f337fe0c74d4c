//! The `odlin` command line. Every command prints one JSON document on
//! standard output; the exit code carries the decision.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format;
use crate::histogram::{check_histogram, decompose, profile, smear, Mode};
use crate::reductions::{column_alphabet, instance_to_vas, normalize_final, vas_to_instance, DEFAULT_REALIZATION_CAP};
use crate::solvers::{
    check_witness, oracle_pproduct, solve_n_bounded, solve_q, solve_qplus, solve_z, Domain, NSearchOptions,
    OracleOptions, Status,
};
use crate::Rat;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "odlin", version, about = "Exact solvers for sums of shifted data vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the target is a combination of shifted generators.
    Solve {
        #[arg(long, value_parser = parse_domain)]
        domain: Domain,
        #[arg(long)]
        input: PathBuf,
        /// Most columns of a multihistogram (domain N).
        #[arg(long, default_value_t = 8)]
        col_bound: usize,
        /// Largest multihistogram entry (domain N).
        #[arg(long, default_value_t = 8)]
        entry_bound: u64,
    },
    /// Translate between VAS reachability and instances.
    Reduce {
        #[command(subcommand)]
        direction: Reduce,
    },
    /// Histogram tools.
    Hist {
        #[command(subcommand)]
        action: Hist,
    },
    /// Brute-force search over bounded placements.
    Oracle {
        #[arg(long, value_parser = parse_domain)]
        domain: Domain,
        #[arg(long, default_value_t = 4)]
        m_bound: u64,
        #[arg(long, default_value_t = 6)]
        slot_bound: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Check a witness (a verdict document) against an instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        /// Domain the coefficients must lie in.
        #[arg(long, value_parser = parse_domain, default_value = "Q")]
        domain: Domain,
    },
}

#[derive(Subcommand, Debug)]
enum Reduce {
    /// VAS file to instance file; a nonzero final configuration is
    /// normalized first.
    FromVas {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_REALIZATION_CAP)]
        cap: usize,
    },
    /// Instance file to VAS file over the columns with entries at most
    /// the alphabet bound.
    ToVas {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        alphabet_bound: u64,
    },
}

#[derive(Args, Debug)]
struct HistInput {
    #[arg(long)]
    input: PathBuf,
    /// Allow rational entries.
    #[arg(long, value_enum, default_value_t = ModeArg::Integer)]
    mode: ModeArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Integer,
    Rational,
}

#[derive(Subcommand, Debug)]
enum Hist {
    Validate(HistInput),
    Decompose(HistInput),
    Profile(HistInput),
    /// Insert two columns around column `col` (0-based).
    Smear {
        #[command(flatten)]
        input: HistInput,
        #[arg(long)]
        col: usize,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

fn parse_domain(s: &str) -> std::result::Result<Domain, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_csv(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(|x| format::rat_from_value(&Value::String(x.trim().to_string()))).collect()
}

fn read(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Writes `doc` to `output`, or returns it for standard output.
fn emit(doc: Value, output: Option<&Path>) -> Result<String> {
    let text = format::render(doc);
    match output {
        Some(p) => {
            std::fs::write(p, &text)?;
            Ok(format::render(json!({ "output": p.display().to_string() })))
        }
        None => Ok(text),
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Solvable => EXIT_OK,
        Status::Unsolvable => EXIT_NO,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Integer => Mode::Integer,
        ModeArg::Rational => Mode::Rational,
    }
}

fn execute(cmd: Command) -> Result<(String, i32)> {
    match cmd {
        Command::Solve { domain, input, col_bound, entry_bound } => {
            let inst = format::instance_from_value(&read(&input)?)?.to_matrix_problem();
            let verdict = match domain {
                Domain::N => {
                    solve_n_bounded(&inst, &NSearchOptions { col_bound, entry_bound, ..NSearchOptions::default() })
                }
                Domain::Z => solve_z(&inst),
                Domain::Q => solve_q(&inst),
                Domain::QPlus => solve_qplus(&inst),
            };
            Ok((format::render(format::verdict_to_value(&verdict)), status_code(verdict.status)))
        }
        Command::Oracle { domain, m_bound, slot_bound, input } => {
            let inst = format::instance_from_value(&read(&input)?)?.to_matrix_problem();
            let opts = OracleOptions { m_bound, slot_bound, ..OracleOptions::default() };
            let verdict = oracle_pproduct(&inst, domain, &opts);
            Ok((format::render(format::verdict_to_value(&verdict)), status_code(verdict.status)))
        }
        Command::Verify { input, witness, domain } => {
            let inst = format::instance_from_value(&read(&input)?)?.to_matrix_problem();
            let w = format::witness_from_value(&read(&witness)?)?;
            Ok(match check_witness(&inst, &w, domain) {
                Ok(()) => (format::render(json!({"valid": true})), EXIT_OK),
                Err(reason) => (format::render(json!({"valid": false, "reason": reason})), EXIT_NO),
            })
        }
        Command::Reduce { direction: Reduce::FromVas { input, output, cap } } => {
            let vas = normalize_final(&format::vas_from_value(&read(&input)?)?);
            let vi = vas_to_instance(&vas, cap)?;
            let doc = format::instance_to_value(&vi.instance.to_instance());
            Ok((emit(doc, output.as_deref())?, EXIT_OK))
        }
        Command::Reduce { direction: Reduce::ToVas { input, output, alphabet_bound } } => {
            let inst = format::instance_from_value(&read(&input)?)?.to_matrix_problem();
            let alphabet = column_alphabet(&inst, alphabet_bound)?;
            let gadget = instance_to_vas(&inst, &alphabet)?;
            Ok((emit(format::vas_to_value(&gadget.vas), output.as_deref())?, EXIT_OK))
        }
        Command::Hist { action } => hist(action),
    }
}

fn hist(action: Hist) -> Result<(String, i32)> {
    let (input, m) = match &action {
        Hist::Validate(h) | Hist::Decompose(h) | Hist::Profile(h) => (h, mode(h.mode)),
        Hist::Smear { input, .. } => (input, mode(input.mode)),
    };
    let h = format::histogram_from_value(&read(&input.input)?)?;
    let checked = check_histogram(&h, m);
    let invalid = |e: &dyn std::fmt::Display| (format::render(json!({"valid": false, "reason": e.to_string()})), EXIT_NO);
    Ok(match action {
        Hist::Validate(_) => match checked {
            Ok(degree) => (format::render(json!({"valid": true, "degree": format::rat_to_value(&degree)})), EXIT_OK),
            Err(v) => invalid(&v),
        },
        Hist::Decompose(_) => match checked {
            Err(v) => invalid(&v),
            Ok(_) if m == Mode::Rational && !h.is_integral() => {
                invalid(&"only integral histograms decompose into simple histograms")
            }
            Ok(_) => {
                let parts: Vec<Value> =
                    decompose(&h)?.iter().map(|s| format::matrix_to_value(&s.to_matrix::<Rat>())).collect();
                (format::render(json!({ "simple": parts })), EXIT_OK)
            }
        },
        Hist::Profile(_) => (format::render(json!({ "profile": format::matrix_to_value(&profile(&h)) })), EXIT_OK),
        Hist::Smear { col, left, right, .. } => {
            let out = smear(&h, col, &parse_csv(&left)?, &parse_csv(&right)?)?;
            (format::render(json!({ "matrix": format::matrix_to_value(&out) })), EXIT_OK)
        }
    })
}

/// Runs the command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli.command) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Error::Budget(msg)) => {
            let _ = writeln!(err, "odlin: budget exhausted: {msg}");
            EXIT_UNKNOWN
        }
        Err(e) => {
            let _ = writeln!(err, "odlin: {e}");
            EXIT_INPUT
        }
    }
}
