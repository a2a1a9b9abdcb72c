//! Command-line front end. [`run`] parses argv and returns the exit code and
//! captured output so the binary stays a thin wrapper and tests can drive
//! every subcommand in-process.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::criterion::{find_witness, Mode};
use crate::error::Error;
use crate::fourier::spectral_s;
use crate::survey::{survey_range, write_csv, DenominatorFilter, SurveyOptions};
use crate::triangle::{require_hard_window, Eta};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        CommandOutcome {
            exit_code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(stderr: String) -> Self {
        CommandOutcome {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hardwindow",
    version,
    about = "Usable-unit obstruction for obtuse rational triangles"
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    TwoPq,
    TwoOfThree,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::TwoPq => Mode::TwoPq,
            ModeArg::TwoOfThree => Mode::TwoOfThree,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Primes,
    OmegaPlus,
}

impl From<FilterArg> for DenominatorFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::All => DenominatorFilter::All,
            FilterArg::Primes => DenominatorFilter::Primes,
            FilterArg::OmegaPlus => DenominatorFilter::OmegaPlus,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Ramanujan,
    FourierBounds,
    Spectral,
    ErrorBound,
    RegressionFamilies,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a usable witness unit for the triangle (P, Q, N-P-Q)/N.
    Check {
        p: u64,
        q: u64,
        n: u64,
        #[arg(long, value_enum, default_value = "two-pq")]
        mode: ModeArg,
    },
    /// Print S(P, Q) at denominator N.
    Count { p: u64, q: u64, n: u64 },
    /// Print S, main term, error term and reconstruction residual.
    Spectrum { p: u64, q: u64, n: u64 },
    /// Per-denominator survey as CSV.
    Survey {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value = "all")]
        filter: FilterArg,
        /// Truncation NUM/DEN: keep only min(p, q) > eta·n.
        #[arg(long, value_parser = parse_eta)]
        eta: Option<Eta>,
        /// Add the exceptional-region count (in_E column) for n <= 300.
        #[arg(long)]
        deep_audit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite; exits 2 on the first violation.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        max_n: Option<u64>,
        /// Denominator(s) for the spectral and error-bound suites.
        #[arg(long)]
        n: Vec<u64>,
        #[arg(long)]
        q: Option<u64>,
        /// R >= 2, or `log` for ⌈log n⌉.
        #[arg(long)]
        r: Option<String>,
        /// Evenly spaced pairs per denominator (spectral suite).
        #[arg(long)]
        sample: Option<usize>,
    },
}

fn parse_eta(s: &str) -> Result<Eta, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_r(s: Option<&str>, n: u64) -> Result<f64, Error> {
    match s {
        None => Ok(2.0),
        Some("log") => Ok((n as f64).ln().ceil()),
        Some(v) => v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("R must be a number or `log`, got {v:?}"))),
    }
}

fn error_outcome(e: Error) -> CommandOutcome {
    CommandOutcome::usage(format!("error: {e}\n"))
}

/// Parse `argv` (including the program name) and execute.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandOutcome::ok(text)
                }
                _ => CommandOutcome::usage(text),
            };
        }
    };
    match cli.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => CommandOutcome::usage(format!("error: thread pool: {e}\n")),
        },
        None => dispatch(cli.command),
    }
}

fn dispatch(command: Command) -> CommandOutcome {
    let result = match command {
        Command::Check { p, q, n, mode } => check(p, q, n, mode.into()),
        Command::Count { p, q, n } => count(p, q, n),
        Command::Spectrum { p, q, n } => spectrum(p, q, n),
        Command::Survey {
            min,
            max,
            filter,
            eta,
            deep_audit,
            out,
        } => survey(
            min,
            max,
            filter.into(),
            eta.unwrap_or_default(),
            deep_audit,
            out,
        ),
        Command::Verify {
            suite,
            max_n,
            n,
            q,
            r,
            sample,
        } => verify_cmd(suite, max_n, &n, q, r.as_deref(), sample),
    };
    result.unwrap_or_else(error_outcome)
}

fn check(p: u64, q: u64, n: u64, mode: Mode) -> Result<CommandOutcome, Error> {
    let rep = find_witness(p, q, n, mode)?;
    let line = match rep.witness {
        Some(a) => format!(
            "RULED OUT  witness={a}  ineqs={}  S={}\n",
            rep.inequalities_held, rep.s_count
        ),
        None => format!("NOT RULED OUT  S={}\n", rep.s_count),
    };
    Ok(CommandOutcome::ok(line))
}

fn count(p: u64, q: u64, n: u64) -> Result<CommandOutcome, Error> {
    require_hard_window(p, q, n)?;
    Ok(CommandOutcome::ok(format!(
        "S={}\n",
        crate::criterion::count_s(p, q, n)?
    )))
}

fn spectrum(p: u64, q: u64, n: u64) -> Result<CommandOutcome, Error> {
    let d = spectral_s(p, q, n)?;
    Ok(CommandOutcome::ok(format!(
        "S={}  M={:.6}  E={:.6}  residual={:.3e}\n",
        d.s_direct, d.main_term, d.error_term, d.residual
    )))
}

fn survey(
    min: u64,
    max: u64,
    filter: DenominatorFilter,
    eta: Eta,
    deep_audit: bool,
    out: Option<PathBuf>,
) -> Result<CommandOutcome, Error> {
    let opts = SurveyOptions { eta, deep_audit };
    let records = survey_range(min, max, filter, &opts)?;
    let io_err = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    match out {
        Some(path) => {
            let file = File::create(&path).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            write_csv(&records, deep_audit, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
            Ok(CommandOutcome::ok(format!(
                "wrote {} records to {}\n",
                records.len(),
                path.display()
            )))
        }
        None => {
            let mut buf = Vec::new();
            write_csv(&records, deep_audit, &mut buf).map_err(io_err)?;
            Ok(CommandOutcome::ok(
                String::from_utf8(buf).expect("CSV is ASCII"),
            ))
        }
    }
}

/// Denominators exercised by the spectral suite when none are given.
pub const SPECTRAL_FULL: [u64; 6] = [5, 7, 12, 23, 36, 60];
pub const SPECTRAL_SAMPLED: [u64; 2] = [101, 202];
pub const SPECTRAL_SAMPLE_SIZE: usize = 50;

fn verify_cmd(
    suite: Suite,
    max_n: Option<u64>,
    ns: &[u64],
    q: Option<u64>,
    r: Option<&str>,
    sample: Option<usize>,
) -> Result<CommandOutcome, Error> {
    let outcome = match suite {
        Suite::Ramanujan => verify::ramanujan_suite(max_n.unwrap_or(200))?,
        Suite::FourierBounds => verify::fourier_bounds_suite(max_n.unwrap_or(500))?,
        Suite::Spectral => {
            if ns.is_empty() {
                let full = verify::spectral_suite(&SPECTRAL_FULL, None)?;
                let sampled =
                    verify::spectral_suite(&SPECTRAL_SAMPLED, Some(SPECTRAL_SAMPLE_SIZE))?;
                if full.passed() {
                    verify::SuiteOutcome {
                        checks: full.checks + sampled.checks,
                        summary: format!("full: {}; sampled: {}", full.summary, sampled.summary),
                        ..sampled
                    }
                } else {
                    full
                }
            } else {
                verify::spectral_suite(ns, sample)?
            }
        }
        Suite::ErrorBound => {
            let n = match ns {
                [n] => *n,
                _ => {
                    return Err(Error::InvalidArgument(
                        "error-bound needs exactly one --n".into(),
                    ))
                }
            };
            let q = q.ok_or_else(|| Error::InvalidArgument("error-bound needs --q".into()))?;
            verify::error_bound_suite(n, q, parse_r(r, n)?)?
        }
        Suite::RegressionFamilies => verify::regression_families_suite(max_n.unwrap_or(60))?,
    };
    let exit_code = if outcome.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    };
    Ok(CommandOutcome {
        exit_code,
        stdout: format!("{outcome}\n"),
        stderr: String::new(),
    })
}
