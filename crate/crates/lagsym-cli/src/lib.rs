//! Verification campaigns and simulations behind the `lagsym` binary.

mod campaign;
pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lagsym::corpus::{CaseId, TableId};
pub use report::{Entry, Report, Status};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "LAGSYM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "lagsym", version, about = "Symmetries, conservation laws and simulations of plane 1D MHD in mass Lagrangian coordinates")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads (default: $LAGSYM_THREADS, else all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Include per-target wall-clock timing (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symbolic verification campaigns.
    #[command(subcommand)]
    Verify(Verify),
    /// Conservation laws from the variational symmetries of a potential case.
    Noether(NoetherArgs),
    /// Run a simulation from a JSON configuration.
    Simulate {
        #[arg(long)]
        config: std::path::PathBuf,
    },
    /// Enumerate cases, tables, laws, generators and monitors.
    List,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Published generators of a case as point symmetries.
    Symmetries(CaseArgs),
    /// Published conservation laws of a case.
    Claws {
        #[command(flatten)]
        case: CaseArgs,
        /// Restrict to one law (short id such as `energy`).
        #[arg(long)]
        law: Option<String>,
    },
    /// Rows of classification tables (all when omitted).
    Tables {
        #[arg(long = "table")]
        tables: Vec<String>,
    },
    /// Commutator table, subalgebras and adjoint maps of the extended algebra.
    Algebra,
    /// Equivalence generators of a case on the extended space.
    Equivalence {
        #[arg(long)]
        case: String,
    },
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    #[arg(long)]
    pub case: String,
    /// Fix the conductivity, e.g. `2*rho`.
    #[arg(long)]
    pub sigma: Option<String>,
}

#[derive(Debug, Args)]
pub struct NoetherArgs {
    #[arg(long)]
    pub case: String,
    /// Fix the entropy profile `S(s)`.
    #[arg(long)]
    pub entropy: Option<String>,
}

/// Usage or configuration problem; exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

pub(crate) fn parse_case(text: &str) -> Result<CaseId, UsageError> {
    text.parse().map_err(|_| {
        let known: Vec<&str> = CaseId::ALL.iter().map(|c| c.id()).collect();
        UsageError(format!("unknown case `{text}` (known: {})", known.join(", ")))
    })
}

pub(crate) fn parse_table(text: &str) -> Result<TableId, UsageError> {
    text.parse().map_err(|_| UsageError(format!("unknown table `{text}` (known: T1..T8)")))
}

/// Output and exit code of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, UsageError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| UsageError(format!("{THREADS_ENV} must be a positive integer")))?),
            Err(_) => None,
        },
    };
    if n == Some(0) {
        return Err(UsageError("thread count must be positive".into()));
    }
    Ok(n)
}

/// Parse `args` (including the program name) and execute.
pub fn run_cli<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let usage = |e: UsageError| Outcome { code: 2, stdout: String::new(), stderr: format!("error: {}\n", e.0) };
    let threads = match thread_count(cli.jobs) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("thread pool");
    let result = pool.install(|| campaign::execute(&cli));
    match result {
        Ok(mut report) => {
            if !cli.timing {
                report.results.iter_mut().for_each(|e| e.timing_ms = None);
            }
            let stdout = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            Outcome { code: if report.ok() { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e) => usage(e),
    }
}
