//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns the exit code with the rendered report.
//!
//! Exit codes: 0 pass, 1 input error, 2 saturation did not converge,
//! 3 a verification failed.

mod commands;
mod input;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::forms::{FormError, SaturationConfig, DEFAULT_ITERATION_BOUND};
use crate::voa::Truncation;

pub use input::{load_actions, load_generators, load_lattice, ActionFile, AutomorphismJson};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "voaforms", version, about = "Integral forms in truncated lattice VOAs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a form and write its manifest.
    Build(BuildArgs),
    /// Run the verification suites on a manifest.
    Verify(VerifyArgs),
    /// Rescale a form into a lattice-integral one.
    Rescale(RescaleArgs),
    /// Degreewise dual lattices.
    Dual(FormOnly),
    /// Eigenlattices and total eigenlattice under commuting involutions.
    Tel(TelArgs),
    /// The dihedral 2A algebra report.
    #[command(name = "dihedral2a")]
    Dihedral2a(OutputArgs),
    /// Mutual containment exponents of two forms.
    NliTransfer(NliArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TruncateMode {
    Error,
    Drop,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for sampled checks; recorded in every report.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    /// Lattice JSON: {"rank": r, "gram": [[...]]}.
    #[arg(long)]
    pub lattice: PathBuf,
    /// JSON list of element literals; the vacuum is always added.
    #[arg(long)]
    pub generators: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub max_degree: u32,
    /// Generator degree bound; defaults to the largest generator degree.
    #[arg(long)]
    pub gen_degree: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_ITERATION_BOUND)]
    pub iter_bound: usize,
    /// What to do with generator components above the cutoff.
    #[arg(long, value_enum, default_value = "error")]
    pub truncate: TruncateMode,
}

#[derive(Args, Debug)]
pub struct FormOnly {
    #[command(flatten)]
    pub form: FormArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Manifest destination; without it the manifest goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = DEFAULT_ITERATION_BOUND)]
    pub iter_bound: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    #[value(name = "dihedral2a")]
    Dihedral2a,
}

#[derive(Args, Debug)]
pub struct RescaleArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Degree whose lattice is multiplied by `--scale` before rescaling.
    #[arg(long, requires = "scale")]
    pub scale_degree: Option<u32>,
    /// Rational factor such as 1/2.
    #[arg(long, requires = "scale_degree")]
    pub scale: Option<String>,
}

#[derive(Args, Debug)]
pub struct TelArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Automorphisms JSON; defaults to the lift of -1.
    #[arg(long)]
    pub action: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NliArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Generators of the second form, in the same lattice VOA.
    #[arg(long)]
    pub other_generators: PathBuf,
}

/// Validated settings shared by the form-building subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub cutoff: u32,
    pub gen_degree: Option<u32>,
    pub saturation: SaturationConfig,
    pub truncation: Truncation,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(form: &FormArgs, output: &OutputArgs) -> Result<Self, CliError> {
        if form.iter_bound == 0 {
            return Err(CliError::Input("--iter-bound must be at least 1".into()));
        }
        if let Some(t) = form.gen_degree {
            if t > form.max_degree {
                return Err(CliError::Input(format!("--gen-degree {t} exceeds --max-degree {}", form.max_degree)));
            }
        }
        Ok(RunConfig {
            cutoff: form.max_degree,
            gen_degree: form.gen_degree,
            saturation: SaturationConfig { iteration_bound: form.iter_bound },
            truncation: match form.truncate {
                TruncateMode::Error => Truncation::Error,
                TruncateMode::Drop => Truncation::Drop,
            },
            format: output.format,
            seed: output.seed,
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("saturation did not converge: {0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
        }
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        match e {
            FormError::NonConvergence { bound, trace } => CliError::NonConvergence(format!(
                "no fixpoint within {bound} passes; ranks per pass: {:?}",
                trace.passes.iter().map(|p| p.ranks.clone()).collect::<Vec<_>>()
            )),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A rendered report and whether every check in it passed.
pub(crate) struct Report {
    pub text: String,
    pub passed: bool,
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("VOAFORMS_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("VOAFORMS_THREADS must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Input(e.to_string()))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let msg = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: msg }
            } else {
                Outcome { code, stdout: msg, stderr: String::new() }
            };
        }
    };
    let result = thread_pool().and_then(|pool| pool.install(|| commands::execute(&cli.command)));
    match result {
        Ok(r) => Outcome {
            code: if r.passed { EXIT_PASS } else { EXIT_VERIFY },
            stdout: r.text,
            stderr: String::new(),
        },
        Err(e) => Outcome { code: e.code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
