use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use toricstack::cox::{MorphismData, SamplingConfig};
use toricstack::stacky::StackyData;
use toricstack::Execution;

use crate::commands::{self, Context, Outcome};
use crate::doc::{parse_json, read_input, MorphismDocument, StackyDataDocument};
use crate::error::CliError;
use crate::report::{InputDigest, Report, EXIT_INVALID, EXIT_OK, EXIT_ORACLE_DISAGREES};

#[derive(Debug, Parser)]
#[command(name = "toricstack", version, about = "Exact computations with toric Deligne-Mumford stacks")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Sample points for the condition (b) refutation search.
    #[arg(long, global = true, value_name = "N", default_value_t = 512)]
    pub sample_budget: usize,
    /// Seed of the condition (b) sampler.
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    /// Cross-check the answer with the brute-force oracles.
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the fan axioms and data invariants.
    Validate { file: PathBuf },
    /// Quotient presentation, stacky fan, stabilizers of generic points.
    Build { file: PathBuf },
    /// Picard group of the rigidification and the gerbe classes.
    Pic { file: PathBuf },
    /// Stabilizer of the points over a cone (all cones when omitted).
    Stabilizer {
        file: PathBuf,
        /// Comma-separated ray indices; an empty value is the zero cone.
        #[arg(long, value_name = "i,j,k")]
        cone: Option<String>,
    },
    /// Drop the root data.
    Rigidify { file: PathBuf },
    /// Split off the torus factor of non-spanning data.
    Split { file: PathBuf },
    /// Decide banded-gerbe isomorphism of two data sets.
    Classify { first: PathBuf, second: PathBuf },
    /// Rewrite the r-list as a divisor chain.
    Canonicalize { file: PathBuf },
    /// Morphisms given by homogeneous polynomials.
    Morphism {
        #[command(subcommand)]
        mode: MorphismMode,
    },
}

#[derive(Debug, Subcommand)]
pub enum MorphismMode {
    /// Conditions (a) and (b).
    Check { file: PathBuf },
    /// Whether two tuples define 2-isomorphic morphisms.
    Iso { first: PathBuf, second: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Build { .. } => "build",
            Command::Pic { .. } => "pic",
            Command::Stabilizer { .. } => "stabilizer",
            Command::Rigidify { .. } => "rigidify",
            Command::Split { .. } => "split",
            Command::Classify { .. } => "classify",
            Command::Canonicalize { .. } => "canonicalize",
            Command::Morphism { mode: MorphismMode::Check { .. } } => "morphism check",
            Command::Morphism { mode: MorphismMode::Iso { .. } } => "morphism iso",
        }
    }

    fn paths(&self) -> Vec<&Path> {
        match self {
            Command::Validate { file }
            | Command::Build { file }
            | Command::Pic { file }
            | Command::Stabilizer { file, .. }
            | Command::Rigidify { file }
            | Command::Split { file }
            | Command::Canonicalize { file }
            | Command::Morphism { mode: MorphismMode::Check { file } } => vec![file],
            Command::Classify { first, second } | Command::Morphism { mode: MorphismMode::Iso { first, second } } => {
                vec![first, second]
            }
        }
    }
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Input<'a> {
    path: &'a Path,
    bytes: Vec<u8>,
}

impl Input<'_> {
    fn data(&self) -> Result<StackyData, CliError> {
        parse_json::<StackyDataDocument>(self.path, &self.bytes)?.to_data()
    }

    fn morphism(&self) -> Result<MorphismData, CliError> {
        parse_json::<MorphismDocument>(self.path, &self.bytes)?.to_morphism()
    }

    fn is_morphism_document(&self) -> bool {
        serde_json::from_slice::<serde_json::Value>(&self.bytes)
            .map(|v| v.get("source").is_some())
            .unwrap_or(false)
    }
}

fn parse_cone(s: &str) -> Result<Vec<usize>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::invalid("bad_cone", format!("{s:?} is not a comma-separated list of ray indices")))
        })
        .collect()
}

fn dispatch(cli: &Cli, inputs: &[Input<'_>], ctx: &Context) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate { .. } => {
            if inputs[0].is_morphism_document() {
                Ok(commands::validate_morphism(&inputs[0].morphism()?))
            } else {
                Ok(commands::validate(&inputs[0].data()?))
            }
        }
        Command::Build { .. } => commands::build(&inputs[0].data()?, ctx),
        Command::Pic { .. } => Ok(commands::pic(&inputs[0].data()?, ctx)),
        Command::Stabilizer { cone, .. } => {
            let cone = cone.as_deref().map(parse_cone).transpose()?;
            commands::stabilizer(&inputs[0].data()?, cone.as_deref(), ctx)
        }
        Command::Rigidify { .. } => Ok(commands::rigidify_cmd(&inputs[0].data()?)),
        Command::Split { .. } => Ok(commands::split(&inputs[0].data()?, ctx)),
        Command::Classify { .. } => commands::classify(&inputs[0].data()?, &inputs[1].data()?, ctx),
        Command::Canonicalize { .. } => Ok(commands::canonicalize_cmd(&inputs[0].data()?, ctx)),
        Command::Morphism { mode: MorphismMode::Check { .. } } => commands::morphism_check(&inputs[0].morphism()?, ctx),
        Command::Morphism { mode: MorphismMode::Iso { .. } } => {
            commands::morphism_iso(&inputs[0].morphism()?, &inputs[1].morphism()?, ctx)
        }
    }
}

fn execute(cli: &Cli) -> Invocation {
    let exec = match cli.jobs {
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    };
    let ctx = Context {
        exec,
        sampling: SamplingConfig {
            seed: cli.seed,
            budget: cli.sample_budget,
            ..SamplingConfig::default()
        },
        verify: cli.verify,
    };

    let mut digests = Vec::new();
    let mut inputs = Vec::new();
    let mut failure = None;
    for path in cli.command.paths() {
        match read_input(path) {
            Ok(bytes) => {
                digests.push(InputDigest::new(&path.display().to_string(), &bytes));
                inputs.push(Input { path, bytes });
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    let outcome = match failure {
        Some(e) => Err(e),
        None => dispatch(cli, &inputs, &ctx),
    };

    let mut report = Report::new(cli.command.name(), digests);
    let mut text = String::new();
    let mut stderr = String::new();
    match outcome {
        Ok(out) => {
            report.exit_code = out.exit;
            report.result = Some(out.result);
            text = out.text;
            if cli.verify {
                if out.checks.iter().any(|c| c.agrees == Some(false)) {
                    report.exit_code = EXIT_ORACLE_DISAGREES;
                    report.ok = false;
                }
                for c in &out.checks {
                    let status = match c.agrees {
                        Some(true) => "ok",
                        Some(false) => "MISMATCH",
                        None => "skipped",
                    };
                    text.push_str(&format!("\nverify {status}: {} ({})", c.name, c.detail));
                }
                report.verify = Some(out.checks);
            }
        }
        Err(e) => {
            report.ok = false;
            report.exit_code = EXIT_INVALID;
            stderr = format!("error[{}]: {e}\n", e.code());
            report.errors.push(e.to_object());
        }
    }
    let stdout = if cli.json {
        serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
    } else if text.is_empty() {
        String::new()
    } else {
        text + "\n"
    };
    Invocation {
        exit_code: report.exit_code,
        stdout,
        stderr,
    }
}

/// Parses the arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), rendered) } else { (rendered, String::new()) };
            return Invocation {
                exit_code: code,
                stdout,
                stderr,
            };
        }
    };
    match cli.jobs {
        Some(n) if n > 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(_) => execute(&cli),
        },
        _ => execute(&cli),
    }
}
