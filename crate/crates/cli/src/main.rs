//! `salem`: command-line front end for `salem-core`.
//!
//! Every run prints (or writes to `--out`) its fully resolved configuration
//! next to the result. Exit codes: 0 success, 1 error, 2 inconclusive.

mod commands;
mod format;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::format::Table;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "salem", version, about = "Symbolic coding of Salem and Pisot toral automorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Coefficients f_0,...,f_m, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Exploratory base for beta-shift commands, used instead of --poly.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Working precision of the root finder in decimal digits.
    #[arg(long, global = true, env = "SALEM_PRECISION", default_value_t = salem_core::algebra::DEFAULT_DIGITS)]
    pub precision: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Norm bound of the zero-insertion construction (calibrated if absent).
    #[arg(long = "K", global = true)]
    pub k: Option<f64>,
    /// Sub-blocks per stage.
    #[arg(long = "J", global = true)]
    pub j: Option<usize>,
    /// Zero-run cap, an integer or "auto".
    #[arg(long = "L", global = true)]
    pub l: Option<String>,
    #[arg(long, global = true)]
    pub stages: Option<usize>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub length: Option<usize>,
    #[arg(long, global = true)]
    pub block: Option<usize>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hyperbolic / cyclotomic / Pisot / Salem classification.
    Classify,
    /// Roots with their classes and partial-fraction coefficients.
    Roots,
    /// The homoclinic sequences w+, w- and the central vector w0.
    Homoclinic {
        #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        hi: i64,
    },
    /// Coding map of a finitely supported integer window.
    Xi {
        /// Window JSON, digit array or digit string; "@file" reads a file.
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
    },
    /// Cocycle d(n, v) in coefficient form.
    Cocycle {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
    },
    /// Integer sequence coding a torus point.
    Encode {
        /// Coordinates in [0, 1), comma separated.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        hi: i64,
    },
    /// Residual of the pseudo-cover identity for a torus point.
    Pseudocover {
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        hi: i64,
    },
    /// Greedy beta-expansion of x in [0, 1).
    Expand {
        #[arg(long)]
        x: f64,
    },
    /// Quasi-greedy expansion of one.
    Estar,
    /// Parry admissibility of a digit window.
    Admissible {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        /// Check only suffixes starting at index 1 or later.
        #[arg(long)]
        one_sided: bool,
    },
    /// Value of a digit window in base beta.
    Eta {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        lo: i64,
    },
    /// Period search on the expansion of one plus a truncated-chain scan.
    Probe,
    /// Hofbauer chain with Perron data.
    Chain {
        /// Cut at --depth even when the exact closure is available.
        #[arg(long)]
        truncated: bool,
    },
    /// Digits of a Parry-measure sample path.
    Sample,
    /// Block-entropy estimates of Parry samples.
    Entropy,
    /// Rotation constant L of the circle roots.
    Minimality,
    /// Zero-insertion construction with bound and entropy checks.
    Construct,
    /// Fraction of Parry samples with cocycle norm below K, per time step.
    Dbound,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Roots => "roots",
            Command::Homoclinic { .. } => "homoclinic",
            Command::Xi { .. } => "xi",
            Command::Cocycle { .. } => "cocycle",
            Command::Encode { .. } => "encode",
            Command::Pseudocover { .. } => "pseudocover",
            Command::Expand { .. } => "expand",
            Command::Estar => "estar",
            Command::Admissible { .. } => "admissible",
            Command::Eta { .. } => "eta",
            Command::Probe => "probe",
            Command::Chain { .. } => "chain",
            Command::Sample => "sample",
            Command::Entropy => "entropy",
            Command::Minimality => "minimality",
            Command::Construct => "construct",
            Command::Dbound => "dbound",
        }
    }
}

/// The resolved configuration printed with every result.
#[derive(Serialize, Debug)]
pub struct RunConfig {
    pub command: &'static str,
    pub params: BTreeMap<&'static str, Value>,
    pub seed: u64,
    pub precision: u32,
    pub output: OutputSpec,
}

#[derive(Serialize, Debug)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Format,
}

impl RunConfig {
    /// SHA-256 of the canonical JSON of everything but the output location.
    pub fn hash(&self) -> String {
        let canonical = json!({
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "precision": self.precision,
        });
        Sha256::digest(canonical.to_string().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Result of a command before rendering.
pub struct Output {
    pub result: Value,
    pub table: Option<Table>,
    pub code: u8,
}

pub enum Failure {
    Module { stage: &'static str, error: salem_core::Error },
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<salem_core::salem::StageError> for Failure {
    fn from(e: salem_core::salem::StageError) -> Self {
        Failure::Module { stage: e.stage, error: e.error }
    }
}

/// Tags a core error with the pipeline stage it came from.
pub trait At<T> {
    fn at(self, stage: &'static str) -> Result<T, Failure>;
}

impl<T> At<T> for salem_core::Result<T> {
    fn at(self, stage: &'static str) -> Result<T, Failure> {
        self.map_err(|error| Failure::Module { stage, error })
    }
}

fn render(cfg: &RunConfig, out: &Output, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = json!({
                "version": VERSION,
                "config": cfg,
                "config_sha256": cfg.hash(),
                "result": out.result,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialise");
            s.push('\n');
            s
        }
        Format::Csv => {
            let header = [
                format!("salem {VERSION}"),
                format!("config-sha256 {}", cfg.hash()),
                format!("config {}", serde_json::to_string(cfg).expect("config serialises")),
            ];
            match &out.table {
                Some(t) => t.render(&header),
                None => Table::from_scalars(&out.result).render(&header),
            }
        }
    }
}

fn companion_path(p: &Path, format: Format) -> PathBuf {
    p.with_extension(match format {
        Format::Json => "csv",
        Format::Csv => "json",
    })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let (params, out) = commands::dispatch(cli)?;
    let cfg = RunConfig {
        command: cli.command.name(),
        params,
        seed: cli.seed,
        precision: cli.precision,
        output: OutputSpec { path: cli.out.as_ref().map(|p| p.display().to_string()), format: cli.format },
    };
    let text = render(&cfg, &out, cli.format);
    match &cli.out {
        Some(path) => {
            write(path, &text)?;
            // the construction always leaves both the table and the summary behind
            if matches!(cli.command, Command::Construct) {
                let other = match cli.format {
                    Format::Json => Format::Csv,
                    Format::Csv => Format::Json,
                };
                write(&companion_path(path, cli.format), &render(&cfg, &out, other))?;
            }
        }
        None => print!("{text}"),
    }
    Ok(out.code)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Other(anyhow::anyhow!("writing {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Module { stage, error }) => {
            eprintln!("error: {stage}: {error}");
            ExitCode::from(if error == salem_core::Error::Inconclusive { 2 } else { 1 })
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
