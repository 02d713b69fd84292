mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use selfaffine::Error;

#[derive(Debug, Parser)]
#[command(name = "selfaffine", version, about = "Pressure, dimension and structure checks for affine IFS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Singular value function of each generator.
    Svf,
    /// Pressure bracket of the singular value potential at depth n.
    Pressure,
    /// Affinity-dimension interval.
    Affdim,
    /// Lyapunov spectrum under the Bernoulli measure given by `weights`.
    Lyapunov,
    /// Level-n Gibbs approximation of the equilibrium state.
    Gibbs,
    /// Irreducibility, proximality and triangularizability report.
    Structure,
    /// Hypotheses and Lyapunov gap of the separation criterion.
    CheckSep,
    /// Invariant quadratic form search.
    CheckSimilitude,
    /// Spectral-radius multiplicativity on sampled word pairs.
    CheckMult,
    /// Normalize by the weighted spectral form and test its constancy.
    FwCheck,
    /// Dual tuple at `d − s`.
    Dualize,
    /// Chaos-game sample of the self-affine measure.
    SampleAttractor,
    /// Max-of-three identity for block-diagonal generators diag(b, C).
    Lemma3,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Svf => "svf",
            Command::Pressure => "pressure",
            Command::Affdim => "affdim",
            Command::Lyapunov => "lyapunov",
            Command::Gibbs => "gibbs",
            Command::Structure => "structure",
            Command::CheckSep => "check-sep",
            Command::CheckSimilitude => "check-similitude",
            Command::CheckMult => "check-mult",
            Command::FwCheck => "fw-check",
            Command::Dualize => "dualize",
            Command::SampleAttractor => "sample-attractor",
            Command::Lemma3 => "lemma3",
        }
    }
}

#[derive(Debug, Clone, clap::Args, serde::Serialize)]
pub struct Params {
    /// Input tuple JSON.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    /// Report path; stdout when omitted.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Word length n (enumeration depth, Gibbs level).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Longest word searched or sampled.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    /// Product length per Monte-Carlo replicate.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Worker threads; all results are independent of this value.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Maximum number of enumerated words.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Number of sampled words or word pairs.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn: Option<usize>,
    /// CSV destination for sample-attractor.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 3,
        Error::Degenerate(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
