mod commands;
mod input;
mod job;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plurival_core::Error;

use report::Format;

#[derive(Parser, Debug)]
#[command(
    name = "plurival",
    version,
    about = "Exact singularity invariants of toric plurisubharmonic weights",
    after_help = "Rationals are written p/q and vectors comma-separated. Weights are \
                  `c:β;β'` shorthand (e.g. 3/2:2,0;0,3), inline JSON or a JSON file. \
                  Exit codes: 0 ok, 1 invalid input or domain error, 2 capacity, 3 verification failure."
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub output: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

/// A toric weight given either in full or as a diagonal direction `a`.
#[derive(Args, Debug, Clone)]
pub struct WeightArgs {
    /// Toric weight `c·log max|z^β|`.
    #[arg(long, conflicts_with = "a")]
    pub weight: Option<String>,
    /// Diagonal direction with Σ 1/a_j = 1, e.g. 2/1,2/1.
    #[arg(long)]
    pub a: Option<String>,
    /// Rescale `a` onto Σ 1/a_j = 1 instead of rejecting it.
    #[arg(long)]
    pub project: bool,
}

/// Reference density `|z^{f0}|² e^{-2φ₀}`.
#[derive(Args, Debug, Clone)]
pub struct ReferenceArgs {
    /// Reference monomial exponent.
    #[arg(long)]
    pub f0: Option<String>,
    /// Reference twist weight.
    #[arg(long)]
    pub phi0: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Log canonical threshold of a weight.
    Lct {
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Jumping number of |z^g|²|z^{f0}|² e^{-2φ₀} e^{-2cφ}.
    Jump {
        /// Numerator exponent.
        #[arg(long)]
        g: Option<String>,
        /// Monomial ideal numerator instead of a single monomial.
        #[arg(long, conflicts_with = "g")]
        ideal: Option<String>,
        #[command(flatten)]
        reference: ReferenceArgs,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Relative type σ(ψ, φ); with --a, against the Zhou weight of the reference.
    Type {
        #[arg(long)]
        psi: String,
        #[command(flatten)]
        reference: ReferenceArgs,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Zhou valuation ν(z^g, Φ) for the Zhou weight of direction a.
    Valuation {
        #[arg(long)]
        g: String,
        #[command(flatten)]
        reference: ReferenceArgs,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Minimal generators of the multiplier ideal I(tφ).
    Mideal {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        t: String,
    },
    /// Breakpoints of the Tian function Tn(t).
    Tian {
        /// Direction monomial f (ψ = log|z^f|).
        #[arg(long, conflicts_with = "psi")]
        f: Option<String>,
        /// Direction weight ψ.
        #[arg(long)]
        psi: Option<String>,
        /// Weight v; alias of --weight.
        #[arg(long, conflicts_with_all = ["weight", "a"])]
        v: Option<String>,
        #[command(flatten)]
        reference: ReferenceArgs,
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, default_value = "-1:4", allow_hyphen_values = true)]
        range: String,
    },
    /// Sublevel-set ratios or masses along a t-grid.
    Integral {
        #[arg(long, value_parser = ["ratio", "mass"], default_value = "ratio")]
        mode: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        project: bool,
        #[command(flatten)]
        reference: ReferenceArgs,
        /// ψ for ratio mode.
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, default_value = "1:32:geometric")]
        t_grid: String,
        /// Monte Carlo sample count; selects the sampling backend.
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Approximation of Φ_a by multiplier-ideal monomials.
    Approx {
        #[arg(long)]
        a: String,
        #[arg(long)]
        project: bool,
        #[arg(long, default_value = "1:16")]
        m: String,
        #[arg(long, default_value = "0.1:0.9:9")]
        grid: String,
    },
    /// Jumping number of an ideal against the sup of Zhou numbers.
    #[command(name = "thmA", alias = "thm-a")]
    ThmA {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 100)]
        res: u32,
    },
    /// Valuative order of u, v against inclusions I(tv) ⊆ I(tu).
    Include {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, default_value = "20")]
        t_max: String,
        #[arg(long, default_value_t = 1)]
        den: i64,
    },
    /// Whether z^g divides z^f, componentwise and valuatively.
    Divides {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Green approximants at a point of the unit polydisc.
    Green {
        /// Moduli |z_j|, comma-separated.
        #[arg(long)]
        z: String,
        #[arg(long, default_value = "1:8")]
        m: String,
    },
    /// Run verification suites.
    Verify {
        /// Suite name, anchor, criterion number, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = plurival_core::verify::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run a job described in JSON.
    Run {
        /// Inline JSON or a path to a JSON job file.
        #[arg(long)]
        job: String,
    },
}

pub enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
    /// Verification failed; the report has already been written.
    Verification(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Capacity { .. }) => 2,
            Failure::Core(Error::Verification { .. }) | Failure::Verification(_) => 3,
            Failure::Core(_) | Failure::Usage(_) | Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Verification(anchors) => format!("verification failed: {}", anchors.join(", ")),
        }
    }
}

pub fn run_args<I, T>(args: I) -> Result<(), Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(Failure::Usage(e.render().to_string()));
        }
    };
    commands::dispatch(cli)
}

fn main() -> ExitCode {
    match run_args(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message().trim_end().trim_start_matches("error: "));
            ExitCode::from(f.code())
        }
    }
}
