//! `bq`: batch front end for the verification toolkit.
//!
//! Exit codes: 0 when every verdict passes, 1 when a verdict fails or the
//! computation reports an error, 2 for usage and input errors. The worker
//! count comes from `BQ_WORKERS` (default 1).

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bq_core::chains::{ChainMode, RationalBudget};
use bq_core::sampling::DEFAULT_SEED;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{DomainChoice, MapSource};
use report::RunReport;

#[derive(Parser, Debug)]
#[command(
    name = "bq",
    version,
    about = "Exact checks for unit-distance preserving maps of K^2"
)]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Check every point or pair (finite fields only).
    #[arg(long, global = true, conflicts_with = "samples")]
    exhaustive: bool,
    /// Check this many seeded samples instead.
    #[arg(long, global = true, value_name = "N")]
    samples: Option<usize>,
    /// Add the wall-clock time to the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    /// Adjoin square roots as needed.
    Auto,
    /// Stay in the input field.
    Rational,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long, default_value = "GF(13)")]
    field: String,
    /// Map expression, e.g. `translate(2,3) . rot(0,1)`.
    #[arg(long, required_unless_present = "table", conflicts_with = "table")]
    map: Option<String>,
    /// Map table file with lines `x1,x2 -> y1,y2`.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check phi = d o (xi x xi), d = phi o (eta x eta) and xi, eta inverse.
    VerifyIdentities {
        #[arg(long, default_value = "GF(13)")]
        field: String,
    },
    /// Build and verify a unit-distance chain between two real points.
    Chain {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        max_denominator: Option<u64>,
    },
    /// Build and verify the chain from X = (a1 + b1 i, a2 + b2 i) to (i, i).
    ImaginaryChain {
        #[arg(long, default_value = "Q[i]")]
        field: String,
        #[arg(long)]
        point: String,
    },
    /// Decompose a unit-distance preserver as I o (gamma, gamma).
    Decompose(DecomposeArgs),
    /// Decompose through the Lorentz-Minkowski coordinates.
    DecomposeLorentz(DecomposeArgs),
    /// List O(2) of a prime field.
    EnumerateOrtho {
        #[arg(long, default_value = "GF(13)")]
        field: String,
    },
    /// Search all unit-distance preservers of GF(p)^2.
    SearchPreservers {
        #[arg(long, default_value = "GF(13)")]
        field: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Also print every map found.
        #[arg(long)]
        list: bool,
    },
    /// A unit-distance preserver of Q(sqrt 2)(i)^2 that is not an isometry.
    WitnessNonisometry,
}

fn run(cli: &Cli) -> bq_core::Result<RunReport> {
    let d = DomainChoice {
        exhaustive: cli.exhaustive,
        samples: cli.samples,
        seed: cli.seed,
    };
    match &cli.command {
        Command::VerifyIdentities { field } => commands::verify_identities(field, &d),
        Command::Chain {
            field,
            from,
            to,
            mode,
            max_steps,
            max_denominator,
        } => {
            let mut budget = RationalBudget::default();
            if let Some(n) = max_steps {
                budget.max_steps = *n;
            }
            if let Some(n) = max_denominator {
                budget.max_denominator = *n;
            }
            let mode = match mode {
                Mode::Auto => ChainMode::AutoExtend,
                Mode::Rational => ChainMode::RationalOnly,
            };
            commands::chain(field, from, to, mode, budget, &d)
        }
        Command::ImaginaryChain { field, point } => commands::imaginary_chain(field, point, &d),
        Command::Decompose(a) | Command::DecomposeLorentz(a) => {
            let src = match (&a.map, &a.table) {
                (Some(m), _) => MapSource::Expr(m),
                (None, Some(t)) => MapSource::Table(t),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let lorentz = matches!(cli.command, Command::DecomposeLorentz(_));
            commands::decompose(&a.field, src, lorentz, &d)
        }
        Command::EnumerateOrtho { field } => commands::enumerate_ortho(field, &d),
        Command::SearchPreservers {
            field,
            budget,
            list,
        } => commands::search_preservers(field, *budget, *list, &d),
        Command::WitnessNonisometry => commands::witness_nonisometry(&d),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut rep = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("bq: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.timing {
        rep.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    let out = match cli.format {
        Format::Text => rep.to_text(),
        Format::Json => rep.to_json_lines(),
    };
    print!("{out}");
    if rep.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
