//! `tqft` command-line interface.
//!
//! Exit codes: 0 on success, 2 for invalid input or guard violations, 1 when
//! an internal invariant fails (its name is printed on stderr).

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::Format;
use tqft::TqftError;

#[derive(Parser, Debug)]
#[command(name = "tqft", version, about = "Finite-group and Frobenius-algebra TQFT toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,

    /// Seed for randomized steps (decimal or 0x-prefixed hex).
    #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE", global = true)]
    seed: u64,

    /// Worker thread cap; overrides TQFT_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group structure: order, classes, Cayley table.
    Group(GroupArgs),
    /// Character table.
    Chartable(GroupOnly),
    /// Frobenius algebra diagnostics and genus invariants.
    Frob(FrobArgs),
    /// Cobordism words evaluated in a Frobenius algebra.
    Cob {
        #[command(subcommand)]
        action: CobAction,
    },
    /// Open/closed data for a semisimple closed algebra.
    Openclosed {
        #[command(subcommand)]
        action: OpenClosedAction,
    },
    /// Flat-connection counts and Dijkgraaf–Witten values.
    Dw(DwArgs),
    /// Triangulation state sums.
    Lattice(LatticeArgs),
    /// Modular data of the Drinfeld double D(G).
    Double(DoubleArgs),
    /// Modular data of SU(2) at level k.
    Su2k(Su2kArgs),
    /// Area-dependent Yang–Mills partition function.
    Ym(YmArgs),
    /// Cross-module oracle suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct GroupOnly {
    /// Preset name (S3, Z4, D4, Q8, Z2xS3, ...), inline JSON or JSON file.
    #[arg(long, visible_alias = "preset", alias = "file")]
    group: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupView {
    Info,
    Classes,
    Cayley,
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[command(flatten)]
    group: GroupOnly,
    #[arg(value_enum, default_value = "info")]
    view: GroupView,
}

#[derive(Args, Debug)]
struct FrobArgs {
    /// Algebra spec as inline JSON or a JSON file.
    #[arg(long)]
    algebra: String,
    /// Largest genus for ε(ω^g).
    #[arg(long, default_value_t = 4)]
    genus: usize,
}

#[derive(Subcommand, Debug)]
enum CobAction {
    /// Evaluates a word (one slice per line).
    Eval {
        /// File holding the word; `-` reads stdin.
        #[arg(long, conflicts_with = "text")]
        word: Option<String>,
        /// The word itself, slices separated by newlines or `;`.
        #[arg(long)]
        text: Option<String>,
        #[arg(long)]
        algebra: String,
    },
    /// Defects of all generator relations.
    Relations {
        #[arg(long)]
        algebra: String,
    },
    /// Closed genus-g word against ε(ω^g).
    Closed {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        algebra: String,
    },
}

#[derive(Subcommand, Debug)]
enum OpenClosedAction {
    /// Checks μσΔ against i_* i^* on the brane with multiplicities k.
    Cardy {
        #[command(flatten)]
        closed: ClosedArgs,
        /// Multiplicities, e.g. `2,1,3`.
        #[arg(long)]
        k: String,
    },
    /// Rank of the brane group K0.
    K0 {
        #[command(flatten)]
        closed: ClosedArgs,
    },
}

#[derive(Args, Debug)]
struct ClosedArgs {
    /// Traces ε(p_i) of the idempotents, e.g. `1,4,9`.
    #[arg(long)]
    traces: String,
    /// Square-root sign per idempotent, e.g. `+,-,+`.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
}

#[derive(Args, Debug)]
struct DwArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    genus: usize,
    /// Conjugacy class index per boundary circle.
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long, value_enum, default_value = "convolution")]
    method: DwMethod,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DwMethod {
    Brute,
    Convolution,
    Character,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// `genus:G`, `sphere`, `cylinder`, or triangulation JSON.
    #[arg(long, default_value = "genus:1")]
    surface: String,
    #[arg(long)]
    group: String,
    /// Number of random Pachner moves to apply.
    #[arg(long, default_value_t = 0)]
    shuffle: usize,
    /// Also emit the cylinder projector.
    #[arg(long)]
    projector: bool,
}

#[derive(Args, Debug)]
struct EmitArgs {
    /// Comma-separated subset of s,t,c,fusion,dims.
    #[arg(long, default_value = "dims")]
    emit: String,
    /// Also report the Verlinde dimension at this genus.
    #[arg(long)]
    genus: Option<usize>,
}

#[derive(Args, Debug)]
struct DoubleArgs {
    #[arg(long)]
    group: String,
    #[command(flatten)]
    emit: EmitArgs,
}

#[derive(Args, Debug)]
struct Su2kArgs {
    #[arg(long)]
    level: usize,
    #[command(flatten)]
    emit: EmitArgs,
}

#[derive(Args, Debug)]
struct YmArgs {
    /// `su2` or a group spec for the finite-group spectrum.
    #[arg(long, default_value = "su2")]
    spectrum: String,
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    area: f64,
    /// Truncation; chosen from --tail when absent.
    #[arg(long)]
    nmax: Option<usize>,
    /// Target tail bound for automatic truncation.
    #[arg(long, default_value_t = 1e-8)]
    tail: f64,
    #[arg(long, default_value_t = tqft::yang_mills::DEFAULT_CASIMIR_SCALE)]
    casimir_scale: f64,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Criterion names, ids or tags (dw, lattice, double, ...).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Injects a fault, e.g. `perturb-s`.
    #[arg(long)]
    inject: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        std::env::set_var(tqft::parallel::THREADS_ENV, n.to_string());
    }
    match commands::dispatch(&cli) {
        Ok(outcome) => {
            print!("{}", output::render(&outcome.doc, cli.format));
            match outcome.failed_invariants.as_slice() {
                [] => ExitCode::SUCCESS,
                names => {
                    eprintln!("invariant failure: {}", names.join(", "));
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => report(&e),
    }
}

fn report(e: &TqftError) -> ExitCode {
    match e {
        TqftError::Invariant { name, detail } => {
            eprintln!("invariant failure: {name}: {detail}");
            ExitCode::from(1)
        }
        _ if !e.is_user_error() => {
            eprintln!("invariant failure: {e}");
            ExitCode::from(1)
        }
        _ => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
