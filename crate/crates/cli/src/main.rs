//! `nslab`: invariants, Betti tables and conjecture checks for numerical
//! semigroups from the command line.
//!
//! Exit codes: 0 all checks passed, 1 a fail verdict (witness) was found or
//! a replay differs, 2 usage or invalid input, 3 a resource limit was hit,
//! 4 an internal consistency check failed.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nslab::{Error, NumericalSemigroup};

#[derive(Parser, Debug)]
#[command(name = "nslab", version, about = "Numerical semigroup lab")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit JSON instead of plain text
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit CSV instead of plain text
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// Leave timestamps out of reports, for byte-identical reruns
    #[arg(long, global = true)]
    pub no_timestamps: bool,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the main output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Field characteristics for Betti numbers: 0 or primes
    #[arg(long = "char", global = true, value_delimiter = ',', default_values_t = [0u32, 2])]
    pub chars: Vec<u32>,
    /// Append-only witness file
    #[arg(long, global = true, default_value = "nslab-witnesses.jsonl")]
    pub store: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct Gens {
    /// Generators, e.g. 4,5,6
    #[arg(long, value_parser = parse_semigroup)]
    pub gens: NumericalSemigroup,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BoundArgs {
    /// Largest genus in the family
    #[arg(long)]
    pub genus_max: Option<usize>,
    /// Largest Frobenius number in the family
    #[arg(long)]
    pub frob_max: Option<i64>,
    /// Largest minimal generator in the family
    #[arg(long)]
    pub gen_max: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full invariant record of one semigroup
    Invariants(Gens),
    /// Graded Betti tables over each requested characteristic
    Betti(Gens),
    /// Hilbert function of the tangent cone and b1 of its defining ideal
    TangentCone {
        #[command(flatten)]
        gens: Gens,
        /// Print the Hilbert function up to this degree
        #[arg(long)]
        jmax: Option<usize>,
        /// Stop the b1 computation at this degree (default: the proven bound)
        #[arg(long)]
        degree_cap: Option<u32>,
    },
    /// Semigroup polynomial and its cyclotomic factors
    Series(Gens),
    /// Run checks over a bounded family, one JSON line per report
    Enumerate {
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        edim: Option<usize>,
        #[arg(long)]
        mult: Option<u64>,
        #[arg(long)]
        width: Option<u64>,
        /// Check to run (repeatable): wilf, weak-wilf, widthr, widthg,
        /// cyclo-ci, rossi, rf, ci-structure
        #[arg(long = "check")]
        checks: Vec<String>,
    },
    /// Run theorem suites over bounded families
    Verify {
        /// Suite names, comma separated, or "all"
        #[arg(long = "suite", value_delimiter = ',', required = true)]
        suites: Vec<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Best lower-bound witness for R, T, S, A or W within bounds
    Search {
        /// R (max ρ), T (max type), S (max ρ, symmetric), A (max type,
        /// almost symmetric) or W (max ρ at fixed width)
        #[arg(long)]
        target: String,
        /// e for R and T (the family has edim e + 1)
        #[arg(long)]
        e: Option<usize>,
        /// multiplicity for R and T
        #[arg(long)]
        m: Option<u64>,
        /// embedding dimension for S and A
        #[arg(long)]
        edim: Option<usize>,
        /// width for W
        #[arg(long)]
        width: Option<u64>,
        /// S only: require g_i + g_j = g_h + g_k
        #[arg(long)]
        pattern: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Joint Betti statistics over a fixed embedding dimension
    Probe {
        #[arg(long)]
        edim: usize,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Recompute a stored witness and diff it against the record
    Replay {
        id: usize,
    },
}

fn parse_semigroup(s: &str) -> Result<NumericalSemigroup, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => 3,
        Error::Consistency(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("nslab: cannot start {n} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let g = &cli.global;
    let result = match cli.command {
        Command::Invariants(a) => commands::invariants(g, &a.gens),
        Command::Betti(a) => commands::betti(g, &a.gens),
        Command::TangentCone { gens, jmax, degree_cap } => commands::tangent_cone(g, &gens.gens, jmax, degree_cap),
        Command::Series(a) => commands::series(g, &a.gens),
        Command::Enumerate { bounds, edim, mult, width, checks } => {
            commands::enumerate(g, &bounds, edim, mult, width, &checks)
        }
        Command::Verify { suites, bounds } => commands::verify(g, &suites, &bounds),
        Command::Search { target, e, m, edim, width, pattern, bounds } => {
            commands::search(g, &target, e, m, edim, width, pattern, &bounds)
        }
        Command::Probe { edim, bounds } => commands::probe(g, edim, &bounds),
        Command::Replay { id } => commands::replay(g, id),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("nslab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
