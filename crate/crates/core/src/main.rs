use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qudit_ame::ame::Method;
use qudit_ame::cli::{self, ConstructKind, RunConfig, EXIT_INVALID};
use qudit_ame::nogo::{TableFormat, DEFAULT_MAX_DIM, DEFAULT_MAX_PARTIES};
use qudit_ame::search::{SearchMode, DEFAULT_SEARCH_BUDGET};
use qudit_ame::statevec::DEFAULT_DENSE_BUDGET;
use qudit_ame::Result;

/// Qudit stabilizer AME toolkit: construct, verify, decompose, search, no-go tables.
#[derive(Parser)]
#[command(name = "qudit-ame", version)]
struct Opts {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Tolerance for dense fidelity and maximal-mixedness checks.
    #[arg(long = "tol", global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Largest dense vector (amplitudes) the dense checks may allocate.
    #[arg(long, global = true, default_value_t = DEFAULT_DENSE_BUDGET)]
    dense_budget: usize,
    /// Largest number of graph candidates a search may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET)]
    search_budget: u128,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a generator file for a GHZ, Bell or graph state.
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        dim: u64,
        #[arg(long, default_value_t = 2)]
        parties: usize,
        /// Graph edges: a search witness line `n d : a12 a13 …` or the upper-triangle entries.
        #[arg(long)]
        adjacency: Option<String>,
    },
    /// Check whether a generator file stabilizes an AME state (exit 0 AME, 1 not AME, 2 invalid).
    Verify {
        gens: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Split a stabilizer state over Z_D into its prime-power factors.
    Decompose {
        gens: PathBuf,
        /// Also run dense checks, per-factor AME verdicts and all subset merges.
        #[arg(long)]
        verify: bool,
    },
    /// Enumerate graph states for AME witnesses.
    Search {
        #[arg(long)]
        parties: usize,
        #[arg(long)]
        dim: u64,
        /// Stop at the first witness instead of enumerating everything.
        #[arg(long)]
        first: bool,
        /// Half-open candidate index range `start:end`.
        #[arg(long)]
        shard: Option<String>,
    },
    /// Propagate prime-power no-go facts over an (n, D) grid.
    Nogo {
        /// Facts file (`n q status source` lines); the shipped facts when omitted.
        #[arg(long)]
        facts: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_PARTIES)]
        parties: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        dim: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ghz,
    Bell,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Symbolic,
    Dense,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    /// Long CSV with the exclusion chain of every cell.
    CsvReasons,
    Svg,
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn run(opts: Opts) -> Result<(String, i32)> {
    let cfg = RunConfig {
        tolerance: opts.common.tol,
        dense_budget: opts.common.dense_budget,
        search_budget: opts.common.search_budget,
    };
    cfg.validate()?;
    Ok(match opts.command {
        Command::Construct { kind, dim, parties, adjacency } => {
            let kind = match kind {
                Kind::Ghz => ConstructKind::Ghz,
                Kind::Bell => ConstructKind::Bell,
                Kind::Graph => ConstructKind::Graph,
            };
            (cli::cmd_construct(kind, dim, parties, adjacency.as_deref())?, 0)
        }
        Command::Verify { gens, method } => {
            let method = match method {
                MethodArg::Symbolic => Method::Symbolic,
                MethodArg::Dense => Method::Dense,
                MethodArg::Both => Method::Both,
            };
            let out = cli::cmd_verify(&read(&gens)?, method, &cfg)?;
            (out.text, out.exit_code)
        }
        Command::Decompose { gens, verify } => (cli::cmd_decompose(&read(&gens)?, verify, &cfg)?, 0),
        Command::Search { parties, dim, first, shard } => {
            let mode = if first { SearchMode::FirstWitness } else { SearchMode::Exhaustive };
            let shard = shard.as_deref().map(cli::parse_shard).transpose()?;
            (cli::cmd_search(parties, dim, mode, shard, &cfg)?, 0)
        }
        Command::Nogo { facts, parties, dim, format } => {
            let facts = facts.as_deref().map(read).transpose()?;
            let format = match format {
                FormatArg::Csv => TableFormat::Csv,
                FormatArg::CsvReasons => TableFormat::CsvWithReasons,
                FormatArg::Svg => TableFormat::Svg,
            };
            (cli::cmd_nogo(facts.as_deref(), parties, dim, format)?, 0)
        }
    })
}

fn main() -> ExitCode {
    let opts = Opts::parse();
    let out_path = opts.common.out.clone();
    let result = run(opts).and_then(|(text, code)| {
        match &out_path {
            Some(p) => std::fs::write(p, &text)?,
            None => print!("{text}"),
        }
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
