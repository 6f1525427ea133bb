mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankprobe::Error;

use crate::report::Format;

/// Sensitivity analysis of weighted-score rankings.
#[derive(Debug, Parser)]
#[command(name = "rankprobe", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input file; repeat for multi-table presets. Without --preset this is a
    /// prepared matrix (`label,<attributes>...`).
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,
    /// Dataset preset (TOML) describing tables, repairs and derivations.
    #[arg(long, global = true)]
    pub preset: Option<PathBuf>,
    /// Composite score formula.
    #[arg(long, global = true, default_value = "geom")]
    pub mean: String,
    /// `uniform`, `random` (drawn from --seed) or a file of weights.
    #[arg(long, global = true, default_value = "uniform")]
    pub weights: String,
    #[arg(long, global = true, default_value_t = rankprobe::sampler::DEFAULT_RUNS)]
    pub runs: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = rankprobe::enforce::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, global = true, default_value_t = rankprobe::enforce::DEFAULT_BIG_M_RANK)]
    pub big_m_rank: f64,
    #[arg(long, global = true, default_value_t = rankprobe::enforce::DEFAULT_BIG_M_SLACK)]
    pub big_m_slack: f64,
    #[arg(long, global = true, default_value_t = rankprobe::sampler::DEFAULT_TOP_K)]
    pub top_k: usize,
    #[arg(long, global = true, default_value_t = rankprobe::sampler::DEFAULT_GROUP_SIZE)]
    pub group_size: usize,
    /// Row label to analyse; repeatable where a command accepts several.
    #[arg(long, global = true)]
    pub target: Vec<String>,
    /// Directory for LP model files in lp_solve format.
    #[arg(long, global = true)]
    pub emit_lp: Option<PathBuf>,
    /// Directory for report files; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for parallel stages (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, default_value_t = rankprobe::lp::DEFAULT_MAX_ITERATIONS)]
    pub max_iterations: u64,
    #[arg(long, global = true, default_value_t = rankprobe::lp::DEFAULT_MAX_NODES)]
    pub max_nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Diagnose {
    Slack,
    MinCount,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, join, repair, derive and normalize raw tables.
    Prepare,
    /// Rankings under both formulas with uniform and chosen weights.
    Rank,
    /// Rank statistics over uniformly random weight vectors.
    Montecarlo,
    /// Weights placing a row first, or preserving a top-k prefix.
    Feasible {
        /// Enforce the first K rows of the base ranking instead of top-1.
        #[arg(long)]
        k: Option<usize>,
        /// Largest K whose prefix is enforceable.
        #[arg(long, conflicts_with = "k")]
        max_k: bool,
        /// On infeasibility, find the orderings that must be given up.
        #[arg(long, value_enum)]
        diagnose: Option<Diagnose>,
    },
    /// Weights closest to uniform that keep the top-k prefix.
    Appealing {
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Best attainable rank per row.
    Bestrank,
    /// Weight-free consensus rankings and footrule distances.
    Kemeny {
        /// External rankings, one list per column; replaces per-attribute ranks.
        #[arg(long)]
        rankings: Option<PathBuf>,
        #[arg(long, default_value = "kemeny-ilp")]
        method: String,
        /// Rows of the base ranking to aggregate over.
        #[arg(long, default_value_t = 20)]
        top: usize,
    },
    /// Rank gains from maximizing one attribute.
    Improve,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let Some(e) = err.chain().find_map(|c| c.downcast_ref::<Error>()) else {
        return 1;
    };
    match e {
        Error::Config(_) | Error::UnknownStrategy { .. } | Error::TooLarge(_) => 2,
        Error::RowLength { .. }
        | Error::DuplicateKey(_)
        | Error::Unparseable { .. }
        | Error::UnknownColumn(_)
        | Error::ColumnCollision(_)
        | Error::DegenerateColumn(_)
        | Error::Expression { .. }
        | Error::Schema(_)
        | Error::Dimension { .. }
        | Error::InvalidWeights(_)
        | Error::InvalidMatrix(_)
        | Error::ItemMismatch(_)
        | Error::OutOfRange { .. }
        | Error::Csv(_)
        | Error::Toml(_) => 3,
        Error::Budget(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
