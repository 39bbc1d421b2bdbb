use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ddtree_core::bounds::DEFAULT_SHAPE_CAP;
use ddtree_core::estimator::Mode;

#[derive(Debug, Parser)]
#[command(name = "ddtree", version, about = "Complexity bounds and tree-size estimates for open-cards trick-taking play")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form state-space and tree-size bounds.
    Bounds(BoundsArgs),
    /// Frank lower bound of a deal, or its expectation over random deals.
    Frank(FrankArgs),
    /// Mean follower branching per trick from random playouts.
    Profile(RunArgs),
    /// Knuth tree-size estimate from random playouts.
    Estimate(RunArgs),
    /// Exhaustive enumeration on tiny parametrizations.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Compare the mean Knuth estimate of one deal with its exact leaf count.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exact number of complete plays of one deal.
    Leaves(OracleArgs),
    /// Reachable positions per deal over the whole deal family.
    States(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Bridge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModeArg {
    Nt,
    Trump,
    #[default]
    Both,
}

impl ModeArg {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Nt => vec![Mode::NoTrump],
            ModeArg::Trump => vec![Mode::Trump],
            ModeArg::Both => vec![Mode::NoTrump, Mode::Trump],
        }
    }
}

/// Game family. Unset fields come from the preset (bridge by default).
#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    #[arg(long, value_enum, default_value = "bridge")]
    pub preset: Preset,
    /// Number of hands R.
    #[arg(long)]
    pub hands: Option<usize>,
    /// Cards per hand K.
    #[arg(long)]
    pub cards: Option<usize>,
    /// Number of suits.
    #[arg(long)]
    pub suits: Option<usize>,
    /// Ranks per suit.
    #[arg(long)]
    pub ranks: Option<usize>,
    /// Trump suit index.
    #[arg(long)]
    pub trump: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct FrankArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Deal file; without it the expectation over random deals is reported.
    #[arg(long)]
    pub deal: Option<PathBuf>,
    /// Also estimate the expectation from this many random deals.
    #[arg(long)]
    pub games: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Cap on shapes visited by the exact expectation.
    #[arg(long, default_value_t = DEFAULT_SHAPE_CAP)]
    pub max_shapes: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1_000_000)]
    pub games: u64,
    #[arg(long, default_value_t = 1)]
    pub playouts_per_deal: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Hand leading the first trick.
    #[arg(long, default_value_t = 0)]
    pub leader: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct GuardArgs {
    #[arg(long, env = "DDTREE_MAX_LEAVES", default_value_t = 100_000_000)]
    pub max_leaves: u64,
    #[arg(long, env = "DDTREE_MAX_STATES", default_value_t = 10_000_000)]
    pub max_states: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub guard: GuardArgs,
    /// Deal file (leaves only); otherwise a random deal from --seed.
    #[arg(long)]
    pub deal: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub leader: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub guard: GuardArgs,
    #[arg(long)]
    pub deal: Option<PathBuf>,
    /// Number of playouts.
    #[arg(long, default_value_t = 100_000)]
    pub games: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub leader: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}
