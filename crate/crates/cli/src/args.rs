use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pmcsynth",
    version,
    about = "Parameter synthesis for parametric Markov chains"
)]
pub struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact reachability probability at one parameter valuation.
    Check(CheckArgs),
    /// Closed-form solution function by state elimination.
    Solfun(SolfunArgs),
    /// Decide a region by parameter lifting.
    Verify(VerifyArgs),
    /// Split a region into accepting and rejecting boxes.
    Partition(PartitionArgs),
    /// Search for a satisfying valuation.
    Feasible(FeasibleArgs),
    /// Emit the feasibility question as SMT-LIB (QF_NRA).
    Etr(EtrArgs),
    /// Translate a POMDP into its policy pMC.
    PomdpTranslate(TranslateArgs),
    /// Unfold a POMDP with a k-node finite-state controller.
    PomdpUnfold(UnfoldArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Parameter values, e.g. `x=1/2,y=1/2`.
    #[arg(long)]
    pub valuation: String,
    /// Reachability threshold, e.g. `reach >= 3/20`.
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrderArg {
    Mindeg,
    Minsize,
}

#[derive(Debug, Args)]
pub struct SolfunArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "mindeg")]
    pub order: OrderArg,
    /// Skip gcd cancellation between elimination steps.
    #[arg(long)]
    pub no_gcd: bool,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Region file, or inline text such as `x in [1/10, 4/5]; y in [2/5, 7/10]`.
    /// Defaults to [1/100, 99/100] in every parameter.
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    /// Lifted region checks allowed when the whole region is inconclusive.
    #[arg(long, default_value_t = pmc_synth::regionlift::DEFAULT_REFINE_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SplitArg {
    Widest,
    Disagree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    /// Required covered fraction, e.g. `0.95` or `19/20`.
    #[arg(long, default_value = "95/100")]
    pub eta: String,
    /// Maximal number of region checks.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, value_enum, default_value = "widest")]
    pub split: SplitArg,
    #[arg(long, default_value_t = 20)]
    pub max_depth: usize,
    /// Worker threads for region checks; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Output prefix; files get the format's extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats (repeatable). Defaults to csv, plus svg for two
    /// parameters.
    #[arg(long, value_enum)]
    pub format: Vec<FormatArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Sample,
    Pso,
    Scp,
}

#[derive(Debug, Args)]
pub struct FeasibleArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    #[arg(long, value_enum, default_value = "scp")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of samples for `--method sample`.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Swarm updates for `--method pso`.
    #[arg(long, default_value_t = 100)]
    pub iterations: usize,
    /// SCP restarts.
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// SCP penalty weight.
    #[arg(long)]
    pub tau: Option<String>,
    /// Restarts evaluated concurrently; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct EtrArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Closed parameter box; without it every parameter ranges over (0, 1).
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long)]
    pub spec: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Replace two-action groups by one parameter each.
    #[arg(long)]
    pub desimplex: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UnfoldArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Number of controller nodes.
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
