use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "degen",
    version,
    about = "Large induced d-degenerate subgraphs: orderings, partitions, exact alpha_d, bounds and extremal search",
    after_help = "Exit codes: 0 ok, 1 usage, 2 input parse error, 3 size limit, 4 counterexample found, 5 internal verification failure."
)]
pub struct Cli {
    /// Worker threads for scan and evolve [default: available cores].
    #[arg(long, global = true, env = "DEGEN_THREADS")]
    pub threads: Option<usize>,
    /// Add wall time to the manifest; output is then no longer byte-reproducible.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degeneracy and smallest-last ordering of each graph6 line.
    Degeneracy(InputArgs),
    /// Blue/red partition with verified degeneracy certificates.
    Partition(PartitionArgs),
    /// Exact alpha_d: the order of a largest induced d-degenerate subgraph.
    Alpha(AlphaArgs),
    /// Evaluate every applicable bound for the given parameters or graph.
    Bounds(BoundsArgs),
    /// Smallest alpha_d/n among graphs of degeneracy exactly k in a corpus.
    Scan(ScanArgs),
    /// Genetic search for graphs of degeneracy k with small alpha_d/n.
    Evolve(EvolveArgs),
    /// Print every labelled graph on min-n..=max-n vertices as graph6.
    Corpus(CorpusArgs),
    /// Print the bundled named graphs as graph6.
    Fixtures(FixturesArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct InputArgs {
    /// graph6 file, one graph per line; standard input when omitted or "-".
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct PartitionArgs {
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Brute,
}

#[derive(Args, Debug, Serialize)]
pub struct AlphaArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Claimed genus.
    #[arg(long)]
    pub g: Option<usize>,
    /// The k of the minimum-degree lemma (minimum degree at least k + 6).
    #[arg(long, default_value_t = 1)]
    pub lemma2_k: usize,
    /// Check alpha_1 >= n - m/k for a graph of girth at least k.
    #[arg(long)]
    pub girth_k: Option<usize>,
    /// Graph given inline as graph6.
    #[arg(long, conflicts_with = "input")]
    pub graph6: Option<String>,
    /// File holding one graph6 line ("-" for standard input).
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
    /// Abort with exit code 2 on the first malformed line.
    #[arg(long)]
    pub strict: bool,
    /// Scan the internal corpus of all labelled graphs on 1..=N vertices instead of input.
    #[arg(long, value_name = "N", conflicts_with = "input")]
    pub bundled: Option<usize>,
    #[arg(long, default_value_t = 4096, hide = true)]
    #[serde(skip)]
    pub batch_size: usize,
    /// graph6 corpus; standard input when omitted or "-".
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct EvolveArgs {
    /// key=value file; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub population_size: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    #[arg(long)]
    pub no_crossover: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_vertices: Option<usize>,
    #[arg(long)]
    pub elitism_count: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct CorpusArgs {
    #[arg(long)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1)]
    pub min_n: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FixturesArgs {
    /// Print only this fixture.
    pub name: Option<String>,
}
