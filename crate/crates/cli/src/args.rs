use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Exact computations on tropical determinantal varieties.
#[derive(Debug, Parser)]
#[command(name = "tropdet", version, about)]
pub struct Cli {
    /// Worker threads for the parallel scans (reports do not depend on it).
    #[arg(long, global = true, value_name = "K")]
    pub jobs: Option<usize>,

    /// Search limit override, e.g. `max_det_size=9`; repeatable.
    #[arg(long = "budget", global = true, value_name = "KEY=VALUE")]
    pub budget: Vec<String>,

    /// Directory for DOT and JSON artifacts; nothing is written without it.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Tropical, Kapranov and Barvinok ranks of a matrix.
    Rank { matrix: PathBuf },

    /// Positive (or signed) prevariety membership.
    Positivity {
        matrix: PathBuf,
        #[arg(long)]
        rank: usize,
        /// Sign pattern JSON; omitted means the positive orthant.
        #[arg(long)]
        signs: Option<PathBuf>,
    },

    /// Cartoon of a Birkhoff edge and its two positivity tests.
    Cartoon {
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "id")]
        pi: String,
        #[arg(short = 'n')]
        n: usize,
    },

    /// Green/red coloring of the Birkhoff graph by a sign pattern.
    Orthants(OrthantArgs),

    /// Bicolored phylogenetic tree of a matrix of tropical rank at most 2.
    Tree { matrix: PathBuf },

    /// Label graph of a matrix in the rank-r prevariety.
    Label {
        matrix: PathBuf,
        #[arg(long)]
        rank: usize,
    },

    /// Tropical Plücker vectors: four-point check, projection, trees.
    #[command(subcommand)]
    Plucker(PluckerCommand),

    /// Marked faces, starships and tree arrangements on a tropical plane.
    Arrangement(ArrangementArgs),

    /// Reruns the bundled worked examples and checks their verdicts.
    VerifyPaper {
        /// Fixture directory holding `manifest.json`.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct OrthantSource {
    /// Sign pattern JSON.
    #[arg(long)]
    pub signs: Option<PathBuf>,
    /// Scan all 2^(n*n) patterns.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrthantArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: OrthantSource,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "action")]
pub enum PluckerCommand {
    /// Four-point condition and the tree it encodes.
    Check { plucker: PathBuf },
    /// Red-green coordinates as a matrix, with the bicolored reading.
    Project {
        plucker: PathBuf,
        /// Red leaves, 1-based and comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        red: Vec<usize>,
    },
    /// Plücker vector of a bicolored tree (red leaves first, zero leaf lengths).
    FromTree { tree: PathBuf },
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct ArrangementSource {
    /// Plane description JSON.
    #[arg(long)]
    pub plane: Option<PathBuf>,
    /// Column sets `J_i` as a JSON list of 1-based lists.
    #[arg(long)]
    pub jmap: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ArrangementArgs {
    pub matrix: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: ArrangementSource,
}
