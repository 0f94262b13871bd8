//! `permcode`: permutation codes under the Cayley and Kendall metrics.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permcode_core::MetricKind;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "permcode", version, about = "Permutation codes under the Cayley and Kendall metrics")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "PERMCODE_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Distance-evaluation budget for exact censuses and exhaustive verification.
    #[arg(long, global = true)]
    pub work_budget: Option<u128>,
    /// Seed for randomized commands (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Cayley,
    Kendall,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Cayley => MetricKind::Cayley,
            MetricArg::Kendall => MetricKind::Kendall,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Greedy,
    Random,
    TriangleAware,
    Parity,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distance between two permutations.
    Dist {
        #[arg(long, value_enum)]
        metric: MetricArg,
        /// Cross-check against breadth-first search (n <= 8).
        #[arg(long)]
        oracle: bool,
        p: String,
        q: String,
    },
    /// Ball size, optionally listing its members.
    Ball {
        #[arg(long, value_enum)]
        metric: MetricArg,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'd', long = "radius")]
        radius: u32,
        /// Center for --list (default identity).
        #[arg(long)]
        center: Option<String>,
        /// Print every permutation in the ball.
        #[arg(long)]
        list: bool,
    },
    /// GV and sphere-packing bounds with known exact values.
    Bounds {
        #[arg(long, value_enum)]
        metric: MetricArg,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        d_min: u32,
        #[arg(long)]
        d_max: u32,
    },
    /// Auxiliary-graph statistics and independence bounds.
    GraphStats {
        #[arg(long, value_enum)]
        metric: MetricArg,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'd')]
        d: u32,
        /// Exact triangle census (default unless --samples is given).
        #[arg(long, conflicts_with = "samples")]
        exact: bool,
        /// Monte Carlo triangle estimate from this many vertex samples.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Build a code and write it to a file.
    Construct {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = MetricArg::Kendall)]
        metric: MetricArg,
        #[arg(short = 'n')]
        n: usize,
        /// Minimum distance (2 for parity).
        #[arg(short = 'D')]
        min_distance: Option<u32>,
        #[arg(long, default_value_t = 1)]
        restarts: u32,
        #[arg(long, default_value_t = permcode_core::codes::DEFAULT_PASSES)]
        passes: u32,
        #[arg(short = 'o', long = "output")]
        output: std::path::PathBuf,
    },
    /// Check the minimum distance of a code file.
    Verify {
        file: std::path::PathBuf,
        /// Check this many random pairs instead of all pairs.
        #[arg(long)]
        sampled: Option<u64>,
    },
    /// Lexicographic rank of a permutation.
    Rank { perm: String },
    /// Permutation of a given lexicographic rank.
    Unrank {
        #[arg(short = 'n')]
        n: usize,
        rank: u64,
    },
    /// Oracle-equivalence and identity checks.
    Selftest {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build_global()
    {
        eprintln!("error kind=threads message={:?}", e.to_string());
        return ExitCode::from(1);
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.output.render(cli.global.format));
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(line) => {
                    eprintln!("{line}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error kind={} message={:?}", e.kind(), e.to_string());
            ExitCode::from(1)
        }
    }
}
