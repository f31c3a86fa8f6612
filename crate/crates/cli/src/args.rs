use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use patstat_core::extremal::{DEFAULT_BUDGET, PERMUTATION_BUDGET};
use patstat_core::{LayeredShape, Permutation, Restriction, Word, WordPattern};

#[derive(Parser, Debug)]
#[command(name = "patstat", version, about = "Pattern-occurrence statistics for permutations and words")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads (default: all cores).
    #[arg(long, env = "PATSTAT_THREADS", global = true)]
    pub threads: Option<usize>,

    /// Seed for randomized steps (optimizer starts, sampling).
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Write output to FILE instead of standard output.
    #[arg(long, value_name = "FILE", global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count occurrences of a pattern set in a word.
    Count(CountArgs),
    /// Exhaustive μ and δ at one length.
    Delta(DeltaArgs),
    /// Exhaustive δ over a range of lengths.
    Profile(ProfileArgs),
    /// Monte Carlo mean and variance of occurrences in random permutations.
    Sample(SampleArgs),
    /// Packing densities of layered pattern sets.
    #[command(subcommand)]
    Layered(LayeredCommand),
    /// Exact occurrence moments.
    #[command(subcommand)]
    Moments(MomentsCommand),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

fn parse_patterns(s: &str) -> Result<Vec<WordPattern>, String> {
    s.parse::<patstat_core::PatternSet>()
        .map(|set| set.patterns().to_vec())
        .map_err(|e| e.to_string())
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e: patstat_core::Error| e.to_string())
}

fn parse_perm(s: &str) -> Result<Permutation, String> {
    s.parse().map_err(|e: patstat_core::Error| e.to_string())
}

fn parse_pattern(s: &str) -> Result<WordPattern, String> {
    s.parse().map_err(|e: patstat_core::Error| e.to_string())
}

fn parse_shape(s: &str) -> Result<LayeredShape, String> {
    s.parse().map_err(|e: patstat_core::Error| e.to_string())
}

fn parse_restriction(s: &str) -> Result<Restriction, String> {
    s.parse().map_err(|e: patstat_core::Error| e.to_string())
}

/// `"2,3;2,4"`.
fn parse_pairs(s: &str) -> Result<Vec<(u64, u64)>, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let parts: Vec<&str> = p.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [a, b] => Ok((
                    a.parse().map_err(|_| format!("bad number {a:?}"))?,
                    b.parse().map_err(|_| format!("bad number {b:?}"))?,
                )),
                _ => Err(format!("expected a,b but got {p:?}")),
            }
        })
        .collect()
}

/// `"3..10"`, `"3-10"` or a single length.
fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected N or A..B, got {s:?}");
    let (a, b) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| format!("bad number {v:?}")))
        .collect()
}

#[derive(Args, Debug)]
pub struct SetArg {
    /// Pattern set, patterns separated by ';' or spaces (repeatable).
    #[arg(long = "set", required = true, value_parser = parse_patterns)]
    pub set: Vec<Vec<WordPattern>>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub set: SetArg,
    /// The ambient word, e.g. 413223 or 10,2,3.
    #[arg(long, value_parser = parse_word)]
    pub word: Word,
}

#[derive(Args, Debug)]
pub struct SpaceArgs {
    /// Alphabet size; omit together with --perms to search permutations.
    #[arg(long, required_unless_present = "perms", conflicts_with = "perms")]
    pub k: Option<u32>,
    /// Search S_n instead of [k]^n.
    #[arg(long)]
    pub perms: bool,
    /// Restrict the search space.
    #[arg(long, value_parser = parse_restriction, default_value = "none")]
    pub restrict: Restriction,
    /// Cap on states visited (default 10^8 for words, 10! for permutations).
    #[arg(long)]
    pub budget: Option<u128>,
}

impl SpaceArgs {
    pub fn budget(&self) -> u128 {
        self.budget.unwrap_or(if self.perms { PERMUTATION_BUDGET } else { DEFAULT_BUDGET })
    }
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub set: SetArg,
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Word length.
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub set: SetArg,
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Lengths, e.g. 3..10.
    #[arg(long, value_parser = parse_range)]
    pub n: (usize, usize),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_perm)]
    pub perm: Permutation,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum LayeredCommand {
    /// Optimize the layered objective over weight sequences with R parts.
    Density {
        /// Shapes separated by ';', e.g. "[2,3];[3,2]".
        #[arg(long)]
        shapes: String,
        #[arg(long)]
        parts: usize,
        #[arg(long, default_value_t = 32)]
        multistarts: usize,
    },
    /// S(m,n): closed form, attained value, optionally the optimizer.
    Smn {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        /// Also run the optimizer with this many parts.
        #[arg(long)]
        parts: Option<usize>,
    },
    /// Co-occurrence of [a,b] and [b,a].
    Covtable {
        /// Pairs a,b separated by ';' (default: the eight classic pairs).
        #[arg(long, value_parser = parse_pairs)]
        pairs: Option<std::vec::Vec<(u64, u64)>>,
    },
    /// Peel-off bound for a layered shape.
    Bound {
        #[arg(long, value_parser = parse_shape)]
        shape: LayeredShape,
        /// Density (or bound) of the shape without its first layer.
        #[arg(long, default_value_t = 1.0)]
        inner: f64,
    },
    /// Single-variable bound for unions of S(m_i, M - m_i).
    Mixed {
        #[arg(long)]
        total: u64,
        /// First layers, decreasing, e.g. 3,2.
        #[arg(long, value_parser = parse_u64_list)]
        first: std::vec::Vec<u64>,
    },
}

#[derive(Args, Debug, Default)]
pub struct LimitArg {
    /// Override the enumeration size limit.
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum MomentsCommand {
    /// Δ, c and √c for one permutation.
    Delta {
        #[arg(long, value_parser = parse_perm)]
        perm: Permutation,
    },
    /// Δ for every symmetry class of S_m.
    Table {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        limit: LimitArg,
    },
    /// Permutations of S_m minimizing Δ.
    Pistar {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        limit: LimitArg,
    },
    /// Covariance leading coefficient of two permutations.
    Cov {
        #[arg(long, value_parser = parse_perm)]
        p1: Permutation,
        #[arg(long, value_parser = parse_perm)]
        p2: Permutation,
    },
    /// Leading coefficient for word patterns.
    Word {
        #[arg(long, value_parser = parse_pattern)]
        p: WordPattern,
        /// Second pattern for a covariance (defaults to --p).
        #[arg(long, value_parser = parse_pattern)]
        p2: Option<WordPattern>,
    },
    /// Brute-force dual-embedding count.
    Oracle {
        #[arg(long, value_parser = parse_perm)]
        p1: Permutation,
        #[arg(long, value_parser = parse_perm)]
        p2: Permutation,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[command(flatten)]
        limit: LimitArg,
    },
    /// Classes of unordered pattern pairs with their covariance coefficients.
    Classes {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        limit: LimitArg,
    },
    /// Exact mean and second moment over S_n by enumeration.
    Second {
        #[arg(long, value_parser = parse_perm)]
        perm: Permutation,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        limit: LimitArg,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Include the m = 8, 9 least-delta searches.
    #[arg(long)]
    pub slow: bool,
}
