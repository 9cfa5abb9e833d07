//! `dirichlet`: command-line front end for `dirichlet-core`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "dirichlet", version, about = "Dirichlet L-functions, zeros, series and claim audits")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format: json, md or csv [default: md]
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// `key = value` settings file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for zero scans and audits [default: 1]
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for the zero cache
    #[arg(long, global = true, env = "DIRICHLET_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Do not read or write the zero cache
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Euler-Maclaurin shift M [default: 30]
    #[arg(long, global = true)]
    pub shift: Option<usize>,
    /// Highest Bernoulli index in the Euler-Maclaurin tail [default: 20]
    #[arg(long, global = true)]
    pub bernoulli: Option<usize>,
    /// Default length of direct partial sums [default: 1000000]
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Target tolerance of L-function evaluation [default: 1e-12]
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Grid minima of |L| below this are refined [default: 0.1]
    #[arg(long, global = true)]
    pub candidate_threshold: Option<f64>,
    /// Refined minima are zeros when |L| is below this [default: 1e-6]
    #[arg(long, global = true)]
    pub accept_residual: Option<f64>,
    /// Golden-section bracket width at which refinement stops [default: 1e-10]
    #[arg(long, global = true)]
    pub width_tolerance: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct CharSel {
    /// Modulus
    #[arg(long, default_value_t = 1)]
    pub q: u64,
    /// Character index in the lexicographic enumeration
    #[arg(long, default_value_t = 0)]
    pub char_index: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate and classify the characters modulo q
    Chars {
        #[arg(long)]
        q: u64,
        /// Also list chi(n) for 0 <= n < q
        #[arg(long)]
        values: bool,
    },
    /// Gauss sums and the identity tau(chi) tau(conj chi) = chi(-1) q
    Gauss {
        #[arg(long)]
        q: u64,
        /// Restrict to one character
        #[arg(long)]
        char_index: Option<u64>,
    },
    /// Evaluate L(s, chi)
    Lvalue {
        #[command(flatten)]
        chi: CharSel,
        /// Point s as "re,im"
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Also report the direct partial sum of this many terms
        #[arg(long)]
        partial: Option<usize>,
        /// Also report the functional-equation residual
        #[arg(long)]
        functional_equation: bool,
    },
    /// Zeros on the critical line
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Partial sums of cos(4t ln n) and sin(4t ln n)
    Series {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Largest N
        #[arg(long, default_value_t = 100_000)]
        n_max: u64,
        /// Checkpoint layout: decades, or geometric from past the transient
        #[arg(long, value_enum, default_value = "decades")]
        checkpoints: CheckpointLayout,
    },
    /// Formal bilinear geometry: worked triangles and vector forms of L
    Geom {
        /// Worked triangle example (1, 2 or 3)
        #[arg(long, conflicts_with = "n")]
        example: Option<u32>,
        #[command(flatten)]
        chi: CharSel,
        /// Point s as "re,im" for the vector form
        #[arg(long, allow_hyphen_values = true, default_value = "2,0")]
        s: String,
        /// Truncation length of the vector form
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "chi-in-u")]
        arrangement: ArrangementArg,
        /// Also report the fourth-power decomposition
        #[arg(long)]
        quartic: bool,
    },
    /// Pappus centroid identity on laminas with complex profiles
    Pappus {
        /// Number of random cubic laminas added to the catalog
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 20240101)]
        seed: u64,
        /// Cylinder-volume sum and implied eta for L(s, chi) truncated to N
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        chi: CharSel,
        #[arg(long, allow_hyphen_values = true, default_value = "2,0")]
        s: String,
    },
    /// Run the claim audit
    Audit {
        /// Run every claim
        #[arg(long, conflicts_with = "claims")]
        all: bool,
        /// Comma-separated claim ids, e.g. C1,C5
        #[arg(long)]
        claims: Option<String>,
        /// Zero all clock-derived fields for byte-reproducible output
        #[arg(long)]
        fixed_clock: bool,
        #[arg(long, default_value_t = 20240101)]
        seed: u64,
        /// Grid step of the zero scans
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZerosCommand {
    /// Scan [t_lo, t_hi] and refine every zero found
    Scan {
        #[command(flatten)]
        chi: CharSel,
        /// "t_lo,t_hi"
        #[arg(long, allow_hyphen_values = true)]
        t_range: String,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Confirm each zeta zero by a sign change of Hardy's Z (q = 1 only)
        #[arg(long)]
        confirm: bool,
    },
    /// Refine a single bracketed zero
    Refine {
        #[command(flatten)]
        chi: CharSel,
        /// "lo,hi"
        #[arg(long, allow_hyphen_values = true)]
        bracket: String,
    },
    /// |L(sigma + i t, chi)| across the critical strip
    Sigma {
        #[command(flatten)]
        chi: CharSel,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// "lo,hi,count"
        #[arg(long, default_value = "0.01,0.99,99")]
        sigma_grid: String,
    },
    /// Distance of (t2 - t1) ln n / 2 pi from an integer for consecutive zeros
    Spacing {
        #[command(flatten)]
        chi: CharSel,
        #[arg(long, allow_hyphen_values = true)]
        t_range: String,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
    },
    /// List cached zeros
    Cached {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        char_index: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum CheckpointLayout {
    Decades,
    Transient,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ArrangementArg {
    ChiInU,
    ChiInV,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let ctx = match commands::Context::resolve(&cli.global) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli.command, &ctx).and_then(|text| ctx.emit(&text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<commands::Usage>().is_some();
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
