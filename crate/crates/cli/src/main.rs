//! `takumlab`: number-format inspection, conversion-error benchmarks and ISA
//! tooling from one binary.

mod commands;
mod config;
mod inspect;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use takumlab::Error;

#[derive(Parser)]
#[command(name = "takumlab", version, about = "Takum, posit and minifloat laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a bit pattern, or encode a decimal value, and show its fields.
    ///
    /// Examples: `inspect takum 8 0x40`, `inspect e4m3 0x7F`, `inspect posit16 0.1`.
    Inspect {
        /// FORMAT [WIDTH] BITS-OR-VALUE. Bits are written 0x.. or 0b..
        #[arg(num_args = 2..=3, required = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Dynamic range of takum, posit and IEEE-style formats per width.
    Range {
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        widths: Vec<u32>,
        /// Write the range CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the fixed-format points (bfloat16, E4M3, ...) as CSV.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Relative 2-norm conversion error over a matrix set.
    Bench(BenchArgs),
    /// Download the matrix selection into the cache and write its manifest.
    Fetch {
        #[command(flatten)]
        source: SourceArgs,
        /// Rebuild the cached index from the collection's statistics file.
        #[arg(long)]
        refresh_index: bool,
        /// Manifest destination; defaults to `manifest.csv` in the cache.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// AVX10.2 mnemonic classification and rewriting.
    Isa {
        #[command(subcommand)]
        action: IsaAction,
        /// Mnemonic list to use instead of the shipped one.
        #[arg(long, global = true, requires = "groups")]
        list: Option<PathBuf>,
        /// Group table to use instead of the shipped one.
        #[arg(long, global = true, requires = "list")]
        groups: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SourceArgs {
    #[arg(long, env = takumlab::matrix::CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Never touch the network; missing matrices are an error.
    #[arg(long)]
    offline: bool,
    #[arg(long, default_value_t = 50_000)]
    max_nnz: u64,
    /// Worker threads for downloads and conversions.
    #[arg(long)]
    jobs: Option<usize>,
    /// Collection mirror serving `<group>/<name>.tar.gz`.
    #[arg(long, default_value = takumlab::matrix::DEFAULT_BASE_URL)]
    base_url: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated format names, e.g. takum8,posit16,e4m3.
    #[arg(long, value_delimiter = ',')]
    formats: Vec<String>,
    /// Keep only formats of these widths; also the CDF chart panels.
    #[arg(long, value_delimiter = ',')]
    widths: Vec<u32>,
    /// Run over the cached collection instead of the built-in desk set.
    #[arg(long)]
    collection: bool,
    #[command(flatten)]
    source: SourceArgs,
    /// Stability threshold on the relative error.
    #[arg(long, default_value_t = 1.0)]
    threshold: f64,
    /// Directory for errors.csv, cdf.csv and stability.csv; stdout gets the
    /// errors CSV otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum IsaAction {
    /// Print `mnemonic,group,category` for each mnemonic, or for the whole list.
    Classify {
        mnemonics: Vec<String>,
        #[arg(long, conflicts_with = "mnemonics")]
        all: bool,
    },
    /// Map legacy mnemonics to their takum-based replacements.
    Rewrite {
        #[arg(required = true)]
        mnemonics: Vec<String>,
        /// Include every same-shaped member of the group's proposed language.
        #[arg(long)]
        generalised: bool,
    },
    /// List the legacy classification, or the proposed set.
    Enumerate {
        #[arg(long)]
        proposed: bool,
    },
    /// Legacy-to-proposed difference, as CSV or a readable summary.
    Diff {
        #[arg(long)]
        text: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instruction counts per category.
    Stats,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) => 1,
        Error::Network { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("takumlab: {e}");
            if let Error::NotCached(_) = e {
                eprintln!("run `takumlab fetch` without --offline to download them");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
