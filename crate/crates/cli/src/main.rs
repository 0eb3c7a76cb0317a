mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_GATE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_PARSE: u8 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "arclemma",
    version,
    about = "Crossing bounds, certificates and extremal search for k-systems of arcs",
    after_help = "Exit codes: 0 success, 1 validation failure, 2 hypothesis gate, 64 usage, 65 parse.\n\
                  ARCLEMMA_THREADS caps the worker count (default 1); output does not depend on it."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate every bound applicable to the given parameters.
    #[command(after_help = "CSV columns: bound_name,value,applicable,branch")]
    Bounds {
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        m: Option<u64>,
        /// Puncture count.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        g: Option<u64>,
        /// Euler characteristic; overrides the one computed from g and n.
        #[arg(long, allow_negative_numbers = true)]
        chi: Option<i64>,
        #[command(flatten)]
        output: Output,
    },
    /// Check that an arcsys file is a k-system.
    #[command(after_help = "CSV columns: kind,first,second,count,k")]
    Validate {
        file: std::path::PathBuf,
        /// Override the declared k.
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Minimal intersection numbers of every arc pair of an arcsys file.
    #[command(after_help = "CSV columns: first,second,min,realized")]
    Intersect {
        file: std::path::PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Search for a large k-system on n punctures; --out receives the witness.
    #[command(after_help = "CSV columns: n,k,mode,size,przytycki_bound,ratio")]
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest universe the exact search accepts.
        #[arg(long, default_value_t = arclemma::monotone::DEFAULT_EXACT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Witness file in arcsys format.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Run the recursive decomposition on an arcsys file and emit its trace.
    #[command(
        after_help = "CSV columns: level,id,punctures,edges,crossings_min,crossings_realized,status,erased,separator_size,contract_ok\n\
                            Exit 0 when every structural check holds, 1 when one fails, 2 when m <= 4(n+1)."
    )]
    Certify {
        file: std::path::PathBuf,
        /// Last level to process.
        #[arg(long)]
        stop_level: Option<usize>,
        /// Replace the crossing threshold t.
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Planarize a drawn system: a cmap file with routes, or a generated one.
    #[command(
        after_help = "CSV columns: genus_before,genus_after,removed_edges,hit_arcs,bound_value,within_bound,dv_bound"
    )]
    Planarize {
        file: Option<std::path::PathBuf>,
        /// Genus of the generated system when no file is given.
        #[arg(long)]
        g: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Crossing counts of greedy systems against the sphere bound.
    #[command(after_help = "CSV columns: n,m,crossings,bound,applicable,ratio\n\
                            Ranges: a..b (exclusive), a..=b, or a single value.")]
    Scaling {
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Deterministic summary of a seeded batch of experiments.
    #[command(after_help = "CSV columns: k,n,m,crossings,realized,bound,applicable,valid")]
    Report {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Greedy,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
