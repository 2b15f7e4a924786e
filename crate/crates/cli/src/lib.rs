//! `errata` command line: validation, statistics, agreement, detector
//! evaluation, fact-set derivation, the annotation server and export.

mod commands;
mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use errata_core::agreement::AgreementClass;
use errata_core::detect::{GoldMode, Orientation, Target};

pub use error::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "errata", version, about = "Error annotation toolkit for text simplification")]
pub struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Report collection invariant violations as warnings instead of failing.
    #[arg(long, global = true)]
    pub lenient: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable tables.
    Table,
    /// JSON.
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a collection file against the schema and label invariants.
    Validate { collection: PathBuf },
    /// Per-label distribution and annotator self-consistency.
    Stats { collection: PathBuf },
    /// Inter-annotator agreement over the shared item subset.
    Agreement {
        collection: PathBuf,
        /// Classes to report (default: all five).
        #[arg(long = "class")]
        classes: Vec<AgreementClass>,
    },
    /// Score detectors against the collection's gold labels.
    Eval(EvalArgs),
    /// Derive information and simplification error sets for a fact universe.
    Facts { universe: PathBuf },
    /// Run the annotation server.
    Serve(ServeArgs),
    /// Fold the service event log into a collection file.
    Export {
        #[arg(long)]
        config: PathBuf,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the error taxonomy.
    Taxonomy,
    /// Write a synthetic fixture.
    #[command(subcommand)]
    Fixture(FixtureCommand),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub collection: PathBuf,
    /// Score file (`item_id,score`); repeat for several detectors.
    #[arg(long = "scores", required = true)]
    pub scores: Vec<PathBuf>,
    /// One orientation for all score files, or one per file.
    #[arg(long = "orientation", required = true)]
    pub orientations: Vec<Orientation>,
    /// Detector names, one per score file (default: file stem).
    #[arg(long = "name")]
    pub names: Vec<String>,
    /// Targets to evaluate (default: all). `any_error`, a category or a code.
    #[arg(long = "target")]
    pub targets: Vec<Target>,
    #[arg(long, default_value_t = GoldMode::Union)]
    pub gold: GoldMode,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Overrides the configured port; 0 picks a free one.
    #[arg(long)]
    pub port: Option<u16>,
    /// Overrides the configured event log path.
    #[arg(long)]
    pub data_path: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FixtureCommand {
    /// 2,659 records with the reference per-label counts.
    Reference {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// 104 shared items rated by five annotators, with probes.
    Agreement {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Scores drawn around a collection's any-error gold labels.
    Scores {
        collection: PathBuf,
        #[arg(long, default_value = "synthetic")]
        name: String,
        #[arg(long, default_value_t = Orientation::HigherMeansError)]
        orientation: Orientation,
        /// Shift added to the scores of erroneous items.
        #[arg(long, default_value_t = 0.5)]
        signal: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                exit::USAGE
            } else {
                let _ = write!(out, "{rendered}");
                exit::OK
            };
        }
    };
    match commands::dispatch(&cli, out, err) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status()
        }
    }
}
