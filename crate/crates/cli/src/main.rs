//! `selfsim`: command-line front end.
//!
//! Exit codes: 0 the property holds or the computation finished, 1 the
//! property fails, 2 inconclusive within the bounds, 3 bad input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Failure, Report};

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Self-similar groupoid actions on finite directed graphs")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct SpecArg {
    /// Automaton spec file.
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a spec file.
    Validate(SpecArg),
    /// Act by an element on a finite or right-infinite path.
    Act {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        elem: String,
        #[arg(long)]
        path: String,
    },
    /// Restriction of an element to a finite path.
    Restrict {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        elem: String,
        #[arg(long)]
        path: String,
    },
    /// Decide whether two elements are equal.
    Eq {
        #[command(flatten)]
        spec: SpecArg,
        g: String,
        h: String,
    },
    /// Compute the nucleus.
    Nucleus {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum, default_value_t = NucleusFormat::Text)]
        format: NucleusFormat,
    },
    /// Least restriction depth taking k-fold nucleus products into the nucleus.
    Rk {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Decide a structural property.
    Check {
        property: Property,
        #[command(flatten)]
        spec: SpecArg,
        /// Word length searched by `recurrent`.
        #[arg(long, default_value_t = selfsim::dynamics::DEFAULT_RECURRENCE_DEPTH)]
        depth: usize,
        /// Highest level checked by `level-transitive`.
        #[arg(long, default_value_t = 6)]
        level: usize,
    },
    /// Asymptotic equivalence of two left- or bi-infinite paths.
    Ae {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
        y: String,
    },
    /// The asymptotic equivalence class of a left-infinite path.
    Class {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
    },
    /// Delete the rightmost edge of a left-infinite path.
    Shift {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
    },
    /// Equality of germs written `x ; m ; g ; n ; y`.
    GermEq {
        #[command(flatten)]
        spec: SpecArg,
        a: String,
        b: String,
    },
    /// Stable equivalence of bi-infinite paths.
    Stable {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
        y: String,
    },
    /// Unstable equivalence of bi-infinite paths.
    Unstable {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
        y: String,
    },
    /// Schreier graph at a level.
    Schreier {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value_t = GraphFormat::Text)]
        format: GraphFormat,
        /// Edge labels: generators and inverses only, or the full nucleus.
        #[arg(long, value_enum, default_value_t = LabelSet::Standard)]
        labels: LabelSet,
        /// Also print the projection onto the level below.
        #[arg(long)]
        project: bool,
    },
    /// Katsura action of a matrix pair, as a spec file plus K-groups.
    Katsura {
        #[arg(long = "A", value_name = "FILE|MATRIX")]
        a: String,
        #[arg(long = "B", value_name = "FILE|MATRIX")]
        b: String,
        /// Write the spec file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smith normal form of an integer matrix.
    Snf {
        #[arg(value_name = "FILE|MATRIX")]
        matrix: String,
    },
    /// Katsura K-groups of a matrix pair.
    Ktheory {
        #[arg(long = "A", value_name = "FILE|MATRIX")]
        a: String,
        #[arg(long = "B", value_name = "FILE|MATRIX")]
        b: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Property {
    Regular,
    Hausdorff,
    Recurrent,
    LevelTransitive,
    Contracting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NucleusFormat {
    Text,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Text,
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LabelSet {
    Standard,
    Letters,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let name = commands::name(&cli.command);
    let result = commands::run(&cli.command);
    emit(name, cli.json, result)
}

fn emit(name: &str, json: bool, result: Result<Report, Failure>) -> ExitCode {
    match result {
        Ok(report) => {
            if json {
                println!("{}", report.to_json(name));
            } else {
                print!("{}", report.text());
            }
            ExitCode::from(report.code())
        }
        Err(fail) => {
            if json {
                println!("{}", fail.to_json(name));
            } else {
                eprintln!("selfsim {name}: {fail}");
            }
            ExitCode::from(fail.code())
        }
    }
}
