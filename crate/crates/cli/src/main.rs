mod commands;
mod input;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use input::BadInput;

/// Exact Burnside, Mackey and dimension-0 squares K-theory computations.
#[derive(Parser, Debug)]
#[command(name = "mackey-sk", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Truncation bound for dimension-0 categories (default 3|G|).
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Group: a fixture name (C2, S3, D4, ...) or a group JSON file.
    #[arg(short = 'g', long = "group", global = true)]
    pub group: Option<String>,
    /// Input document.
    #[arg(short = 'i', long = "input", global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group structure.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Table of marks.
    Marks,
    /// Burnside ring arithmetic.
    #[command(subcommand)]
    Burnside(BurnsideCmd),
    /// Spans of G-sets.
    #[command(subcommand)]
    Span(SpanCmd),
    /// Mackey functors.
    #[command(subcommand)]
    Mackey(MackeyCmd),
    /// Categories with squares.
    #[command(subcommand)]
    Squares(SquaresCmd),
    /// Dimension-0 SK categories over G-sets.
    #[command(subcommand)]
    Sk0(Sk0Cmd),
    /// Equivariant Euler characteristics.
    #[command(subcommand)]
    Euler(EulerCmd),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Order, name and lattice sizes.
    Info,
    /// Conjugacy classes of subgroups.
    Subgroups,
}

#[derive(Subcommand, Debug)]
pub enum BurnsideCmd {
    /// Product of two elements given in the orbit basis.
    Mul {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        b: Vec<i64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpanCmd {
    /// Composes `first` then `second` from the input document.
    Compose,
    /// Strict associativity on random composable triples.
    AssocTest {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_apex: usize,
        #[arg(long, default_value_t = 6)]
        max_object: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MackeyCmd {
    /// Checks the Mackey functor axioms.
    Validate,
    /// The Burnside Mackey functor of a group.
    Burnside,
    /// Compares two Mackey functors on the same group entry by entry.
    Compare {
        #[arg(long)]
        other: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct PresentationArgs {
    /// Read a Waldhausen category and convert it.
    #[arg(long)]
    pub waldhausen: bool,
}

#[derive(Subcommand, Debug)]
pub enum SquaresCmd {
    /// Checks the axioms of a category with squares.
    Check(PresentationArgs),
    /// K0 with class coordinates.
    K0 {
        #[command(flatten)]
        p: PresentationArgs,
        /// Skip the axiom check.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Args, Debug)]
pub struct SubgroupArgs {
    /// Subgroup class index (its representative is used).
    #[arg(long)]
    pub class: Option<usize>,
    /// Subgroup by element indices.
    #[arg(long, value_delimiter = ',')]
    pub subgroup: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug)]
pub enum Sk0Cmd {
    /// Truncated category over a base G-set (default a point, or G/H).
    Build {
        #[command(flatten)]
        sub: SubgroupArgs,
        /// Base G-set JSON.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Include the full squares presentation.
        #[arg(long)]
        presentation: bool,
    },
    /// K0 Mackey functor and its comparison with the Burnside one.
    Mackey,
    /// Fibers and induction between objects over G/H and H-sets.
    PhiPsi {
        #[command(flatten)]
        sub: SubgroupArgs,
    },
    /// Beck-Chevalley maps on pullbacks of orbit maps.
    Beck,
}

#[derive(Subcommand, Debug)]
pub enum EulerCmd {
    /// Euler characteristic in the Burnside ring, with its marks.
    Chi,
    /// Restriction of a complex to a subgroup.
    Restrict {
        #[command(flatten)]
        sub: SubgroupArgs,
    },
    /// Euler characteristics of fixed subcomplexes.
    Fixed {
        #[command(flatten)]
        sub: SubgroupArgs,
    },
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<BadInput>().is_some() {
        return 2;
    }
    match e.downcast_ref::<mackey_sk::Error>() {
        Some(
            mackey_sk::Error::InvalidGroup(_)
            | mackey_sk::Error::InvalidSubgroup(_)
            | mackey_sk::Error::InvalidGSet(_)
            | mackey_sk::Error::InvalidMap(_)
            | mackey_sk::Error::Structural(_)
            | mackey_sk::Error::Incomplete(_)
            | mackey_sk::Error::Precondition(_),
        ) => 2,
        _ => 1,
    }
}

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = commands::name(&cli.command);
    let result = input::Caps::from_env().and_then(|caps| commands::run(&cli, &caps));
    let (body, code) = match result {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => format!("{:#}\n", out.json()),
                Format::Table => out.table(),
            };
            (body, if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            let code = exit_code(&e);
            if code == 2 {
                eprintln!("error: {e:#}");
                eprintln!("run `mackey-sk --help` for usage");
                return ExitCode::from(2);
            }
            let body = match cli.format {
                Format::Json => {
                    let v = json!({"schema": output::SCHEMA, "command": name, "status": "error", "error": format!("{e:#}")});
                    format!("{v:#}\n")
                }
                Format::Table => format!("error: {e:#}\n"),
            };
            (body, code)
        }
    };
    if let Err(e) = emit(&cli, &body) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
