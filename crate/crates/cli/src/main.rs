//! `qra`: command-line front end for finite DInFL-algebras, DqRAs and
//! their frames.
//!
//! Exit codes: 0 ok, 1 a law fails, 2 structural or format error,
//! 3 budget exhausted (a checkpoint is printed on stdout).

mod commands;
mod load;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Output;
use qra::enumerate::Signature;
use qra::Error;

#[derive(Parser)]
#[command(
    name = "qra",
    version,
    about = "Finite DInFL-algebras, quasi relation algebras and their frames"
)]
struct Cli {
    /// worker threads for parallel searches
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// time budget for searches, in milliseconds
    #[arg(long, global = true, env = "QRA_BUDGET_MS")]
    budget_ms: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an algebra, frame, pointed frame, morphism, base or atom structure
    Check { object: String },
    /// Complex algebra of a frame
    Complex { frame: String },
    /// Dual frame of an algebra
    Dual { algebra: String },
    /// Check A ≅ (A₊)⁺ or W ≅ (W⁺)₊
    Roundtrip { object: String },
    /// Isomorphism between two algebras or two frames
    Iso {
        left: String,
        right: String,
        /// compare the reducts without ¬
        #[arg(long)]
        reduct: bool,
    },
    /// Validate a morphism file and its dual
    MorphismCheck { morphism: String },
    /// Enumerate frames over a poset up to isomorphism
    Enumerate {
        #[arg(long)]
        poset: String,
        #[arg(long, value_parser = commands::parse_signature)]
        signature: Signature,
        /// write each frame as JSON into this directory
        #[arg(long)]
        emit: Option<PathBuf>,
        /// continue from a checkpoint file
        #[arg(long)]
        resume: Option<String>,
    },
    /// Count algebras by size and poset
    Count {
        #[arg(long, default_value_t = 6)]
        max_size: usize,
    },
    /// Named algebras of small size with their annotations
    Catalog {
        #[arg(long, default_value_t = 6)]
        max_size: usize,
    },
    /// Filter frame of an algebra, or the round trip through it
    Priestley {
        algebra: String,
        #[arg(long)]
        roundtrip: bool,
    },
    /// Search for a finite representation
    Represent(RepresentArgs),
    /// Maximal proper quasi-relation-algebra subreducts of the 4-atom RAs
    Subreducts {
        #[arg(long, conflicts_with = "all")]
        index: Option<usize>,
        #[arg(long)]
        all: bool,
    },
}

#[derive(Args)]
struct RepresentArgs {
    algebra: String,
    /// largest base tried, in points
    #[arg(long, default_value_t = 3)]
    max_points: usize,
    /// only E = X²
    #[arg(long = "full-E")]
    full_e: bool,
    /// only α = id
    #[arg(long)]
    cyclic_only: bool,
    /// search even when a² ≤ 0 rules out finite bases
    #[arg(long)]
    ignore_filter: bool,
    /// largest Dq(E) built, in upsets
    #[arg(long)]
    cap: Option<usize>,
    /// continue from a checkpoint file
    #[arg(long)]
    resume: Option<String>,
}

fn run(cli: &Cli) -> qra::Result<Output> {
    let budget = cli.budget_ms;
    match &cli.cmd {
        Cmd::Check { object } => commands::check(object),
        Cmd::Complex { frame } => commands::complex(frame),
        Cmd::Dual { algebra } => commands::dual(algebra),
        Cmd::Roundtrip { object } => commands::roundtrip(object),
        Cmd::Iso {
            left,
            right,
            reduct,
        } => commands::iso(left, right, *reduct),
        Cmd::MorphismCheck { morphism } => commands::morphism_check(morphism),
        Cmd::Enumerate {
            poset,
            signature,
            emit,
            resume,
        } => commands::enumerate(
            poset,
            *signature,
            emit.as_deref(),
            budget,
            resume.as_deref(),
        ),
        Cmd::Count { max_size } => commands::count(*max_size, budget),
        Cmd::Catalog { max_size } => commands::catalog_cmd(*max_size),
        Cmd::Priestley { algebra, roundtrip } => commands::priestley(algebra, *roundtrip),
        Cmd::Represent(r) => {
            let o = commands::RepArgs {
                max_points: r.max_points,
                full_e: r.full_e,
                cyclic_only: r.cyclic_only,
                ignore_filter: r.ignore_filter,
                cap: r.cap,
                resume: r.resume.as_deref(),
            };
            commands::represent(&r.algebra, &o, budget)
        }
        Cmd::Subreducts { index, .. } => commands::subreducts(*index),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Law(_) | Error::Internal(_) => 1,
        Error::Budget { .. } => 3,
        _ => 2,
    }
}

// a closed pipe (`qra … | head`) is not an error worth a panic
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("qra: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => emit(&serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Table => emit(&out.text),
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("qra: {e}");
            match &e {
                Error::Law(r) if cli.format == Format::Json => {
                    emit(&serde_json::json!({ "ok": false, "report": r }).to_string())
                }
                Error::Law(r) => emit(&r.to_string()),
                Error::Budget {
                    checkpoint: Some(c),
                    ..
                } => emit(&c.to_string()),
                _ => {}
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
