mod commands;
mod input;
mod selftest;
mod table;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "sftk", version, about = "Exact combinatorics of genus-zero SFT compactifications")]
struct Cli {
    /// Project file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Emit Graphviz DOT instead of a report where the command supports it.
    #[arg(long, global = true)]
    dot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    SpecialPoints,
    Auxiliary,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate the project file.
    Validate {
        /// Print the normalized input instead of the validation summary.
        #[arg(long)]
        emit: bool,
    },
    /// Maximal level functions of a tree (cobordism levels for star-labeled trees).
    Levels {
        #[arg(long)]
        tree: String,
    },
    /// Corner refinement of a tree with its smoothness certificate.
    Refine {
        #[arg(long)]
        tree: String,
        /// Also sample every lattice point of a box of this side.
        #[arg(long)]
        box_side: Option<i64>,
    },
    /// Face poset of the refinement, labeled by leveled trees.
    Poset {
        #[arg(long)]
        tree: String,
    },
    /// Framing degrees; for cobordism trees also the inferred star labels.
    Degrees {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value_t = Convention::SpecialPoints)]
        convention: Convention,
    },
    /// Fredholm index and virtual dimension.
    Index {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        chi: i64,
        #[arg(long, default_value_t = 0)]
        c1: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        cz_plus: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        cz_minus: Vec<i64>,
        #[arg(long)]
        cobordism: bool,
    },
    /// Contact homology of the count table.
    Ch {
        #[arg(long)]
        cutoff_action: Option<String>,
        #[arg(long)]
        cutoff_length: Option<usize>,
    },
    /// Boundary strata of a morphism space of the flow category.
    Strata {
        /// Comma-separated negative sequence.
        #[arg(long, default_value = "")]
        minus: String,
        /// Comma-separated positive sequence.
        #[arg(long)]
        plus: String,
        /// Partition as comma-separated positions in the positive sequence.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Longest precedence chain between two orbit multisets.
    Norm {
        #[arg(long, default_value = "")]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Face counts of the maximally blown-up simplex.
    Simplex {
        #[arg(long)]
        n: usize,
    },
    /// Seeded randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    let ctx = commands::Context { input: cli.input, format: cli.format, dot: cli.dot };
    match std::panic::catch_unwind(move || commands::run(&ctx, &cli.command)) {
        Ok(Ok(out)) => {
            commands::print_out(&out);
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("{}", serde_json::to_string(&e.to_json()).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(3),
    }
}
