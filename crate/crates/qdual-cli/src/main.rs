//! `qdual`: exact certificates for hypertoric Gale-dual pairs and the
//! rank-<=2 Springer checks. See the guide in `book/` for the underlying
//! constructions.

mod commands;
mod input;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::RunConfig;

#[derive(Parser)]
#[command(name = "qdual", version, about = "Exact symbolic certificates for quantized dual pairs")]
struct Cli {
    /// Completeness bound for character expansions.
    #[arg(long, global = true, default_value_t = 12)]
    truncation: i64,
    /// Independent runs of each randomized certificate.
    #[arg(long, global = true, default_value_t = 3)]
    trials: u32,
    /// Seed feeding every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Emit machine-readable JSON instead of a human summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full certificate chain on one arrangement file.
    Verify {
        /// Arrangement file (TOML, or JSON starting with '{').
        input: PathBuf,
    },
    /// Emit the Gale-dual arrangement and the cocircuit/circuit bijection.
    Dualize {
        /// Arrangement file (TOML, or JSON starting with '{').
        input: PathBuf,
        /// Write the dual arrangement here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand one Verma character and sweep its annihilation identities.
    Character {
        /// Arrangement file (TOML, or JSON starting with '{').
        input: PathBuf,
        /// Index into the sorted list of fixed-point bases.
        #[arg(long, default_value_t = 0)]
        basis: usize,
        /// Comma-separated central values "p/q"; drawn from the seed when
        /// omitted.
        #[arg(long)]
        c: Option<String>,
    },
    /// Run the symbolic Springer checks for one rank-<=2 type.
    Springer {
        /// Root system: A1, A2, or B2.
        #[arg(long = "type", value_name = "TYPE")]
        kind: String,
    },
}

fn main() {
    let cli = Cli::parse();
    let config = RunConfig {
        truncation: cli.truncation,
        trials: cli.trials,
        seed: cli.seed,
        json: cli.json,
    };
    let code = match &cli.command {
        Command::Verify { input } => commands::cmd_verify(&config, input),
        Command::Dualize { input, out } => commands::cmd_dualize(&config, input, out.as_deref()),
        Command::Character { input, basis, c } => {
            commands::cmd_character(&config, input, *basis, c.as_deref())
        }
        Command::Springer { kind } => commands::cmd_springer(&config, kind),
    };
    std::process::exit(code);
}
