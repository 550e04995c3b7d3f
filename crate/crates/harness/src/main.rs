use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fdeq_harness::commands;
use fdeq_harness::{Config, HarnessError};

#[derive(Parser)]
#[command(name = "fdeq", version, about = "QAOA decoding experiments for LDPC and Polar codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Io {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate noisy blocks and their truth.
    Encode(Io),
    /// Decode a block file.
    Decode(Io),
    /// Run an experiment end to end.
    Bench(Io),
    /// Sweep the depolarizing error rate.
    NoiseSweep(Io),
    /// Gate-duration and qubit-count tables.
    Resources(Io),
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, HarnessError> {
    let (io, f): (&Io, fn(&Config, Option<&std::path::Path>) -> _) = match &cli.command {
        Command::Encode(io) => (io, commands::encode),
        Command::Decode(io) => (io, commands::decode),
        Command::Bench(io) => (io, commands::bench),
        Command::NoiseSweep(io) => (io, commands::noise_sweep_cmd),
        Command::Resources(io) => (io, commands::resources_cmd),
    };
    let cfg = Config::load(&io.config)?;
    f(&cfg, io.out.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fdeq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
