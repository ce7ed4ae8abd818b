use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use apsyn_cli::spec::{resolve, ConfigFile};
use apsyn_cli::{recipes, validate_config};

/// Subarray-level aperiodic planar array synthesis.
#[derive(Parser)]
#[command(name = "apsyn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a JSON config.
    Run {
        /// Path to the experiment config.
        config: PathBuf,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker thread count (default: all cores). Outputs are identical
        /// at any thread count.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Validate a config and print its fully-resolved form.
    Validate {
        config: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn try_main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, seed, threads } => {
            if let Some(threads) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global()
                    .context("configuring the thread pool")?;
            }
            let text = read(&config)?;
            let mut raw: ConfigFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", config.display()))?;
            if let Some(out) = out {
                raw.output_dir = Some(out);
            }
            if let Some(seed) = seed {
                raw.seed = Some(seed);
            }
            let spec = resolve(raw)?;
            recipes::sanity_check(&spec)?;
            let summary = recipes::run(&spec)?;
            println!(
                "{} -> {}",
                spec.recipe.name(),
                summary.output_dir.display()
            );
            for line in &summary.lines {
                println!("  {line}");
            }
            Ok(())
        }
        Command::Validate { config } => {
            let spec = validate_config(&read(&config)?)?;
            println!("{}", serde_json::to_string_pretty(&spec)?);
            Ok(())
        }
    }
}
