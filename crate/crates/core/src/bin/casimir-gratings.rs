use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use casimir_gratings::config;
use casimir_gratings::run::{run, RunError, RunOptions};
use clap::Parser;

/// Casimir energy and force between lamellar dielectric gratings.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// CSV output path; overrides `output` in the config.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for the node-level integration (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Replace a config value, e.g. `numerics.N=11` or `scene.L_nm=300`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<RunError>().map_or(2, RunError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn execute(args: &Args) -> anyhow::Result<()> {
    let cfg = config::load(&args.config, &args.overrides).map_err(RunError::from)?;
    let threads = args.threads.or(cfg.threads).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("cannot start worker pool")?;
    let opts = RunOptions {
        output: args.output.clone(),
        quiet: args.quiet,
    };
    pool.install(|| run(&cfg, &opts))?;
    Ok(())
}
