//! Evaluates a TOML run configuration and prints the CSV to stdout.
//!
//! cargo run --release --example run_config -- examples/configs/lifshitz_ideal.toml numerics.lifshitz_nodes=64

use casimir_gratings::{config, run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "examples/configs/lifshitz_ideal.toml".into());
    let overrides: Vec<String> = args.collect();
    let cfg = config::load(path.as_ref(), &overrides)?;
    let table = run::compute(&cfg, true)?;
    table.write_to(std::io::stdout())?;
    Ok(())
}
