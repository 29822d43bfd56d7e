//! Runs an experiment described by a TOML file and prints its CSV table.
//!
//! ```text
//! cargo run --release --example custom_config [path/to/config.toml]
//! ```

use std::io;
use std::path::PathBuf;

use cutstokes::experiment::{run, ExperimentConfig};

fn main() -> cutstokes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/custom.toml"));
    let config = ExperimentConfig::load(&path)?;
    eprintln!("{} with {} on levels {:?}", config.example, config.pair, config.levels);
    let output = run(&config)?;
    eprint!("{}", output.summary());
    output.write_csv(io::stdout().lock())
}
