//! Convergence of the energy errors for the rotational flow with a fixed
//! viscosity contrast.
//!
//! ```text
//! cargo run --release --example ex2_convergence [mini|p2p0] [max_n]
//! ```

use cutstokes::experiment::{preset, run, Preset};
use cutstokes::fespace::ElementPair;

fn main() -> cutstokes::Result<()> {
    let mut args = std::env::args().skip(1);
    let pair: ElementPair = args.next().as_deref().unwrap_or("p2p0").parse()?;
    let max_n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);

    let mut config = preset(Preset::Ex2, pair);
    config.levels.retain(|&n| n <= max_n);
    config.output.record_runtime = true;
    let output = run(&config)?;
    print!("{}", output.summary());
    Ok(())
}
