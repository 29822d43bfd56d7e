//! Discrete inf-sup constant of each element pair on uniform meshes without
//! an interface. A pair is stable when the constant stays away from zero.
//!
//! ```text
//! cargo run --release --example infsup
//! ```

use cutstokes::diagnostics::infsup_estimate;
use cutstokes::fespace::ElementPair;

fn main() -> cutstokes::Result<()> {
    for pair in [ElementPair::Mini, ElementPair::P2P0] {
        for n in [4, 8, 12, 16] {
            let est = infsup_estimate(n, pair)?;
            println!("{pair:>5} n = {n:>2}: xi = {:.5}, zero modes {}", est.xi, est.zero_modes);
        }
    }
    Ok(())
}
