//! Ratio of solution norm to data norm for fixed smooth data, over random
//! interface positions and viscosity contrasts. A method that is stable
//! uniformly in both keeps the ratio within a narrow band.
//!
//! ```text
//! cargo run --release --example stability_probe [mini|p2p0] [n]
//! ```

use cutstokes::diagnostics::{stability_probe, StabilityProbe};
use cutstokes::fespace::ElementPair;
use cutstokes::forms::FormParams;

fn main() -> cutstokes::Result<()> {
    let mut args = std::env::args().skip(1);
    let pair: ElementPair = args.next().as_deref().unwrap_or("mini").parse()?;
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(16);

    let probe = StabilityProbe {
        pair,
        n,
        params: FormParams::new(1.0, 1.0, 20.0, 10.0, 15.0),
        viscosities: vec![(1.0, 1.0), (1.0, 1e2), (1.0, 1e4), (1e-4, 1.0)],
        offsets: StabilityProbe::random_offsets(6, 0.25, 7),
        depth: 3,
    };
    let rows = stability_probe(&probe)?;
    for &(nu_minus, nu_plus) in &probe.viscosities {
        let ratios: Vec<f64> = rows
            .iter()
            .filter(|r| r.nu_minus == nu_minus && r.nu_plus == nu_plus)
            .map(|r| r.ratio)
            .collect();
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        println!("nu- = {nu_minus:>6.0e}, nu+ = {nu_plus:>6.0e}: ratio in [{lo:.4}, {hi:.4}]");
    }
    Ok(())
}
