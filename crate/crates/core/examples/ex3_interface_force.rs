//! Pressure jump driven by an interface force. The manufactured data is
//! checked by finite differences before the convergence study.
//!
//! ```text
//! cargo run --release --example ex3_interface_force [mini|p2p0] [max_n]
//! ```

use cutstokes::cases::{validate_case, CaseKind, ManufacturedCase};
use cutstokes::experiment::{preset, run, Preset};
use cutstokes::fespace::ElementPair;

fn main() -> cutstokes::Result<()> {
    let mut args = std::env::args().skip(1);
    let pair: ElementPair = args.next().as_deref().unwrap_or("p2p0").parse()?;
    let max_n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);

    let mut config = preset(Preset::Ex3, pair);
    let [nu_minus, nu_plus] = config.nu.unwrap_or([1.0, 1.0]);
    let report = validate_case(&ManufacturedCase::new(CaseKind::PressureJump, nu_minus, nu_plus), 500, 1)?;
    println!("manufactured data residuals over {} points:", report.samples);
    println!("  div u          {:.2e}", report.divergence);
    println!("  momentum       {:.2e}", report.momentum);
    println!("  [u]            {:.2e}", report.velocity_jump);
    println!("  [sigma n] - l  {:.2e}", report.stress_jump);
    println!("  mean p         {:.2e}\n", report.pressure_mean);

    config.levels.retain(|&n| n <= max_n);
    let output = run(&config)?;
    print!("{}", output.summary());
    Ok(())
}
