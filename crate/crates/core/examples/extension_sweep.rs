//! Boundedness of the discrete extension from the plus patch to the whole
//! domain: the worst ratio `|E_h v|_1 / |v|_1` must stay bounded as the mesh is
//! refined.
//!
//! ```text
//! cargo run --release --example extension_sweep [p1|mini|p2] [trials]
//! ```

use cutstokes::extension::{extension_sweep, ExtensionSpace, SweepConfig};

fn main() -> cutstokes::Result<()> {
    let mut args = std::env::args().skip(1);
    let space: ExtensionSpace = args.next().as_deref().unwrap_or("p1").parse()?;
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);

    let config = SweepConfig {
        space,
        trials,
        ..SweepConfig::default()
    };
    let report = extension_sweep(&config)?;
    println!("{space} extension, {trials} random functions per level");
    for (level, max) in report.max_ratios() {
        println!("  n = {level:>4}: max ratio {max:.4}");
    }
    let quotients: Vec<String> = report.level_quotients().iter().map(|q| format!("{q:.3}")).collect();
    println!("level quotients: {}", quotients.join(" "));
    if report.rejected_offsets > 0 {
        println!("{} offsets were redrawn because a level did not resolve the interface", report.rejected_offsets);
    }
    Ok(())
}
