//! Errors of the rotational flow for a ladder of viscosity contrasts on one
//! mesh. The stress does not depend on the viscosities, so robust methods give
//! nearly the same errors on every row.
//!
//! ```text
//! cargo run --release --example ex1_viscosity_robustness [mini|p2p0] [n]
//! ```

use cutstokes::cases::CaseKind;
use cutstokes::diagnostics::{relative_spread, viscosity_sweep, ViscosityStudy};
use cutstokes::experiment::contrast_ladder;
use cutstokes::fespace::ElementPair;
use cutstokes::forms::FormParams;
use cutstokes::geometry::Phase;

fn main() -> cutstokes::Result<()> {
    let mut args = std::env::args().skip(1);
    let pair: ElementPair = args.next().as_deref().unwrap_or("p2p0").parse()?;
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);

    for inclusion in [Phase::Minus, Phase::Plus] {
        let study = ViscosityStudy {
            kind: CaseKind::Rotational { inclusion },
            pair,
            n,
            params: FormParams::new(1.0, 1.0, 20.0, 10.0, 15.0),
            depth: 4,
            order: None,
        };
        let ladder: Vec<(f64, f64)> = contrast_ladder().into_iter().map(|[a, b]| (a, b)).collect();
        let rows = viscosity_sweep(&study, &ladder)?;
        println!("inclusion in the {inclusion:?} phase, {pair}, n = {n}");
        println!("{:>10} {:>10} {:>12} {:>12}", "nu-", "nu+", "e(u)", "e(p)");
        for r in &rows {
            println!("{:>10.0e} {:>10.0e} {:>12.5e} {:>12.5e}", r.nu_minus, r.nu_plus, r.e_u, r.e_p);
        }
        let e_u: Vec<f64> = rows.iter().map(|r| r.e_u).collect();
        let e_p: Vec<f64> = rows.iter().map(|r| r.e_p).collect();
        println!(
            "relative spread: e(u) {:.2e}, e(p) {:.2e}\n",
            relative_spread(&e_u),
            relative_spread(&e_p)
        );
    }
    Ok(())
}
