//! Divergence and maximum-norm errors for the pressure-jump case, written as
//! CSV and as a gnuplot data file next to the working directory.
//!
//! ```text
//! cargo run --release --example ex4_divergence_and_max_norms [mini|p2p0] [max_n]
//! ```

use std::fs::File;
use std::io::BufWriter;

use cutstokes::experiment::{preset, run, Preset, RunOutput};
use cutstokes::fespace::ElementPair;

fn main() -> cutstokes::Result<()> {
    let mut args = std::env::args().skip(1);
    let pair: ElementPair = args.next().as_deref().unwrap_or("p2p0").parse()?;
    let max_n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);

    let mut config = preset(Preset::Ex4, pair);
    config.levels.retain(|&n| n <= max_n);
    let output = run(&config)?;
    if let RunOutput::Convergence(table) = &output {
        for (quantity, label) in [("e_div", "|div u_h|"), ("e_inf_u", "max |u - u_h|"), ("e_inf_p", "max |p - p_h|")] {
            let rates: Vec<String> = table
                .rates(quantity)
                .iter()
                .map(|r| r.map_or("-".into(), |r| format!("{r:.2}")))
                .collect();
            println!("{label:>14}: rates {}", rates.join(" "));
        }
    }
    output.write_csv(BufWriter::new(File::create(format!("ex4_{pair}.csv"))?))?;
    output.write_dat(BufWriter::new(File::create(format!("ex4_{pair}.dat"))?))?;
    println!("wrote ex4_{pair}.csv and ex4_{pair}.dat");
    Ok(())
}
