//! Phase areas and interface length of the unit-area disk computed with the
//! cut quadrature, for increasing subdivision depth.
//!
//! ```text
//! cargo run --release --example cut_quadrature [n]
//! ```

use std::f64::consts::PI;

use cutstokes::cases::inclusion_radius;
use cutstokes::geometry::{classify, cut_quadrature, LevelSet, Phase};
use cutstokes::mesh::{build_uniform_diagonal_mesh, Rect};

fn main() -> cutstokes::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let mesh = build_uniform_diagonal_mesh(Rect::reference_square(), n)?;
    let r = inclusion_radius();
    let phi = LevelSet::circle([0.0, 0.0], r);

    println!("n = {n}, {} triangles", mesh.triangles().len());
    println!("{:>5} {:>6} {:>12} {:>12} {:>12}", "depth", "cut", "area error", "length err", "total area");
    for depth in 0..=5 {
        let cls = classify(&mesh, &phi, depth)?;
        let q = cut_quadrature(&mesh, &cls, &phi, depth, 4)?;
        let minus = q.volume(&mesh, Phase::Minus);
        let plus = q.volume(&mesh, Phase::Plus);
        println!(
            "{depth:>5} {:>6} {:>12.3e} {:>12.3e} {:>12.9}",
            cls.cut_elements().len(),
            (minus - PI * r * r).abs(),
            (q.interface_length() - 2.0 * PI * r).abs(),
            minus + plus
        );
    }
    Ok(())
}
