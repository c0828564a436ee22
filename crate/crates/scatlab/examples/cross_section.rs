//! Total scattering cross section of the unit sphere across frequencies,
//! from the integral-equation solver and from the partial-wave series, with
//! the low-frequency limit C -> 4 pi a^2.
//!
//! Run with: cargo run --release --example cross_section

use scatlab::forward::{compute_far_field_table, sphere_series_cross_section, BoundaryCondition};
use scatlab::geometry::RadialShape;
use scatlab::mathcore::SphereGrid;
use scatlab::smatrix::cross_section;

fn main() -> scatlab::Result<()> {
    let shape = RadialShape::sphere(1.0)?;
    let grid = SphereGrid::build(10)?;
    let lambdas = [0.05, 0.5, 1.0, 2.0, 4.0];
    let table =
        compute_far_field_table(&shape, &lambdas, &grid, BoundaryCondition::Dirichlet)?;
    println!("{:<8} {:>14} {:>14} {:>12}", "lambda", "C (solver)", "C (series)", "rel err");
    for (li, lambda) in lambdas.iter().enumerate() {
        let c = cross_section(&table, li, 0)?;
        let s = sphere_series_cross_section(1.0, *lambda, BoundaryCondition::Dirichlet)?;
        println!("{lambda:<8} {c:>14.8} {s:>14.8} {:>12.3e}", (c - s).abs() / s);
    }
    println!(
        "low-frequency limit 4 pi = {:.8}; C(0.05) is within {:.2}% of it",
        4.0 * std::f64::consts::PI,
        (cross_section(&table, 0, 0)? / (4.0 * std::f64::consts::PI) - 1.0).abs() * 100.0
    );
    Ok(())
}
