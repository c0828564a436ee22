//! Birman-Krein phase derivative sigma'(lambda) two ways: the partial-wave
//! formula and the determinant phase of the discretized scattering matrix.
//!
//! Run with: cargo run --release --example scattering_phase

use scatlab::forward::{compute_far_field_table, BoundaryCondition};
use scatlab::geometry::RadialShape;
use scatlab::mathcore::SphereGrid;
use scatlab::smatrix::build_smatrix;
use scatlab::trace::{phase_derivative_det, sphere_phase_derivative};

fn main() -> scatlab::Result<()> {
    let shape = RadialShape::sphere(1.0)?;
    let grid = SphereGrid::build(12)?;
    println!(
        "{:<8} {:>16} {:>16} {:>12}",
        "lambda", "sigma' (waves)", "sigma' (det S)", "rel err"
    );
    for lambda in [1.0f64, 2.0, 3.0] {
        let h = lambda * 1e-3;
        let stencil = [lambda - h, lambda, lambda + h];
        let table =
            compute_far_field_table(&shape, &stencil, &grid, BoundaryCondition::Dirichlet)?;
        let det = phase_derivative_det(
            &build_smatrix(&table, 0)?,
            &build_smatrix(&table, 1)?,
            &build_smatrix(&table, 2)?,
        )?;
        let oracle = sphere_phase_derivative(1.0, lambda, BoundaryCondition::Dirichlet)?;
        println!(
            "{lambda:<8} {oracle:>16.10} {det:>16.10} {:>12.3e}",
            (det - oracle).abs() / oracle.abs()
        );
    }
    Ok(())
}
