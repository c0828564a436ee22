//! Solves the exterior Dirichlet problem for the unit sphere and compares
//! the Nystrom far field against the closed-form partial-wave series.
//!
//! Run with: cargo run --release --example forward_sphere

use scatlab::forward::{sphere_series_amplitude, BoundaryCondition, HelmholtzSolver};
use scatlab::geometry::RadialShape;
use scatlab::mathcore::SphereGrid;

fn main() -> scatlab::Result<()> {
    let lambda = 2.0;
    let shape = RadialShape::sphere(1.0)?;
    let omega = [0.0, 0.0, 1.0];

    println!("unit sound-soft sphere, lambda = {lambda}, incidence along +z");
    println!("{:<8} {:>22} {:>22} {:>12}", "order", "solver A(gamma=pi)", "series", "rel err");
    for order in [8usize, 12, 16] {
        let grid = SphereGrid::build(order)?;
        let solver = HelmholtzSolver::new(&shape, lambda, BoundaryCondition::Dirichlet, &grid)?;
        let density = solver.solve_incidence(omega)?;
        // backscattering direction theta = -omega
        let theta = [0.0, 0.0, -1.0];
        let a = solver.far_field(&density, theta);
        let s = sphere_series_amplitude(1.0, lambda, -1.0, BoundaryCondition::Dirichlet)?;
        println!(
            "{order:<8} {:>10.6}{:+.6}i {:>10.6}{:+.6}i {:>12.3e}",
            a.re,
            a.im,
            s.re,
            s.im,
            (a - s).norm() / s.norm()
        );
    }

    // boundary-condition residual of the total field at off-node points
    let grid = SphereGrid::build(12)?;
    let solver = HelmholtzSolver::new(&shape, lambda, BoundaryCondition::Dirichlet, &grid)?;
    let density = solver.solve_incidence(omega)?;
    let mut worst = 0.0f64;
    for k in 0..20 {
        let t = 0.1 + 0.13 * k as f64;
        let dir = [t.sin() * (2.0 * t).cos(), t.sin() * (2.0 * t).sin(), t.cos()];
        worst = worst.max(solver.boundary_residual(&density, dir)?);
    }
    println!("max boundary residual at 20 off-node points: {worst:.3e}");
    Ok(())
}
