//! Recovers a starlike shape from noiseless synthetic cross-section data in
//! a three-frequency window around lambda0 = 2, starting from a deliberately
//! wrong sphere.
//!
//! Run with: cargo run --release --example reconstruct

use scatlab::forward::BoundaryCondition;
use scatlab::geometry::RadialShape;
use scatlab::inverse::{
    reconstruct_shape, synthesize_cross_section_data, NoiseModel, ReconstructionConfig,
};
use scatlab::mathcore::SphereGrid;

fn main() -> scatlab::Result<()> {
    let truth = RadialShape::sphere(1.0)?;
    let grid = SphereGrid::build(10)?;
    let data = synthesize_cross_section_data(
        &truth,
        &[1.9, 2.0, 2.1],
        &grid,
        BoundaryCondition::Dirichlet,
        NoiseModel::None,
    )?;

    let init = RadialShape::sphere(1.2)?;
    let config = ReconstructionConfig { grid_order: 10, max_iterations: 15, ..Default::default() };
    let result = reconstruct_shape(&data, &init, &config)?;

    println!("{:<6} {:>14} {:>14} {:>12}", "iter", "misfit", "|gradient|", "damping");
    for rec in &result.log {
        println!(
            "{:<6} {:>14.6e} {:>14.6e} {:>12.2e}",
            rec.iteration, rec.misfit, rec.gradient_norm, rec.damping
        );
    }
    let radius = result.shape.coeff(0, 0) / (4.0 * std::f64::consts::PI).sqrt();
    println!(
        "recovered radius {radius:.8} from init 1.2 (true 1.0); converged = {}",
        result.converged
    );
    Ok(())
}
