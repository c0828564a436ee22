//! Cross-section separation of two equal-volume obstacles near lambda0 = 2:
//! volume alone does not determine the cross section, so the pair must be
//! distinguishable, while identical shapes sit at the solver noise floor.
//!
//! Run with: cargo run --release --example distinguish

use scatlab::forward::BoundaryCondition;
use scatlab::geometry::RadialShape;
use scatlab::inverse::distinguishability;
use scatlab::mathcore::{sh_index, sh_len, SphereGrid};

fn main() -> scatlab::Result<()> {
    let sphere = RadialShape::sphere(1.0)?;
    // r = 1 + 0.15 Y20, rescaled to the unit-ball volume
    let mut coeffs = vec![0.0; sh_len(2)];
    coeffs[sh_index(0, 0)] = (4.0 * std::f64::consts::PI).sqrt();
    coeffs[sh_index(2, 0)] = 0.15;
    let bumpy = RadialShape::new(2, coeffs)?;
    let vgrid = SphereGrid::build(10)?;
    let scale = (sphere.volume(&vgrid)? / bumpy.volume(&vgrid)?).cbrt();
    let bumpy = bumpy.scaled(scale)?;
    println!(
        "equal volumes: sphere {:.8}, perturbed {:.8}",
        sphere.volume(&vgrid)?,
        bumpy.volume(&vgrid)?
    );

    let grid = SphereGrid::build(12)?;
    let bc = BoundaryCondition::Dirichlet;
    let sep_pair = distinguishability(&sphere, &bumpy, 2.0, &grid, bc)?;
    let sep_self = distinguishability(&sphere, &sphere, 2.0, &grid, bc)?;
    println!("separation sphere vs perturbed: {sep_pair:.6e}");
    println!("separation sphere vs itself:    {sep_self:.6e}");
    Ok(())
}
