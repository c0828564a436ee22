//! Tour of the starlike-shape toolkit: harmonic radial expansions, surface
//! frames, volumes, and the JSON shape-file format.
//!
//! Run with: cargo run --release --example starlike_shapes

use scatlab::geometry::{RadialShape, ShapeFile};
use scatlab::mathcore::{sh_index, sh_len, SphereGrid};

fn main() -> scatlab::Result<()> {
    let mut coeffs = vec![0.0; sh_len(2)];
    coeffs[sh_index(0, 0)] = (4.0 * std::f64::consts::PI).sqrt();
    coeffs[sh_index(1, 0)] = 0.1;
    coeffs[sh_index(2, 0)] = 0.2;
    let shape = RadialShape::new(2, coeffs)?;

    let grid = SphereGrid::build(16)?;
    println!("volume: {:.8} (unit ball would be {:.8})", shape.volume(&grid)?, 4.0 * std::f64::consts::PI / 3.0);
    for dir in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]] {
        let f = shape.surface_frame(dir)?;
        println!(
            "dir {dir:?}: r = {:.6}, normal = [{:.4}, {:.4}, {:.4}], area element = {:.6}",
            shape.eval_radius(dir)?,
            f.outward_normal[0],
            f.outward_normal[1],
            f.outward_normal[2],
            f.area_element
        );
    }

    let json = serde_json::to_string_pretty(&ShapeFile::from_shape(&shape)).unwrap();
    println!("shape file:\n{json}");
    let back: ShapeFile = serde_json::from_str(&json).unwrap();
    assert_eq!(back.into_shape()?.coeffs(), shape.coeffs());
    println!("round trip through the JSON format is bit-exact");
    Ok(())
}
