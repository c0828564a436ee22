//! Randomized structural properties: shape-file round trips, volume scaling,
//! and grid combinatorics hold across the whole valid parameter space, not
//! just at hand-picked values.

use proptest::prelude::*;
use scatlab::geometry::{RadialShape, ShapeFile};
use scatlab::mathcore::{sh_len, SphereGrid};

fn valid_shape_strategy() -> impl Strategy<Value = RadialShape> {
    // dominant monopole keeps every sampled shape starlike
    (3.0f64..6.0, proptest::collection::vec(-0.15f64..0.15, sh_len(2) - 1)).prop_map(
        |(c00, rest)| {
            let mut coeffs = vec![c00];
            coeffs.extend(rest);
            RadialShape::new(2, coeffs).expect("strategy produced non-starlike shape")
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shape_json_round_trip_is_bit_exact(shape in valid_shape_strategy()) {
        let json = serde_json::to_string(&ShapeFile::from_shape(&shape)).unwrap();
        let back: ShapeFile = serde_json::from_str(&json).unwrap();
        let recovered = back.into_shape().unwrap();
        prop_assert_eq!(recovered.coeffs(), shape.coeffs());
    }

    #[test]
    fn volume_scaling_law(shape in valid_shape_strategy(), s in 0.3f64..3.0) {
        let grid = SphereGrid::build(16).unwrap();
        let v = shape.volume(&grid).unwrap();
        let vs = shape.scaled(s).unwrap().volume(&grid).unwrap();
        prop_assert!(((vs - s.powi(3) * v) / vs).abs() < 1e-12);
    }

    #[test]
    fn radius_bounded_by_coefficient_norm(shape in valid_shape_strategy(), seed in 0u64..1000) {
        // |r(dir)| <= sum |c| * max |Y| and r > 0 everywhere starlike
        let z = (seed as f64 / 1000.0) * 2.0 - 1.0;
        let phi = seed as f64 * 0.618;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let dir = [r * phi.cos(), r * phi.sin(), z];
        let radius = shape.eval_radius(dir).unwrap();
        prop_assert!(radius > 0.0);
        let bound: f64 = shape.coeffs().iter().map(|c| c.abs()).sum::<f64>();
        prop_assert!(radius <= bound);
    }

    #[test]
    fn antipode_is_an_involution(order in 1usize..20) {
        let g = SphereGrid::build(order).unwrap();
        for i in 0..g.len() {
            let j = g.antipode(i);
            prop_assert_eq!(g.antipode(j), i);
            for k in 0..3 {
                prop_assert!((g.nodes[i][k] + g.nodes[j][k]).abs() < 1e-13);
            }
        }
    }
}
