//! Starlike obstacles represented by a truncated real spherical-harmonic
//! expansion of the radial function r(theta).

use crate::error::{Error, Result};
use crate::mathcore::{sh_basis, sh_basis_with_grad, sh_index, sh_len, SphereGrid};
use serde::{Deserialize, Serialize};

/// r(theta) = sum c_{l,m} Y_{l,m}(theta), with r > 0 on a validation grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialShape {
    max_degree: usize,
    coeffs: Vec<f64>,
}

/// Boundary data at one direction: point, unit outward normal and the area
/// element per unit solid angle.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceFrame {
    pub point: [f64; 3],
    pub outward_normal: [f64; 3],
    pub area_element: f64,
}

impl RadialShape {
    /// Validates starlike positivity on a grid of order 2L+8.
    pub fn new(max_degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        Self::with_validation_order(max_degree, coeffs, 2 * max_degree + 8)
    }

    /// Positivity can dip between validation nodes for wild coefficient sets;
    /// callers may raise the validation order if that risk matters.
    pub fn with_validation_order(
        max_degree: usize,
        coeffs: Vec<f64>,
        validation_order: usize,
    ) -> Result<Self> {
        if coeffs.len() != sh_len(max_degree) {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for degree {max_degree}, got {}",
                sh_len(max_degree),
                coeffs.len()
            )));
        }
        let shape = Self { max_degree, coeffs };
        let grid = SphereGrid::build(validation_order.max(1))?;
        for node in &grid.nodes {
            let r = shape.radius_unchecked(*node);
            if !(r > 0.0) {
                return Err(Error::InvalidShape(format!(
                    "radial function nonpositive ({r:.3e}) at direction {node:?}"
                )));
            }
        }
        Ok(shape)
    }

    /// Ball of the given radius centered at the origin.
    pub fn sphere(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        let mut coeffs = vec![0.0; 1];
        coeffs[0] = radius * (4.0 * std::f64::consts::PI).sqrt();
        Self::new(0, coeffs)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize, m: i64) -> f64 {
        self.coeffs[sh_index(l, m)]
    }

    fn radius_unchecked(&self, dir: [f64; 3]) -> f64 {
        let basis = sh_basis(self.max_degree, dir);
        self.coeffs.iter().zip(&basis).map(|(c, b)| c * b).sum()
    }

    /// r(dir); errors if the expansion is nonpositive there.
    pub fn eval_radius(&self, dir: [f64; 3]) -> Result<f64> {
        let r = self.radius_unchecked(dir);
        if !(r > 0.0) {
            return Err(Error::InvalidShape(format!(
                "radial function nonpositive ({r:.3e}) at {dir:?}"
            )));
        }
        Ok(r)
    }

    /// Boundary point, outward normal and area element from the analytic
    /// angular gradient of the expansion.
    pub fn surface_frame(&self, dir: [f64; 3]) -> Result<SurfaceFrame> {
        let (vals, grads) = sh_basis_with_grad(self.max_degree, dir);
        let mut r = 0.0;
        let mut grad = [0.0f64; 3];
        for (i, c) in self.coeffs.iter().enumerate() {
            r += c * vals[i];
            for k in 0..3 {
                grad[k] += c * grads[i][k];
            }
        }
        if !(r > 0.0) {
            return Err(Error::InvalidShape(format!(
                "radial function nonpositive ({r:.3e}) at {dir:?}"
            )));
        }
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        let norm_len = (r * r + g2).sqrt();
        // unnormalized outward normal: r * dir - grad_{S^2} r
        let mut n = [0.0f64; 3];
        for k in 0..3 {
            n[k] = (r * dir[k] - grad[k]) / norm_len;
        }
        Ok(SurfaceFrame {
            point: [r * dir[0], r * dir[1], r * dir[2]],
            outward_normal: n,
            area_element: r * norm_len,
        })
    }

    /// (1/3) * integral of r^3 over the sphere.
    pub fn volume(&self, grid: &SphereGrid) -> Result<f64> {
        if grid.order < 3 * self.max_degree + 2 {
            return Err(Error::InvalidArgument(format!(
                "volume grid order {} below 3L+2 = {}",
                grid.order,
                3 * self.max_degree + 2
            )));
        }
        let mut v = 0.0;
        for (node, w) in grid.nodes.iter().zip(&grid.weights) {
            let r = self.eval_radius(*node)?;
            v += w * r * r * r;
        }
        Ok(v / 3.0)
    }

    /// Shape scaled by s > 0.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        Self::new(self.max_degree, self.coeffs.iter().map(|c| c * s).collect())
    }
}

/// On-disk form: {"L": n, "coeffs": [{"l":..,"m":..,"c":..}, ...]}.
#[derive(Serialize, Deserialize)]
pub struct ShapeFile {
    #[serde(rename = "L")]
    pub max_degree: usize,
    pub coeffs: Vec<ShapeCoeff>,
}

#[derive(Serialize, Deserialize)]
pub struct ShapeCoeff {
    pub l: usize,
    pub m: i64,
    pub c: f64,
}

impl ShapeFile {
    pub fn from_shape(shape: &RadialShape) -> Self {
        let mut coeffs = Vec::new();
        for l in 0..=shape.max_degree() {
            for m in -(l as i64)..=(l as i64) {
                let c = shape.coeff(l, m);
                if c != 0.0 || l == 0 {
                    coeffs.push(ShapeCoeff { l, m, c });
                }
            }
        }
        Self { max_degree: shape.max_degree(), coeffs }
    }

    pub fn into_shape(self) -> Result<RadialShape> {
        let mut coeffs = vec![0.0; sh_len(self.max_degree)];
        let mut seen = vec![false; sh_len(self.max_degree)];
        for rec in &self.coeffs {
            if rec.m.unsigned_abs() as usize > rec.l || rec.l > self.max_degree {
                return Err(Error::Parse(format!(
                    "coefficient record out of range: l={} m={}",
                    rec.l, rec.m
                )));
            }
            let idx = sh_index(rec.l, rec.m);
            if seen[idx] {
                return Err(Error::Parse(format!("duplicate (l,m)=({},{})", rec.l, rec.m)));
            }
            seen[idx] = true;
            coeffs[idx] = rec.c;
        }
        RadialShape::new(self.max_degree, coeffs)
    }
}
