//! Exterior Helmholtz solver: combined-field Nystrom discretization and
//! far-field extraction in the e^{-i lambda omega.x} incidence convention.

pub mod series;
mod solver;

pub use series::{
    series_truncation, sphere_modes, sphere_series_amplitude, sphere_series_cross_section,
};
pub use solver::{
    compute_far_field_table, far_field_amplitude, solve_exterior, HelmholtzSolver,
};

use crate::error::{Error, Result};
use crate::geometry::RadialShape;
use crate::mathcore::SphereGrid;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryCondition::Dirichlet => write!(f, "dirichlet"),
            BoundaryCondition::Neumann => write!(f, "neumann"),
        }
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(BoundaryCondition::Dirichlet),
            "neumann" | "n" => Ok(BoundaryCondition::Neumann),
            other => Err(Error::Parse(format!("unknown boundary condition '{other}'"))),
        }
    }
}

/// One exterior scattering problem instance.
#[derive(Clone, Debug)]
pub struct ScatterProblem {
    pub shape: RadialShape,
    pub wavenumber: f64,
    pub boundary_condition: BoundaryCondition,
    /// Incidence direction omega (incident wave e^{-i lambda omega.x}).
    pub incident_direction: [f64; 3],
}

impl ScatterProblem {
    pub fn validate(&self) -> Result<()> {
        if !(self.wavenumber > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "wavenumber must be positive, got {}",
                self.wavenumber
            )));
        }
        let d = &self.incident_direction;
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "incident direction must be a unit vector, |omega| = {n}"
            )));
        }
        Ok(())
    }
}

/// Layer density at the boundary quadrature nodes, with provenance.
#[derive(Clone, Debug)]
pub struct BoundaryDensity {
    pub values: Vec<Complex64>,
    pub grid: SphereGrid,
    pub wavenumber: f64,
    pub boundary_condition: BoundaryCondition,
    pub incident_direction: [f64; 3],
}

/// Complex amplitudes A(lambda, theta_i, omega_j) on one grid used for both
/// observation and incidence directions.
#[derive(Clone, Debug)]
pub struct FarFieldTable {
    pub lambdas: Vec<f64>,
    pub grid: SphereGrid,
    pub boundary_condition: BoundaryCondition,
    /// One dense matrix per frequency, row = observation node, column =
    /// incidence node.
    pub amplitudes: Vec<DMatrix<Complex64>>,
}

impl FarFieldTable {
    pub fn zero(grid: SphereGrid, lambdas: Vec<f64>, bc: BoundaryCondition) -> Self {
        let n = grid.len();
        let amplitudes = lambdas.iter().map(|_| DMatrix::zeros(n, n)).collect();
        Self { lambdas, grid, boundary_condition: bc, amplitudes }
    }
}
