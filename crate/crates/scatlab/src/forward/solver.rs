use crate::error::{Error, Result};
use crate::forward::{BoundaryCondition, BoundaryDensity, FarFieldTable, ScatterProblem};
use crate::geometry::{RadialShape, SurfaceFrame};
use crate::mathcore::harmonics::{sh_basis, sh_len};
use crate::mathcore::legendre::legendre_partial_sum;
use crate::mathcore::SphereGrid;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Weakly singular part of the combined kernel, with the 1/|x_hat - y_hat|
/// factor removed (the product-integration weights restore it), times the
/// area element of y. Finite but direction-dependent on the diagonal; the
/// diagonal entry is the angular average computed in `diagonal_limit`.
fn singular_part(
    k: f64,
    bc: BoundaryCondition,
    x: &[f64; 3],
    x_hat: &[f64; 3],
    x_normal: &[f64; 3],
    y: &SurfaceFrame,
    y_hat: &[f64; 3],
) -> Complex64 {
    let s = norm(&sub(x_hat, y_hat));
    let diff = sub(&y.point, x);
    let r = norm(&diff);
    let kr = k * r;
    let (ckr, skr) = (kr.cos(), kr.sin());
    let even_weight = (-ckr - kr * skr) / (FOUR_PI * r * r * r);
    match bc {
        BoundaryCondition::Dirichlet => {
            // (double layer - i k single layer), even-in-R pieces
            let g_d = dot(&y.outward_normal, &diff) * even_weight * s;
            let g_s = ckr * s / (FOUR_PI * r);
            (Complex64::new(g_d, 0.0) - Complex64::new(0.0, k) * g_s) * y.area_element
        }
        BoundaryCondition::Neumann => {
            // adjoint double layer: normal derivative at the target
            let g_kp = -dot(x_normal, &diff) * even_weight * s;
            Complex64::new(g_kp * y.area_element, 0.0)
        }
    }
}

/// Smooth remainder of the combined kernel (odd-in-R pieces), times the area
/// element; its diagonal limit is returned by `regular_diagonal`.
fn regular_part(
    k: f64,
    bc: BoundaryCondition,
    x: &[f64; 3],
    x_normal: &[f64; 3],
    y: &SurfaceFrame,
) -> Complex64 {
    let diff = sub(&y.point, x);
    let r = norm(&diff);
    let kr = k * r;
    let (ckr, skr) = (kr.cos(), kr.sin());
    let odd_weight = (kr * ckr - skr) / (FOUR_PI * r * r * r);
    match bc {
        BoundaryCondition::Dirichlet => {
            let reg_d = Complex64::new(0.0, dot(&y.outward_normal, &diff) * odd_weight);
            let reg_s = Complex64::new(0.0, skr / (FOUR_PI * r));
            (reg_d - Complex64::new(0.0, k) * reg_s) * y.area_element
        }
        BoundaryCondition::Neumann => {
            Complex64::new(0.0, -dot(x_normal, &diff) * odd_weight) * y.area_element
        }
    }
}

fn regular_diagonal(k: f64, bc: BoundaryCondition, area_element: f64) -> Complex64 {
    match bc {
        // -ik * (ik/(4 pi)) = k^2/(4 pi)
        BoundaryCondition::Dirichlet => Complex64::new(k * k / FOUR_PI * area_element, 0.0),
        BoundaryCondition::Neumann => Complex64::new(0.0, 0.0),
    }
}

/// Diagonal limit of `singular_part` by Richardson-extrapolated angular
/// averaging around the target direction.
fn diagonal_limit(
    shape: &RadialShape,
    k: f64,
    bc: BoundaryCondition,
    x: &SurfaceFrame,
    x_hat: &[f64; 3],
) -> Result<Complex64> {
    let up = if x_hat[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let d = dot(x_hat, &up);
    let mut e1 = [0.0f64; 3];
    for i in 0..3 {
        e1[i] = up[i] - d * x_hat[i];
    }
    let l1 = norm(&e1);
    for v in e1.iter_mut() {
        *v /= l1;
    }
    let e2 = [
        x_hat[1] * e1[2] - x_hat[2] * e1[1],
        x_hat[2] * e1[0] - x_hat[0] * e1[2],
        x_hat[0] * e1[1] - x_hat[1] * e1[0],
    ];
    let average = |eps: f64| -> Result<Complex64> {
        let (ce, se) = (eps.cos(), eps.sin());
        let mut acc = Complex64::new(0.0, 0.0);
        let n_dirs = 8usize;
        for q in 0..n_dirs {
            let alpha = 2.0 * std::f64::consts::PI * q as f64 / n_dirs as f64;
            let (ca, sa) = (alpha.cos(), alpha.sin());
            let mut y_hat = [0.0f64; 3];
            for i in 0..3 {
                y_hat[i] = ce * x_hat[i] + se * (ca * e1[i] + sa * e2[i]);
            }
            let yl = norm(&y_hat);
            for v in y_hat.iter_mut() {
                *v /= yl;
            }
            let frame = shape.surface_frame(y_hat)?;
            acc += singular_part(k, bc, &x.point, x_hat, &x.outward_normal, &frame, &y_hat);
        }
        Ok(acc / n_dirs as f64)
    };
    let eps = 1e-3;
    let coarse = average(eps)?;
    let fine = average(eps / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// Dense combined-field Nystrom solver for one (shape, wavenumber, boundary
/// condition, grid) configuration. Assembly and factorization happen once;
/// each incidence direction is a cheap back-substitution.
pub struct HelmholtzSolver {
    shape: RadialShape,
    k: f64,
    bc: BoundaryCondition,
    grid: SphereGrid,
    frames: Vec<SurfaceFrame>,
    lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    condition_estimate: f64,
}

impl HelmholtzSolver {
    pub fn new(
        shape: &RadialShape,
        wavenumber: f64,
        bc: BoundaryCondition,
        grid: &SphereGrid,
    ) -> Result<Self> {
        if !(wavenumber > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "wavenumber must be positive, got {wavenumber}"
            )));
        }
        let frames: Vec<SurfaceFrame> = grid
            .nodes
            .iter()
            .map(|n| shape.surface_frame(*n))
            .collect::<Result<_>>()?;
        let n = grid.len();
        let lmax = grid.order;
        let k = wavenumber;
        let jump = match bc {
            BoundaryCondition::Dirichlet => 0.5,
            BoundaryCondition::Neumann => -0.5,
        };
        let diag: Vec<Complex64> = grid
            .nodes
            .par_iter()
            .zip(frames.par_iter())
            .map(|(x_hat, frame)| diagonal_limit(shape, k, bc, frame, x_hat))
            .collect::<Result<_>>()?;
        let rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let x_hat = &grid.nodes[i];
                let xf = &frames[i];
                let mut row = vec![Complex64::new(0.0, 0.0); n];
                for j in 0..n {
                    let wj = grid.weights[j];
                    if i == j {
                        let w_sing = wj * (lmax as f64 + 1.0);
                        row[j] = Complex64::new(jump, 0.0)
                            + w_sing * diag[i]
                            + wj * regular_diagonal(k, bc, xf.area_element);
                    } else {
                        let y_hat = &grid.nodes[j];
                        let t = dot(x_hat, y_hat).clamp(-1.0, 1.0);
                        let w_sing = wj * legendre_partial_sum(lmax, t);
                        let sing = singular_part(
                            k,
                            bc,
                            &xf.point,
                            x_hat,
                            &xf.outward_normal,
                            &frames[j],
                            y_hat,
                        );
                        let reg = regular_part(k, bc, &xf.point, &xf.outward_normal, &frames[j]);
                        row[j] = w_sing * sing + wj * reg;
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let lu = matrix.lu();
        let mut min_d = f64::INFINITY;
        let mut max_d = 0.0f64;
        for i in 0..n {
            let d = lu.u()[(i, i)].norm();
            min_d = min_d.min(d);
            max_d = max_d.max(d);
        }
        let condition_estimate = if min_d > 0.0 { max_d / min_d } else { f64::INFINITY };
        if !condition_estimate.is_finite() || condition_estimate > 1e12 {
            return Err(Error::SolverFailure(format!(
                "discrete system ill-conditioned, condition estimate {condition_estimate:.3e}"
            )));
        }
        Ok(Self {
            shape: shape.clone(),
            k,
            bc,
            grid: grid.clone(),
            frames,
            lu,
            condition_estimate,
        })
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    fn rhs_for(&self, d: &[f64; 3]) -> DVector<Complex64> {
        DVector::from_iterator(
            self.grid.len(),
            self.frames.iter().map(|f| {
                let phase = self.k * dot(d, &f.point);
                let inc = Complex64::new(0.0, phase).exp();
                match self.bc {
                    BoundaryCondition::Dirichlet => -inc,
                    BoundaryCondition::Neumann => {
                        -Complex64::new(0.0, self.k * dot(d, &f.outward_normal)) * inc
                    }
                }
            }),
        )
    }

    /// Solve for one incidence direction omega (wave e^{-i lambda omega.x}).
    pub fn solve_incidence(&self, omega: [f64; 3]) -> Result<BoundaryDensity> {
        let d = [-omega[0], -omega[1], -omega[2]];
        let rhs = self.rhs_for(&d);
        let sol = self
            .lu
            .solve(&rhs)
            .ok_or_else(|| Error::SolverFailure("singular discrete system".into()))?;
        Ok(BoundaryDensity {
            values: sol.iter().copied().collect(),
            grid: self.grid.clone(),
            wavenumber: self.k,
            boundary_condition: self.bc,
            incident_direction: omega,
        })
    }

    fn far_field_row(&self, theta: &[f64; 3]) -> Vec<Complex64> {
        self.frames
            .iter()
            .zip(self.grid.weights.iter())
            .map(|(f, w)| {
                let phase = -self.k * dot(theta, &f.point);
                let osc = Complex64::new(0.0, phase).exp();
                let factor = match self.bc {
                    BoundaryCondition::Dirichlet => Complex64::new(
                        0.0,
                        -self.k * (dot(theta, &f.outward_normal) + 1.0),
                    ),
                    BoundaryCondition::Neumann => Complex64::new(1.0, 0.0),
                };
                osc * factor * (w * f.area_element / FOUR_PI)
            })
            .collect()
    }

    /// Far-field amplitude in observation direction theta for a solved
    /// density, normalized as the coefficient of e^{i lambda r}/r.
    pub fn far_field(&self, density: &BoundaryDensity, theta: [f64; 3]) -> Complex64 {
        self.far_field_row(&theta)
            .iter()
            .zip(&density.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Scattered field at an exterior point (regular quadrature; the point
    /// must be well separated from the boundary).
    pub fn scattered_field(&self, density: &BoundaryDensity, x: [f64; 3]) -> Complex64 {
        let k = self.k;
        self.frames
            .iter()
            .zip(self.grid.weights.iter())
            .zip(&density.values)
            .map(|((f, w), phi)| {
                let diff = sub(&x, &f.point);
                let r = norm(&diff);
                let g = Complex64::new(0.0, k * r).exp() / (FOUR_PI * r);
                let kernel = match self.bc {
                    BoundaryCondition::Dirichlet => {
                        let dg_dny = Complex64::new(0.0, k * r) - Complex64::new(1.0, 0.0);
                        let dgn = g * dg_dny * (-dot(&f.outward_normal, &diff)) / (r * r);
                        dgn - Complex64::new(0.0, k) * g
                    }
                    BoundaryCondition::Neumann => g,
                };
                kernel * (w * f.area_element) * phi
            })
            .sum()
    }

    /// Residual of the boundary condition for the total field at an
    /// arbitrary (typically off-node) direction on the surface, relative to
    /// the unit incident amplitude.
    pub fn boundary_residual(&self, density: &BoundaryDensity, dir: [f64; 3]) -> Result<f64> {
        let l = norm(&dir);
        let x_hat = [dir[0] / l, dir[1] / l, dir[2] / l];
        let xf = self.shape.surface_frame(x_hat)?;
        let lmax = self.grid.order;
        let mut v = Complex64::new(0.0, 0.0);
        for j in 0..self.grid.len() {
            let y_hat = &self.grid.nodes[j];
            let wj = self.grid.weights[j];
            let t = dot(&x_hat, y_hat).clamp(-1.0, 1.0);
            let s = norm(&sub(&x_hat, y_hat));
            let (sing, reg) = if s < 1e-12 {
                (
                    diagonal_limit(&self.shape, self.k, self.bc, &xf, &x_hat)?,
                    regular_diagonal(self.k, self.bc, xf.area_element),
                )
            } else {
                (
                    singular_part(
                        self.k,
                        self.bc,
                        &xf.point,
                        &x_hat,
                        &xf.outward_normal,
                        &self.frames[j],
                        y_hat,
                    ),
                    regular_part(self.k, self.bc, &xf.point, &xf.outward_normal, &self.frames[j]),
                )
            };
            v += wj * legendre_partial_sum(lmax, t) * sing * density.values[j] + wj * reg * density.values[j];
        }
        // jump term with the density interpolated through its harmonic
        // expansion on the grid
        let phi_at = self.interpolate_density(density, x_hat);
        let jump = match self.bc {
            BoundaryCondition::Dirichlet => 0.5,
            BoundaryCondition::Neumann => -0.5,
        };
        v += jump * phi_at;
        let d = [
            -density.incident_direction[0],
            -density.incident_direction[1],
            -density.incident_direction[2],
        ];
        let residual = match self.bc {
            BoundaryCondition::Dirichlet => {
                let inc = Complex64::new(0.0, self.k * dot(&d, &xf.point)).exp();
                (v + inc).norm()
            }
            BoundaryCondition::Neumann => {
                let inc = Complex64::new(0.0, self.k * dot(&d, &xf.point)).exp();
                let dinc = Complex64::new(0.0, self.k * dot(&d, &xf.outward_normal)) * inc;
                (v + dinc).norm() / self.k
            }
        };
        Ok(residual)
    }

    fn interpolate_density(&self, density: &BoundaryDensity, x_hat: [f64; 3]) -> Complex64 {
        let lmax = self.grid.order;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); sh_len(lmax)];
        for (j, node) in self.grid.nodes.iter().enumerate() {
            let basis = sh_basis(lmax, *node);
            let wphi = self.grid.weights[j] * density.values[j];
            for (c, b) in coeffs.iter_mut().zip(&basis) {
                *c += wphi * *b;
            }
        }
        let basis = sh_basis(lmax, x_hat);
        coeffs.iter().zip(&basis).map(|(c, b)| c * *b).sum()
    }
}

/// One-shot entry point: assemble, factorize and solve one incidence.
pub fn solve_exterior(problem: &ScatterProblem, grid: &SphereGrid) -> Result<BoundaryDensity> {
    problem.validate()?;
    let solver = HelmholtzSolver::new(
        &problem.shape,
        problem.wavenumber,
        problem.boundary_condition,
        grid,
    )?;
    solver.solve_incidence(problem.incident_direction)
}

/// Far field of a previously solved density (re-derives the boundary frames
/// from the shape).
pub fn far_field_amplitude(
    density: &BoundaryDensity,
    shape: &RadialShape,
    theta: [f64; 3],
) -> Result<Complex64> {
    let solver = HelmholtzSolver::new(
        shape,
        density.wavenumber,
        density.boundary_condition,
        &density.grid,
    )?;
    Ok(solver.far_field(density, theta))
}

/// Full grid-to-grid amplitude tables A(lambda, theta_i, omega_j) for a list
/// of frequencies. Incidence columns use omega_j = grid node j.
pub fn compute_far_field_table(
    shape: &RadialShape,
    lambdas: &[f64],
    grid: &SphereGrid,
    bc: BoundaryCondition,
) -> Result<FarFieldTable> {
    let n = grid.len();
    let mut amplitudes = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let solver = HelmholtzSolver::new(shape, lambda, bc, grid)?;
        // right-hand sides for every incidence node at once
        let mut rhs = DMatrix::zeros(n, n);
        for j in 0..n {
            let omega = grid.nodes[j];
            let d = [-omega[0], -omega[1], -omega[2]];
            let col = solver.rhs_for(&d);
            rhs.set_column(j, &col);
        }
        let densities = solver
            .lu
            .solve(&rhs)
            .ok_or_else(|| Error::SolverFailure("singular discrete system".into()))?;
        let ff_rows: Vec<Vec<Complex64>> =
            grid.nodes.par_iter().map(|theta| solver.far_field_row(theta)).collect();
        let amp_rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let row = &ff_rows[i];
                (0..n)
                    .map(|j| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (m, r) in row.iter().enumerate() {
                            acc += r * densities[(m, j)];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        amplitudes.push(DMatrix::from_fn(n, n, |i, j| amp_rows[i][j]));
    }
    Ok(FarFieldTable {
        lambdas: lambdas.to_vec(),
        grid: grid.clone(),
        boundary_condition: bc,
        amplitudes,
    })
}
