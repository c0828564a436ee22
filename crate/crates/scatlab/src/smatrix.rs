//! Discretized scattering matrix, cross sections, and the amplitude /
//! S-matrix identity suite.
//!
//! All n=3 constants live here: c3 = -i/(2 pi), and the scattering matrix
//! S(lambda) = I + c3 * lambda * conj A(lambda, -theta, omega) acting on
//! L^2 of the sphere, discretized with symmetric sqrt-weight scaling so that
//! unitarity of the operator becomes unitarity of the matrix.

use crate::error::{Error, Result};
use crate::forward::FarFieldTable;
use crate::mathcore::SphereGrid;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// c_3 = (2 pi)^{-1} e^{-i pi/2} = -i / (2 pi).
pub const C3: Complex64 = Complex64::new(0.0, -1.0 / (2.0 * std::f64::consts::PI));

/// Dense unitary-by-construction discretization of S(lambda).
#[derive(Clone, Debug)]
pub struct SMatrixDisc {
    pub lambda: f64,
    pub grid: SphereGrid,
    /// Row i, column j: delta_ij + c3 lambda sqrt(w_i) conj(A[-theta_i][omega_j]) sqrt(w_j).
    pub matrix: DMatrix<Complex64>,
}

/// Cross-section samples C[lambda][theta] with provenance.
#[derive(Clone, Debug)]
pub struct CrossSectionData {
    pub lambdas: Vec<f64>,
    pub grid: SphereGrid,
    /// values[lambda_index][theta_index] >= 0.
    pub values: Vec<Vec<f64>>,
    pub provenance: String,
}

impl CrossSectionData {
    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.lambdas.len() {
            return Err(Error::IncompleteData(format!(
                "{} lambda rows for {} lambdas",
                self.values.len(),
                self.lambdas.len()
            )));
        }
        for (li, row) in self.values.iter().enumerate() {
            if row.len() != self.grid.len() {
                return Err(Error::IncompleteData(format!(
                    "lambda index {li}: {} values for {} grid nodes",
                    row.len(),
                    self.grid.len()
                )));
            }
            for (ti, v) in row.iter().enumerate() {
                if !v.is_finite() || *v < 0.0 {
                    return Err(Error::Domain(format!(
                        "cross section at lambda index {li}, theta index {ti} is {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Structured residual report of the identity suite; see `identity_residuals`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualReport {
    pub lambda: f64,
    /// max |A(theta,omega) - A(omega,theta)|.
    pub reciprocity: f64,
    /// Negative-lambda amplitudes are defined by conjugation, so this check
    /// is a tautology; the flag records that it was not independently tested.
    pub conjugate_symmetry_residual: f64,
    pub conjugate_symmetry_is_tautological: bool,
    /// max-norm of A(-omega,theta) - conj A(-theta,omega)
    ///   + (lambda/(2 pi i)) Int A(-omega,theta') conj A(-theta,theta') dtheta'.
    pub lax_phillips: f64,
    /// Same relation with the sign of the conjugated term flipped; reported
    /// as a diagnostic for the alternative reading of the constant, expected
    /// to be O(1) rather than small.
    pub lax_phillips_alternative_signing: f64,
    /// ||S S* - I||_F.
    pub unitarity: f64,
    /// ||S(lambda) S(-lambda) - I||_F.
    pub inverse_relation: f64,
    /// max over omega of |2 Im A(-omega,omega) - (lambda/2pi) C(omega)|.
    pub optical_theorem: f64,
}

impl ResidualReport {
    /// One named residual per line, fixed order, machine-parsable.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# identity residuals at lambda = {:.16e}\n", self.lambda));
        s.push_str(&format!("reciprocity {:.16e}\n", self.reciprocity));
        s.push_str(&format!(
            "conjugate-symmetry {:.16e} tautological={}\n",
            self.conjugate_symmetry_residual, self.conjugate_symmetry_is_tautological
        ));
        s.push_str(&format!("lax-phillips {:.16e}\n", self.lax_phillips));
        s.push_str(&format!(
            "lax-phillips-alt-signing {:.16e}\n",
            self.lax_phillips_alternative_signing
        ));
        s.push_str(&format!("unitarity {:.16e}\n", self.unitarity));
        s.push_str(&format!("inverse-relation {:.16e}\n", self.inverse_relation));
        s.push_str(&format!("optical-theorem {:.16e}\n", self.optical_theorem));
        s
    }
}

fn check_antipodal(grid: &SphereGrid) -> Result<()> {
    for i in 0..grid.len() {
        let j = grid.antipode(i);
        for k in 0..3 {
            if (grid.nodes[i][k] + grid.nodes[j][k]).abs() > 1e-12 {
                return Err(Error::InvalidGrid(format!(
                    "grid not closed under the antipodal map at node {i}"
                )));
            }
        }
        if (grid.weights[i] - grid.weights[j]).abs() > 1e-14 {
            return Err(Error::InvalidGrid(format!(
                "antipodal nodes {i},{j} carry different weights"
            )));
        }
    }
    Ok(())
}

fn lambda_entry(table: &FarFieldTable, lambda_index: usize) -> Result<&DMatrix<Complex64>> {
    table
        .amplitudes
        .get(lambda_index)
        .ok_or_else(|| {
            Error::IncompleteData(format!(
                "lambda index {lambda_index} out of range ({} tables)",
                table.amplitudes.len()
            ))
        })
}

/// C(lambda, theta) = Int |A(lambda, theta, omega)|^2 d omega by quadrature
/// over the incidence grid.
pub fn cross_section(table: &FarFieldTable, lambda_index: usize, theta_index: usize) -> Result<f64> {
    let amp = lambda_entry(table, lambda_index)?;
    if theta_index >= table.grid.len() {
        return Err(Error::IncompleteData(format!(
            "theta index {theta_index} out of range ({} nodes)",
            table.grid.len()
        )));
    }
    let mut c = 0.0;
    for (j, w) in table.grid.weights.iter().enumerate() {
        c += w * amp[(theta_index, j)].norm_sqr();
    }
    Ok(c)
}

/// All-theta cross sections for every lambda in the table.
pub fn cross_section_data(table: &FarFieldTable, provenance: &str) -> Result<CrossSectionData> {
    let n = table.grid.len();
    let mut values = Vec::with_capacity(table.lambdas.len());
    for li in 0..table.lambdas.len() {
        let mut row = Vec::with_capacity(n);
        for ti in 0..n {
            row.push(cross_section(table, li, ti)?);
        }
        values.push(row);
    }
    let data = CrossSectionData {
        lambdas: table.lambdas.clone(),
        grid: table.grid.clone(),
        values,
        provenance: provenance.to_string(),
    };
    data.validate()?;
    Ok(data)
}

/// S(lambda) = I + c3 lambda conj A(lambda, -theta, omega) with symmetric
/// quadrature scaling.
pub fn build_smatrix(table: &FarFieldTable, lambda_index: usize) -> Result<SMatrixDisc> {
    check_antipodal(&table.grid)?;
    let amp = lambda_entry(table, lambda_index)?;
    let lambda = table.lambdas[lambda_index];
    let n = table.grid.len();
    let sw: Vec<f64> = table.grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let ai = table.grid.antipode(i);
        for j in 0..n {
            let mut v = C3 * lambda * amp[(ai, j)].conj() * (sw[i] * sw[j]);
            if i == j {
                v += Complex64::new(1.0, 0.0);
            }
            m[(i, j)] = v;
        }
    }
    Ok(SMatrixDisc { lambda, grid: table.grid.clone(), matrix: m })
}

/// S(-lambda) built from the same table through the conjugation symmetry
/// A(-lambda, theta, omega) = conj A(lambda, theta, omega): the amplitude
/// part flips sign and loses its conjugation.
pub fn build_smatrix_negative(table: &FarFieldTable, lambda_index: usize) -> Result<SMatrixDisc> {
    check_antipodal(&table.grid)?;
    let amp = lambda_entry(table, lambda_index)?;
    let lambda = table.lambdas[lambda_index];
    let n = table.grid.len();
    let sw: Vec<f64> = table.grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let ai = table.grid.antipode(i);
        for j in 0..n {
            let mut v = -C3 * lambda * amp[(ai, j)] * (sw[i] * sw[j]);
            if i == j {
                v += Complex64::new(1.0, 0.0);
            }
            m[(i, j)] = v;
        }
    }
    Ok(SMatrixDisc { lambda: -lambda, grid: table.grid.clone(), matrix: m })
}

/// Computes the full identity suite for one frequency of a far-field table.
pub fn identity_residuals(table: &FarFieldTable, lambda_index: usize) -> Result<ResidualReport> {
    check_antipodal(&table.grid)?;
    let amp = lambda_entry(table, lambda_index)?;
    let lambda = table.lambdas[lambda_index];
    let grid = &table.grid;
    let n = grid.len();

    // (i) reciprocity, pointwise max-norm
    let mut reciprocity = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            reciprocity = reciprocity.max((amp[(i, j)] - amp[(j, i)]).norm());
        }
    }

    // (iii) Lax-Phillips relation over all (omega, theta) pairs, plus the
    // alternative-signing diagnostic and the optical-theorem specialization.
    // With B[j][k] = A(-omega_j, inc_k), the residual over the pair (i, j) is
    // B^T - conj B + (lambda/(2 pi i)) (B W B^H)^T entrywise, which keeps
    // the whole suite at dense-matmul cost.
    let lp_coeff = lambda / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut b = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let aj = grid.antipode(j);
        for k in 0..n {
            b[(j, k)] = amp[(aj, k)];
        }
    }
    let mut bw = b.clone();
    for k in 0..n {
        let w = Complex64::new(grid.weights[k], 0.0);
        for j in 0..n {
            bw[(j, k)] *= w;
        }
    }
    let quad = (&bw * b.adjoint()).transpose();
    let bt = b.transpose();
    let bc = b.conjugate();
    let mut lax_phillips = 0.0f64;
    let mut lax_alt = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let base = bt[(i, j)] + lp_coeff * quad[(i, j)];
            lax_phillips = lax_phillips.max((base - bc[(i, j)]).norm());
            lax_alt = lax_alt.max((base + bc[(i, j)]).norm());
        }
    }
    let mut optical = 0.0f64;
    for j in 0..n {
        let c: f64 = (0..n).map(|k| grid.weights[k] * b[(j, k)].norm_sqr()).sum();
        let lhs = 2.0 * b[(j, j)].im;
        optical = optical.max((lhs - lambda / (2.0 * std::f64::consts::PI) * c).abs());
    }

    // (iv) unitarity and (v) the inverse relation
    let s = build_smatrix(table, lambda_index)?;
    let sneg = build_smatrix_negative(table, lambda_index)?;
    let eye = DMatrix::<Complex64>::identity(n, n);
    let unitarity = (&s.matrix * s.matrix.adjoint() - &eye).norm();
    let inverse_relation = (&s.matrix * &sneg.matrix - &eye).norm();

    Ok(ResidualReport {
        lambda,
        reciprocity,
        conjugate_symmetry_residual: 0.0,
        conjugate_symmetry_is_tautological: true,
        lax_phillips,
        lax_phillips_alternative_signing: lax_alt,
        unitarity,
        inverse_relation,
        optical_theorem: optical,
    })
}
