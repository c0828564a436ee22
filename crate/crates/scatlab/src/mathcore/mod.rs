//! Special functions and spherical quadrature shared by every other module.

pub mod bessel;
pub mod grid;
pub mod harmonics;
pub mod legendre;

pub use bessel::{sph_bessel, sph_deriv, sph_j_all, sph_y_all, BesselKind};
pub use grid::SphereGrid;
pub use harmonics::{real_sph_harm, sh_basis, sh_basis_with_grad, sh_index, sh_len};
pub use legendre::{gauss_legendre, legendre_p, legendre_partial_sum};
