//! Numerical laboratory for exterior acoustic scattering by starlike
//! obstacles in three dimensions.
//!
//! The crate solves the exterior Dirichlet/Neumann Helmholtz problem with a
//! combined-field Nystrom method ([`forward`]), builds the discretized
//! scattering matrix and checks the amplitude identities ([`smatrix`]),
//! extracts the Birman-Krein scattering phase and the leading heat invariant
//! (obstacle volume, [`trace`]), and reconstructs a starlike shape from
//! cross-section data ([`inverse`]). Conventions: the incident wave is
//! e^{-i lambda omega.x}, and the far-field amplitude is the coefficient of
//! e^{i lambda r}/r of the scattered wave.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod error;
pub mod forward;
pub mod geometry;
pub mod inverse;
pub mod io;
pub mod mathcore;
pub mod smatrix;
pub mod trace;

pub use error::{cli_exit_code, Error, Result};
